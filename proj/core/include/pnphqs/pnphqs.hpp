// Copyright 2026 The pnphqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "pnphqs/degrade.hpp"
#include "pnphqs/diagnostics.hpp"
#include "pnphqs/dncnn.hpp"
#include "pnphqs/fft.hpp"
#include "pnphqs/forward_ops.hpp"
#include "pnphqs/gdnw.hpp"
#include "pnphqs/hqs.hpp"
#include "pnphqs/image.hpp"
#include "pnphqs/image_io.hpp"
#include "pnphqs/metrics.hpp"
#include "pnphqs/phantom.hpp"
#include "pnphqs/psf.hpp"
#include "pnphqs/trace.hpp"
#include "pnphqs/tv_prox.hpp"
