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

#include <functional>
#include <string>
#include <vector>

#include "pnphqs/trace.hpp"

namespace pnphqs {

/// A denoiser seen as a map on flat vectors, parameterized by its noise level.
using FlatDenoiser = std::function<std::vector<double>(const std::vector<double>& x, double eps)>;

struct EpsilonBreakdown {
  double epsilon = 0.0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

/// Empirical constant of the bounded-denoiser inequality
/// ||D_eps(x) - x||^2 <= eps^2 C over a corpus.
struct BoundedDenoiserReport {
  std::string denoiser;
  std::size_t samples = 0;
  double c = 0.0;
  std::vector<EpsilonBreakdown> per_epsilon;
  std::vector<double> ratios;  // one per (input, eps) pair, input-major
};

BoundedDenoiserReport estimate_C(const std::string& name, const FlatDenoiser& denoiser,
                                 const std::vector<std::vector<double>>& corpus,
                                 const std::vector<double>& epsilons);

struct AuditEntry {
  int k = 0;
  bool energy_ok = true;         // 0.5||Au_{k+1}-v||^2 <= 0.5||Au_1-v||^2 + k C~
  bool step_ok = true;           // 0.5||Au_{k+1}-v||^2 <= 0.5||Au_k-v||^2 + C~
  bool residual_t_ok = true;
  bool residual_z_ok = true;
  double energy_slack = 0.0;     // bound - value; negative means violated
  double step_slack = 0.0;
  double residual_t_slack = 0.0;
  double residual_z_slack = 0.0;

  bool ok() const { return energy_ok && step_ok && residual_t_ok && residual_z_ok; }
};

struct AuditReport {
  double c_ext = 0.0;
  double c_int = 0.0;
  double c_tilde = 0.0;
  bool passed = true;
  double worst_slack = 0.0;
  std::vector<AuditEntry> entries;
  std::vector<int> failed_iterations;
};

/// Checks the energy chain and both penalty-residual bounds at every step,
/// with C~ = (alpha/2) C_ext + (beta/2) C_int. A relative tolerance absorbs
/// floating-point round-off. Throws std::invalid_argument on incomplete traces.
AuditReport audit_trace(const Trace& trace, double c_ext, double c_int, double rel_tol = 1e-9);

std::string audit_to_json(const AuditReport& report);
std::string audit_summary(const AuditReport& report);

struct ScheduleReport {
  double epsilon = 0.0;
  int iterations = 0;
  bool non_decreasing = true;
  bool terms_match = true;       // sqrt(k / rho_k) == (1+eps)^(-k/2)
  double max_term_error = 0.0;
  double partial_sum = 0.0;      // sum_{k<=K} sqrt(k / rho_k)
  double closed_form = 0.0;      // geometric partial sum
  double infinite_limit = 0.0;   // q / (1 - q), q = (1+eps)^(-1/2)
  double sum_error = 0.0;
  bool ratio_ok = true;          // rho^z_k / rho^t_k == ratio for all k
  bool ok() const { return non_decreasing && terms_match && ratio_ok && sum_error <= 1e-12; }
};

/// Verifies the summability and ratio conditions imposed on the penalty
/// schedule rho_k = k (1+eps)^k.
ScheduleReport check_schedule(double epsilon, int iterations, double ratio = 1.0);

}  // namespace pnphqs
