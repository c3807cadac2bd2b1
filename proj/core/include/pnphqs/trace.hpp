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

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pnphqs {

/// Diagnostics of one HQS step k, i.e. the transition u_k -> u_{k+1}.
/// Branch-specific entries are empty when the branch is disabled.
struct IterationRecord {
  int k = 0;
  double rho_t = 0.0;
  double rho_z = 0.0;
  std::optional<double> sigma;
  std::optional<double> gamma;
  std::optional<double> model_level;
  double data_fit = 0.0;                 // 0.5 * ||A u_{k+1} - v||^2
  std::optional<double> residual_t;      // ||t_{k+1} - L1 u_{k+1}||
  std::optional<double> residual_z;      // ||z_{k+1} - D u_{k+1}||
  std::optional<double> delta_t;         // ||t_{k+1} - t_k||
  std::optional<double> delta_z;         // ||z_{k+1} - z_k||
  double delta_u = 0.0;                  // ||u_{k+1} - u_k||
  std::optional<double> ext_displacement_sq;  // ||t_{k+1} - L1 u_k||^2
  std::optional<double> int_displacement_sq;  // ||z_{k+1} - D u_k||^2
  std::optional<double> discrepancy_ratio;    // ||A u_{k+1} - v||^2 / (tau n std^2)
  // Right-hand sides of the fixed-point proof inequalities, evaluated with
  // the trace's C_ext / C_int.
  double energy_bound = 0.0;
  std::optional<double> residual_t_bound;
  std::optional<double> residual_z_bound;
};

struct Trace {
  std::string method;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  double rho_z_ratio = 1.0;
  int max_iterations = 0;
  double tau = 1.0;
  double noise_std = 0.0;
  std::size_t pixels = 0;
  bool has_t = false;
  bool has_z = false;
  std::string l1;  // "identity" or "gradient"
  double initial_data_fit = 0.0;  // 0.5 * ||A u_1 - v||^2
  double c_ext = 0.0;
  double c_int = 0.0;
  std::string stop_reason;  // "discrepancy", "initial", "max_iterations"
  std::map<std::string, std::string> metadata;
  std::vector<IterationRecord> iterations;

  double c_tilde() const { return c_tilde(c_ext, c_int); }
  double c_tilde(double ext, double in) const {
    return (has_t ? 0.5 * alpha * ext : 0.0) + (has_z ? 0.5 * beta * in : 0.0);
  }
  /// Recomputes the bound fields of every record from the given constants.
  void fill_bounds(double ext, double in);
};

std::string trace_to_json(const Trace& trace);
/// Throws std::invalid_argument on malformed or incomplete traces.
Trace trace_from_json(const std::string& json);

}  // namespace pnphqs
