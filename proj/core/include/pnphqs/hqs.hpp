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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pnphqs/dncnn.hpp"
#include "pnphqs/fft.hpp"
#include "pnphqs/forward_ops.hpp"
#include "pnphqs/image.hpp"
#include "pnphqs/psf.hpp"
#include "pnphqs/trace.hpp"

namespace pnphqs {

/// Which operator couples u to the external-prior variable t.
enum class L1Kind { identity, gradient };

/// t lives in the image domain (L1 = I) or the gradient domain (L1 = D).
using PriorVariable = std::variant<Image, GradientField>;

enum class Method { tv, icnn, gcnn, icnn_tv, gcnn_tv };

const char* to_string(Method method);
Method parse_method(std::string_view name);
bool uses_external(Method method);
bool uses_internal(Method method);
L1Kind l1_kind(Method method);

/// Penalty schedule rho^t_k = k (1+eps)^k and rho^z_k = ratio * rho^t_k.
struct Schedule {
  double epsilon = 0.1;
  double ratio = 1.0;

  double rho_t(int k) const;
  double rho_z(int k) const { return ratio * rho_t(k); }
};

struct RunConfig {
  Method method = Method::tv;
  double alpha = 255.0 * 255.0 * 0.01;
  double beta = 255.0 * 255.0 * 0.01;
  double epsilon = 0.1;
  int max_iterations = 30;
  /// Noise standard deviation estimate used by the discrepancy rule.
  double noise_std = 0.0;
  double tau = 1.0;
  bool stop_on_discrepancy = true;
  /// Limit of rho^z_k / rho^t_k. Zero drops the z-term from the u-update.
  double rho_z_ratio = 1.0;

  Schedule schedule() const { return {epsilon, rho_z_ratio}; }
  /// Throws std::invalid_argument for out-of-range parameters.
  void validate() const;
};

/// Exact FFT solver for
///   (A^T A + rho_t L1^T L1 + rho_z D^T D) u = A^T v + rho_t L1^T t + rho_z D^T z.
/// Holds its own FFT workspace; use one instance per thread.
class NormalEquationSolver {
public:
  NormalEquationSolver(OperatorSymbols symbols, const Image& observed);

  struct Solution {
    Image u;
    Image blurred;  // A u, obtained from the same spectrum
  };

  /// `t` / `z` may be null when the matching penalty is zero. Throws
  /// std::domain_error if the system matrix is singular at some frequency.
  Solution solve(const PriorVariable* t, double rho_t, const GradientField* z, double rho_z);

  const OperatorSymbols& symbols() const { return symbols_; }

private:
  OperatorSymbols symbols_;
  Fft2d fft_;
  Spectrum at_v_;  // conj(A_hat) .* v_hat
};

/// One-shot form of NormalEquationSolver::solve.
Image u_update(const OperatorSymbols& symbols, const Image& observed, const PriorVariable* t,
               double rho_t, const GradientField* z, double rho_z);

/// External prior: maps the current iterate u_k to t_{k+1} given sigma_k.
/// For L1 = D the result is a GradientField.
struct ExternalDenoiser {
  L1Kind domain = L1Kind::identity;
  std::function<PriorVariable(const Image& u, double sigma)> apply;
  /// Optional: training level of the network picked for sigma, for the trace.
  std::function<double(double sigma)> level_for;
};

/// Internal prior: maps D u_k to z_{k+1} given gamma_k.
using InternalDenoiser = std::function<GradientField(const GradientField& grad, double gamma)>;

ExternalDenoiser cnn_denoiser(const DenoiserBank& bank);
InternalDenoiser tv_denoiser();

struct RunResult {
  Image restored;
  Trace trace;
  bool discrepancy_met = false;
  int iterations = 0;
};

/// The hybrid iteration with arbitrary denoisers; either may be absent.
/// u_1 = 0; stops once ||A u - v||^2 <= tau n std^2 (if enabled) or after
/// max_iterations steps. `config.method` only labels the trace.
RunResult run_hybrid(const RunConfig& config, const Image& observed, const Psf& psf,
                     const ExternalDenoiser* external, const InternalDenoiser* internal);

/// Dispatches `config.method`: tv (TV prior only), icnn / gcnn (CNN only),
/// icnn_tv / gcnn_tv (both). Methods with a CNN need a bank whose domain
/// matches (image for icnn*, gradient for gcnn*).
RunResult run(const RunConfig& config, const Image& observed, const Psf& psf,
              const DenoiserBank* bank = nullptr);

struct TuneResult {
  RunConfig config;
  double multiplier = 1.0;
  double discrepancy_ratio = 0.0;
  int probes = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> history;  // (multiplier, final ratio)
};

/// Scales (alpha, beta) by a common multiplier, bracketing then bisecting in
/// log space, until the final discrepancy ratio of the run lies in
/// [low, high]. Returns the closest candidate with converged = false if the
/// probe budget runs out.
TuneResult tune_to_discrepancy(const RunConfig& base, const Image& observed, const Psf& psf,
                               const DenoiserBank* bank = nullptr, int max_probes = 12,
                               double low = 0.9, double high = 1.1);

}  // namespace pnphqs
