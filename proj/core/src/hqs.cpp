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

#include "pnphqs/hqs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnphqs/tv_prox.hpp"

namespace pnphqs {

const char* to_string(Method method) {
  switch (method) {
    case Method::tv:
      return "tv";
    case Method::icnn:
      return "icnn";
    case Method::gcnn:
      return "gcnn";
    case Method::icnn_tv:
      return "icnn-tv";
    case Method::gcnn_tv:
      return "gcnn-tv";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::tv, Method::icnn, Method::gcnn, Method::icnn_tv, Method::gcnn_tv}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected tv, icnn, gcnn, icnn-tv or gcnn-tv)");
}

bool uses_external(Method m) { return m != Method::tv; }
bool uses_internal(Method m) { return m == Method::tv || m == Method::icnn_tv || m == Method::gcnn_tv; }
L1Kind l1_kind(Method m) {
  return (m == Method::gcnn || m == Method::gcnn_tv) ? L1Kind::gradient : L1Kind::identity;
}

double Schedule::rho_t(int k) const { return k * std::pow(1.0 + epsilon, k); }

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("RunConfig: " + what); };
  if (uses_external(method) && !(alpha > 0.0)) fail("alpha must be positive");
  if (uses_internal(method) && !(beta > 0.0)) fail("beta must be positive");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (!(noise_std >= 0.0)) fail("noise_std must be >= 0");
  if (!(tau >= 0.0)) fail("tau must be >= 0");
  if (!(rho_z_ratio >= 0.0)) fail("rho_z_ratio must be >= 0");
}

// ---------------------------------------------------------------------------

NormalEquationSolver::NormalEquationSolver(OperatorSymbols symbols, const Image& observed)
    : symbols_(std::move(symbols)), fft_(symbols_.width, symbols_.height) {
  if (observed.width() != symbols_.width || observed.height() != symbols_.height) {
    throw std::invalid_argument("NormalEquationSolver: observation does not match symbol grid");
  }
  at_v_ = fft_.forward(observed);
  for (std::size_t i = 0; i < at_v_.size(); ++i) at_v_[i] *= std::conj(symbols_.blur[i]);
}

NormalEquationSolver::Solution NormalEquationSolver::solve(const PriorVariable* t, double rho_t,
                                                           const GradientField* z, double rho_z) {
  if (rho_t < 0.0 || rho_z < 0.0) throw std::invalid_argument("u_update: negative penalty");
  if (rho_t > 0.0 && t == nullptr) throw std::invalid_argument("u_update: rho_t > 0 without t");
  if (rho_z > 0.0 && z == nullptr) throw std::invalid_argument("u_update: rho_z > 0 without z");
  const std::size_t n = at_v_.size();
  const auto& S = symbols_;

  Spectrum num = at_v_;
  std::vector<double> den(n);
  for (std::size_t i = 0; i < n; ++i) den[i] = std::norm(S.blur[i]);

  if (t != nullptr) {
    if (const auto* img = std::get_if<Image>(t)) {
      if (img->width() != S.width || img->height() != S.height) {
        throw std::invalid_argument("u_update: t has the wrong dimensions");
      }
      const Spectrum th = fft_.forward(*img);
      for (std::size_t i = 0; i < n; ++i) {
        num[i] += rho_t * th[i];
        den[i] += rho_t;
      }
    } else {
      const auto& field = std::get<GradientField>(*t);
      if (field.width != S.width || field.height != S.height) {
        throw std::invalid_argument("u_update: t has the wrong dimensions");
      }
      const Spectrum th = fft_.forward(field.h);
      const Spectrum tv = fft_.forward(field.v);
      for (std::size_t i = 0; i < n; ++i) {
        num[i] += rho_t * (std::conj(S.dh[i]) * th[i] + std::conj(S.dv[i]) * tv[i]);
        den[i] += rho_t * S.gradient_power(i);
      }
    }
  }
  if (z != nullptr) {
    if (z->width != S.width || z->height != S.height) {
      throw std::invalid_argument("u_update: z has the wrong dimensions");
    }
    const Spectrum zh = fft_.forward(z->h);
    const Spectrum zv = fft_.forward(z->v);
    for (std::size_t i = 0; i < n; ++i) {
      num[i] += rho_z * (std::conj(S.dh[i]) * zh[i] + std::conj(S.dv[i]) * zv[i]);
      den[i] += rho_z * S.gradient_power(i);
    }
  }

  const double peak = *std::max_element(den.begin(), den.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(den[i] > peak * 1e-14)) {
      throw std::domain_error("u_update: normal equations singular at frequency (" +
                              std::to_string(i % S.width) + "," + std::to_string(i / S.width) +
                              ")");
    }
    num[i] /= den[i];
  }
  Solution out;
  out.u = fft_.inverse_image(num);
  for (std::size_t i = 0; i < n; ++i) num[i] *= S.blur[i];
  out.blurred = fft_.inverse_image(num);
  return out;
}

Image u_update(const OperatorSymbols& symbols, const Image& observed, const PriorVariable* t,
               double rho_t, const GradientField* z, double rho_z) {
  NormalEquationSolver solver(symbols, observed);
  return solver.solve(t, rho_t, z, rho_z).u;
}

// ---------------------------------------------------------------------------

ExternalDenoiser cnn_denoiser(const DenoiserBank& bank) {
  if (bank.empty()) throw std::invalid_argument("cnn_denoiser: empty bank");
  ExternalDenoiser d;
  const bool grad = bank.domain() == DenoiserDomain::gradient;
  d.domain = grad ? L1Kind::gradient : L1Kind::identity;
  const DenoiserBank* b = &bank;
  if (grad) {
    d.apply = [b](const Image& u, double sigma) -> PriorVariable {
      return infer_gradient(select_model(*b, sigma), u);
    };
  } else {
    d.apply = [b](const Image& u, double sigma) -> PriorVariable {
      return infer_image(select_model(*b, sigma), u);
    };
  }
  d.level_for = [b](double sigma) { return select_model(*b, sigma).noise_level(); };
  return d;
}

InternalDenoiser tv_denoiser() {
  return [](const GradientField& grad, double gamma) { return prox_tv(grad, TvThreshold{gamma}); };
}

namespace {

PriorVariable apply_l1(L1Kind kind, const Image& u) {
  if (kind == L1Kind::identity) return u;
  return gradient(u);
}

double prior_distance(const PriorVariable& a, const PriorVariable& b) {
  if (a.index() != b.index()) throw std::logic_error("prior variables of different kinds");
  if (const auto* ia = std::get_if<Image>(&a)) return distance(*ia, std::get<Image>(b));
  return distance(std::get<GradientField>(a), std::get<GradientField>(b));
}

void check_prior_shape(const PriorVariable& t, L1Kind kind, const Image& u) {
  if (kind == L1Kind::identity) {
    const auto* img = std::get_if<Image>(&t);
    if (img == nullptr || !img->same_shape(u)) {
      throw std::runtime_error("external denoiser returned a non-image or mis-sized result");
    }
  } else {
    const auto* f = std::get_if<GradientField>(&t);
    if (f == nullptr || !f->matches(u)) {
      throw std::runtime_error("external denoiser returned a non-gradient or mis-sized result");
    }
  }
}

// Displacement-to-noise-level ratio ||D(x) - x||^2 / eps^2 of one call.
double displacement_ratio(double disp_sq, double level) {
  if (std::isinf(level)) return 0.0;
  if (level > 0.0) return disp_sq / (level * level);
  return disp_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

RunResult run_hybrid(const RunConfig& config, const Image& observed, const Psf& psf,
                     const ExternalDenoiser* external, const InternalDenoiser* internal) {
  if (observed.empty()) throw std::invalid_argument("run: empty observation");
  if (external != nullptr && !(config.alpha > 0.0)) throw std::invalid_argument("run: alpha must be positive");
  if (internal != nullptr && !(config.beta > 0.0)) throw std::invalid_argument("run: beta must be positive");
  if (!(config.epsilon > 0.0) || config.max_iterations < 1 || !(config.noise_std >= 0.0) ||
      !(config.tau >= 0.0) || !(config.rho_z_ratio >= 0.0)) {
    throw std::invalid_argument("run: invalid schedule or stopping parameters");
  }
  const std::size_t w = observed.width();
  const std::size_t h = observed.height();
  const Schedule schedule = config.schedule();
  const L1Kind l1 = external != nullptr ? external->domain : L1Kind::identity;

  NormalEquationSolver solver(compute_symbols(psf, w, h), observed);

  RunResult result;
  Trace& trace = result.trace;
  trace.method = to_string(config.method);
  trace.alpha = config.alpha;
  trace.beta = config.beta;
  trace.epsilon = config.epsilon;
  trace.rho_z_ratio = config.rho_z_ratio;
  trace.max_iterations = config.max_iterations;
  trace.tau = config.tau;
  trace.noise_std = config.noise_std;
  trace.pixels = observed.size();
  trace.has_t = external != nullptr;
  trace.has_z = internal != nullptr;
  trace.l1 = l1 == L1Kind::identity ? "identity" : "gradient";

  const double n = static_cast<double>(observed.size());
  const double threshold = config.tau * n * config.noise_std * config.noise_std;
  auto ratio_of = [&](double residual_sq) -> std::optional<double> {
    if (threshold > 0.0) return residual_sq / threshold;
    return std::nullopt;
  };

  Image u(w, h);
  const double initial_sq = squared_norm(observed.data());  // ||A u_1 - v||^2 with u_1 = 0
  trace.initial_data_fit = 0.5 * initial_sq;

  std::optional<PriorVariable> t_prev;
  std::optional<GradientField> z_prev;
  if (external != nullptr) t_prev = apply_l1(l1, u);
  if (internal != nullptr) z_prev = GradientField(w, h);

  double c_ext = 0.0;
  double c_int = 0.0;
  trace.stop_reason = "max_iterations";

  if (config.stop_on_discrepancy && initial_sq <= threshold) {
    trace.stop_reason = "initial";
    result.discrepancy_met = true;
  } else {
    for (int k = 1; k <= config.max_iterations; ++k) {
      IterationRecord rec;
      rec.k = k;
      rec.rho_t = external != nullptr ? schedule.rho_t(k) : 0.0;
      rec.rho_z = internal != nullptr ? schedule.rho_z(k) : 0.0;

      std::optional<PriorVariable> t_next;
      if (external != nullptr) {
        const double sigma = std::sqrt(config.alpha / rec.rho_t);
        rec.sigma = sigma;
        if (external->level_for) rec.model_level = external->level_for(sigma);
        t_next = external->apply(u, sigma);
        check_prior_shape(*t_next, l1, u);
        const double disp = prior_distance(*t_next, apply_l1(l1, u));
        rec.ext_displacement_sq = disp * disp;
        c_ext = std::max(c_ext, displacement_ratio(disp * disp, sigma));
      }
      std::optional<GradientField> z_next;
      const GradientField du = internal != nullptr ? gradient(u) : GradientField();
      if (internal != nullptr) {
        const double gamma =
            rec.rho_z > 0.0 ? std::sqrt(config.beta / rec.rho_z) : std::numeric_limits<double>::infinity();
        rec.gamma = gamma;
        z_next = (*internal)(du, gamma);
        if (!z_next->same_shape(du)) throw std::runtime_error("internal denoiser changed the field size");
        const double disp = distance(*z_next, du);
        rec.int_displacement_sq = disp * disp;
        c_int = std::max(c_int, displacement_ratio(disp * disp, gamma));
      }

      auto sol = solver.solve(t_next ? &*t_next : nullptr, rec.rho_t, z_next ? &*z_next : nullptr,
                              rec.rho_z);

      const double residual_sq = squared_distance(sol.blurred.data(), observed.data());
      rec.data_fit = 0.5 * residual_sq;
      rec.discrepancy_ratio = ratio_of(residual_sq);
      rec.delta_u = distance(sol.u, u);
      if (t_next) {
        rec.residual_t = prior_distance(*t_next, apply_l1(l1, sol.u));
        rec.delta_t = prior_distance(*t_next, *t_prev);
      }
      if (z_next) {
        rec.residual_z = distance(*z_next, gradient(sol.u));
        rec.delta_z = distance(*z_next, *z_prev);
      }
      trace.iterations.push_back(rec);

      u = std::move(sol.u);
      if (t_next) t_prev = std::move(t_next);
      if (z_next) z_prev = std::move(z_next);
      result.iterations = k;

      if (config.stop_on_discrepancy && residual_sq <= threshold) {
        trace.stop_reason = "discrepancy";
        result.discrepancy_met = true;
        break;
      }
    }
  }

  trace.c_ext = c_ext;
  trace.c_int = c_int;
  trace.fill_bounds(c_ext, c_int);
  result.restored = std::move(u);
  return result;
}

RunResult run(const RunConfig& config, const Image& observed, const Psf& psf, const DenoiserBank* bank) {
  config.validate();
  std::optional<ExternalDenoiser> external;
  std::optional<InternalDenoiser> internal;
  if (uses_external(config.method)) {
    if (bank == nullptr || bank->empty()) {
      throw std::invalid_argument(std::string("run: method ") + to_string(config.method) +
                                  " requires a denoiser bank");
    }
    const DenoiserDomain want =
        l1_kind(config.method) == L1Kind::gradient ? DenoiserDomain::gradient : DenoiserDomain::image;
    if (bank->domain() != want) {
      throw std::invalid_argument(std::string("run: method ") + to_string(config.method) + " needs a " +
                                  to_string(want) + "-domain bank, got " + to_string(bank->domain()));
    }
    external = cnn_denoiser(*bank);
  }
  if (uses_internal(config.method)) internal = tv_denoiser();
  return run_hybrid(config, observed, psf, external ? &*external : nullptr,
                    internal ? &*internal : nullptr);
}

TuneResult tune_to_discrepancy(const RunConfig& base, const Image& observed, const Psf& psf,
                               const DenoiserBank* bank, int max_probes, double low, double high) {
  if (!(base.noise_std > 0.0)) {
    throw std::invalid_argument("tune_to_discrepancy: noise std estimate must be positive");
  }
  if (!(base.tau > 0.0)) throw std::invalid_argument("tune_to_discrepancy: tau must be positive");
  if (max_probes < 1) throw std::invalid_argument("tune_to_discrepancy: max_probes must be >= 1");
  base.validate();

  TuneResult best;
  best.config = base;
  double best_score = std::numeric_limits<double>::infinity();
  std::optional<double> lo;  // multipliers known to give a ratio below `low`
  std::optional<double> hi;  // ... above `high`
  double m = 1.0;
  for (int probe = 1; probe <= max_probes; ++probe) {
    RunConfig cfg = base;
    cfg.alpha = base.alpha * m;
    cfg.beta = base.beta * m;
    const RunResult r = run(cfg, observed, psf, bank);
    const double threshold = cfg.tau * static_cast<double>(observed.size()) * cfg.noise_std * cfg.noise_std;
    const double ratio = r.trace.iterations.empty()
                             ? 2.0 * r.trace.initial_data_fit / threshold
                             : r.trace.iterations.back().discrepancy_ratio.value_or(0.0);
    best.history.emplace_back(m, ratio);
    best.probes = probe;
    const double score = std::abs(std::log(std::max(ratio, 1e-300)));
    if (score < best_score) {
      best_score = score;
      best.config = cfg;
      best.multiplier = m;
      best.discrepancy_ratio = ratio;
    }
    if (ratio >= low && ratio <= high) {
      best.config = cfg;
      best.multiplier = m;
      best.discrepancy_ratio = ratio;
      best.converged = true;
      return best;
    }
    // Stronger regularization leaves a larger residual.
    if (ratio < low) {
      lo = m;
    } else {
      hi = m;
    }
    if (lo && hi) {
      m = std::sqrt(*lo * *hi);
    } else if (lo) {
      m *= 10.0;
    } else {
      m /= 10.0;
    }
  }
  return best;
}

}  // namespace pnphqs
