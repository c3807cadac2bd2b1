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

#include "pnphqs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "pnphqs/hqs.hpp"
#include "pnphqs/image.hpp"

namespace pnphqs {

BoundedDenoiserReport estimate_C(const std::string& name, const FlatDenoiser& denoiser,
                                 const std::vector<std::vector<double>>& corpus,
                                 const std::vector<double>& epsilons) {
  if (corpus.empty()) throw std::invalid_argument("estimate_C: empty corpus");
  if (epsilons.empty()) throw std::invalid_argument("estimate_C: empty epsilon list");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("estimate_C: epsilons must be positive");
  }
  BoundedDenoiserReport report;
  report.denoiser = name;
  report.per_epsilon.resize(epsilons.size());
  for (std::size_t j = 0; j < epsilons.size(); ++j) report.per_epsilon[j].epsilon = epsilons[j];

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
      std::vector<double> out;
      try {
        out = denoiser(corpus[i], epsilons[j]);
      } catch (const std::exception& e) {
        throw std::runtime_error("estimate_C: denoiser '" + name + "' failed on input " +
                                 std::to_string(i) + ": " + e.what());
      }
      if (out.size() != corpus[i].size()) {
        throw std::runtime_error("estimate_C: denoiser '" + name + "' changed the input length");
      }
      const double ratio = squared_distance(out, corpus[i]) / (epsilons[j] * epsilons[j]);
      if (!std::isfinite(ratio)) {
        throw std::runtime_error("estimate_C: non-finite displacement on input " + std::to_string(i));
      }
      report.ratios.push_back(ratio);
      auto& b = report.per_epsilon[j];
      b.max_ratio = std::max(b.max_ratio, ratio);
      b.mean_ratio += ratio / static_cast<double>(corpus.size());
      report.c = std::max(report.c, ratio);
    }
  }
  report.samples = report.ratios.size();
  return report;
}

namespace {

void require_complete(const Trace& trace) {
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const IterationRecord& r = trace.iterations[i];
    if (r.k != static_cast<int>(i) + 1) {
      throw std::invalid_argument("incomplete trace: iteration " + std::to_string(i + 1) +
                                  " recorded as k = " + std::to_string(r.k));
    }
    if (trace.has_t && !r.residual_t) {
      throw std::invalid_argument("incomplete trace: missing residual_t at k = " + std::to_string(r.k));
    }
    if (trace.has_z && !r.residual_z) {
      throw std::invalid_argument("incomplete trace: missing residual_z at k = " + std::to_string(r.k));
    }
    const bool negative = r.data_fit < 0.0 || r.delta_u < 0.0 || r.residual_t.value_or(0.0) < 0.0 ||
                          r.residual_z.value_or(0.0) < 0.0;
    if (negative) {
      throw std::invalid_argument("malformed trace: negative norm at k = " + std::to_string(r.k));
    }
  }
  if (!(trace.initial_data_fit >= 0.0)) throw std::invalid_argument("malformed trace: initial data fit");
}

// Returns bound - value, and whether it lies within tolerance.
std::pair<double, bool> compare(double value, double bound, double rel_tol) {
  const double slack = bound - value;
  const double tol = rel_tol * std::max({1.0, std::abs(bound), std::abs(value)});
  return {slack, slack >= -tol};
}

}  // namespace

AuditReport audit_trace(const Trace& trace, double c_ext, double c_int, double rel_tol) {
  require_complete(trace);
  if (c_ext < 0.0 || c_int < 0.0) throw std::invalid_argument("audit_trace: constants must be >= 0");
  AuditReport report;
  report.c_ext = c_ext;
  report.c_int = c_int;
  report.c_tilde = trace.c_tilde(c_ext, c_int);
  const double ct = report.c_tilde;
  const double f1 = trace.initial_data_fit;
  const double r1 = std::sqrt(2.0 * f1);
  double worst = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const IterationRecord& r = trace.iterations[i];
    const double k = r.k;
    AuditEntry e;
    e.k = r.k;
    std::tie(e.energy_slack, e.energy_ok) = compare(r.data_fit, f1 + k * ct, rel_tol);
    const double prev = i == 0 ? f1 : trace.iterations[i - 1].data_fit;
    std::tie(e.step_slack, e.step_ok) = compare(r.data_fit, prev + ct, rel_tol);
    worst = std::min({worst, e.energy_slack, e.step_slack});
    if (trace.has_t && r.rho_t > 0.0) {
      const double bound = std::sqrt(1.0 / r.rho_t) * r1 + std::sqrt(2.0 * ct * k / r.rho_t);
      std::tie(e.residual_t_slack, e.residual_t_ok) = compare(*r.residual_t, bound, rel_tol);
      worst = std::min(worst, e.residual_t_slack);
    }
    if (trace.has_z && r.rho_z > 0.0) {
      const double bound = std::sqrt(1.0 / r.rho_z) * r1 + std::sqrt(2.0 * ct * k / r.rho_z);
      std::tie(e.residual_z_slack, e.residual_z_ok) = compare(*r.residual_z, bound, rel_tol);
      worst = std::min(worst, e.residual_z_slack);
    }
    if (!e.ok()) {
      report.passed = false;
      report.failed_iterations.push_back(e.k);
    }
    report.entries.push_back(e);
  }
  report.worst_slack = trace.iterations.empty() ? 0.0 : worst;
  return report;
}

std::string audit_to_json(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed;
  j["c_ext"] = report.c_ext;
  j["c_int"] = report.c_int;
  j["c_tilde"] = report.c_tilde;
  j["worst_slack"] = report.worst_slack;
  j["failed_iterations"] = report.failed_iterations;
  auto entries = nlohmann::ordered_json::array();
  for (const AuditEntry& e : report.entries) {
    entries.push_back({{"k", e.k},
                       {"energy_ok", e.energy_ok},
                       {"energy_slack", e.energy_slack},
                       {"step_ok", e.step_ok},
                       {"step_slack", e.step_slack},
                       {"residual_t_ok", e.residual_t_ok},
                       {"residual_t_slack", e.residual_t_slack},
                       {"residual_z_ok", e.residual_z_ok},
                       {"residual_z_slack", e.residual_z_slack}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string audit_summary(const AuditReport& report) {
  std::ostringstream out;
  out << "audit " << (report.passed ? "PASSED" : "FAILED") << ": " << report.entries.size()
      << " iterations, C_ext=" << report.c_ext << " C_int=" << report.c_int
      << " C~=" << report.c_tilde << ", worst slack " << report.worst_slack << "\n";
  for (int k : report.failed_iterations) out << "  violated at k=" << k << "\n";
  return out.str();
}

ScheduleReport check_schedule(double epsilon, int iterations, double ratio) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("check_schedule: epsilon must be positive");
  if (iterations < 1) throw std::invalid_argument("check_schedule: need at least one iteration");
  const Schedule schedule{epsilon, ratio};
  ScheduleReport rep;
  rep.epsilon = epsilon;
  rep.iterations = iterations;
  const double q = std::pow(1.0 + epsilon, -0.5);

  // Compensated summation keeps the long partial sums at full precision.
  double sum = 0.0;
  double carry = 0.0;
  double prev_rho = 0.0;
  for (int k = 1; k <= iterations; ++k) {
    const double rho = schedule.rho_t(k);
    if (rho < prev_rho) rep.non_decreasing = false;
    prev_rho = rho;
    const double term = std::sqrt(static_cast<double>(k) / rho);
    const double expected = std::pow(1.0 + epsilon, -0.5 * k);
    const double err = std::abs(term - expected) / expected;
    rep.max_term_error = std::max(rep.max_term_error, err);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    const double r = schedule.rho_z(k) / rho;
    if (std::abs(r - ratio) > 1e-15 * std::max(1.0, ratio)) rep.ratio_ok = false;
  }
  rep.terms_match = rep.max_term_error <= 1e-12;
  rep.partial_sum = sum;
  rep.closed_form = q * (1.0 - std::pow(q, iterations)) / (1.0 - q);
  rep.infinite_limit = q / (1.0 - q);
  rep.sum_error = std::abs(rep.partial_sum - rep.closed_form) / rep.closed_form;
  return rep;
}

}  // namespace pnphqs
