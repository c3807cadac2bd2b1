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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pnphqs/degrade.hpp"
#include "pnphqs/diagnostics.hpp"
#include "pnphqs/hqs.hpp"
#include "pnphqs/metrics.hpp"
#include "pnphqs/phantom.hpp"
#include "pnphqs/tv_prox.hpp"

using namespace pnphqs;

namespace {

double max_abs(const Eigen::VectorXd& a, const std::vector<double>& b) {
  return (a - oracle::to_vec(b)).cwiseAbs().maxCoeff();
}

double system_residual(const oracle::DenseSystem& s, const Image& u) {
  return (s.lhs * oracle::to_vec(u) - s.rhs).norm() / s.rhs.norm();
}

Image small_phantom_observation(std::size_t size, double noise, std::uint64_t seed, Image* truth = nullptr) {
  const Phantom p = make_phantom(PhantomSpec::standard(size));
  if (truth != nullptr) *truth = p.image;
  return degrade(p.image, gaussian_psf(7, 1.2), noise, seed);
}

}  // namespace

TEST(Schedule, ClosedFormAndMonotone) {
  const Schedule s{0.1, 1.0};
  EXPECT_DOUBLE_EQ(s.rho_t(1), 1.1);
  EXPECT_NEAR(s.rho_t(10), 10.0 * std::pow(1.1, 10), 1e-12);
  for (int k = 1; k < 60; ++k) EXPECT_LT(s.rho_t(k), s.rho_t(k + 1));
  EXPECT_EQ(s.rho_z(7), s.rho_t(7));
  EXPECT_EQ((Schedule{0.1, 0.0}).rho_z(3), 0.0);
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::tv, Method::icnn, Method::gcnn, Method::icnn_tv, Method::gcnn_tv}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_STREQ(to_string(Method::gcnn_tv), "gcnn-tv");
  EXPECT_THROW(parse_method("admm"), std::invalid_argument);
  EXPECT_EQ(l1_kind(Method::gcnn), L1Kind::gradient);
  EXPECT_EQ(l1_kind(Method::icnn_tv), L1Kind::identity);
  EXPECT_FALSE(uses_external(Method::tv));
  EXPECT_FALSE(uses_internal(Method::gcnn));
}

TEST(UUpdate, DeltaPsfZeroPenaltiesReturnsObservation) {
  const Image v = oracle::random_image(8, 6, 1);
  const Image u = u_update(compute_symbols(Psf::delta(), 8, 6), v, nullptr, 0.0, nullptr, 0.0);
  EXPECT_LE(oracle::max_abs_diff(u.data(), v.data()), 1e-12);
}

TEST(UUpdate, HugePenaltyPullsToT) {
  const Image v = oracle::random_image(8, 8, 2);
  const PriorVariable t = oracle::random_image(8, 8, 3);
  const Image u = u_update(compute_symbols(gaussian_psf(3, 1.0), 8, 8), v, &t, 1e12, nullptr, 0.0);
  EXPECT_LE(distance(u, std::get<Image>(t)) / norm(std::get<Image>(t)), 1e-4);
}

TEST(UUpdate, MatchesDenseSolveSeed11) {
  const Psf psf = gaussian_psf(3, 1.0);
  const Image v = oracle::random_image(8, 8, 11);
  const PriorVariable t = oracle::random_image(8, 8, 12);
  const GradientField z = oracle::random_field(8, 8, 13);
  const Image u = u_update(compute_symbols(psf, 8, 8), v, &t, 2.0, &z, 3.0);
  const auto dense = oracle::dense_normal_solve(psf, v, false, std::get<Image>(t).data(), {}, 2.0, &z, 3.0);
  EXPECT_LE(max_abs(dense.solution, u.data()), 1e-8);
  EXPECT_LE(system_residual(dense, u), 1e-10);
}

TEST(UUpdate, GradientCouplingMatchesDenseSolve) {
  const Psf psf = Psf::from_weights(3, 3, {0.05, 0.10, 0.02, 0.20, 0.30, 0.08, 0.01, 0.15, 0.09});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Image v = oracle::random_image(7, 6, seed);
    const GradientField tf = oracle::random_field(7, 6, seed + 10);
    const GradientField z = oracle::random_field(7, 6, seed + 20);
    const PriorVariable t = tf;
    const Image u = u_update(compute_symbols(psf, 7, 6), v, &t, 1.7, &z, 0.4);
    const auto dense = oracle::dense_normal_solve(psf, v, true, tf.h, tf.v, 1.7, &z, 0.4);
    EXPECT_LE(max_abs(dense.solution, u.data()), 1e-8);
    EXPECT_LE(system_residual(dense, u), 1e-10);
  }
}

TEST(UUpdate, BlurredOutputIsAu) {
  const Psf psf = gaussian_psf(5, 1.4);
  const Image v = oracle::random_image(12, 10, 4);
  const GradientField z = oracle::random_field(12, 10, 5);
  NormalEquationSolver solver(compute_symbols(psf, 12, 10), v);
  const auto sol = solver.solve(nullptr, 0.0, &z, 5.0);
  EXPECT_LE(oracle::max_abs_diff(sol.blurred.data(), convolve_periodic(sol.u, psf).data()), 1e-9);
}

TEST(UUpdate, SingularSystemThrows) {
  // Symbol cos(omega) vanishes at omega = pi/2 on a width-8 grid.
  const Psf psf = Psf::from_weights(3, 1, {0.5, 0.0, 0.5});
  const Image v(8, 8, 1.0);
  EXPECT_THROW(u_update(compute_symbols(psf, 8, 8), v, nullptr, 0.0, nullptr, 0.0), std::domain_error);
  // An identity coupling keeps every frequency invertible.
  const PriorVariable t = Image(8, 8, 1.0);
  EXPECT_NO_THROW(u_update(compute_symbols(psf, 8, 8), v, &t, 0.1, nullptr, 0.0));
}

TEST(UUpdate, ArgumentErrors) {
  const Image v(4, 4);
  const auto s = compute_symbols(Psf::delta(), 4, 4);
  EXPECT_THROW(u_update(s, v, nullptr, 1.0, nullptr, 0.0), std::invalid_argument);
  EXPECT_THROW(u_update(s, v, nullptr, 0.0, nullptr, 1.0), std::invalid_argument);
  EXPECT_THROW(u_update(s, v, nullptr, -1.0, nullptr, 0.0), std::invalid_argument);
  const PriorVariable wrong = Image(3, 4);
  EXPECT_THROW(u_update(s, v, &wrong, 1.0, nullptr, 0.0), std::invalid_argument);
  EXPECT_THROW(u_update(s, Image(5, 4), nullptr, 0.0, nullptr, 0.0), std::invalid_argument);
}

TEST(Run, ZeroObservationStopsBeforeIterating) {
  RunConfig cfg;
  cfg.method = Method::tv;
  const RunResult r = run(cfg, Image(16, 16, 0.0), Psf::delta());
  EXPECT_TRUE(r.discrepancy_met);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.trace.stop_reason, "initial");
  EXPECT_EQ(r.restored, Image(16, 16, 0.0));
}

TEST(Run, TvStopsOnceDiscrepancyIsMet) {
  Image truth;
  const Image v = small_phantom_observation(64, 10.0, 1, &truth);
  RunConfig cfg;
  cfg.method = Method::tv;
  cfg.noise_std = 10.0;
  cfg.beta *= 1e-3;
  const RunResult r = run(cfg, v, gaussian_psf(7, 1.2));
  ASSERT_TRUE(r.discrepancy_met);
  EXPECT_EQ(r.trace.stop_reason, "discrepancy");
  EXPECT_LE(*r.trace.iterations.back().discrepancy_ratio, 1.0);
  EXPECT_GT(*r.trace.iterations[r.iterations - 2].discrepancy_ratio, 1.0);
  EXPECT_GT(psnr(truth, r.restored), psnr(truth, v));
}

TEST(Run, TraceRecordsScheduleAndBranches) {
  const Image v = small_phantom_observation(32, 10.0, 2);
  RunConfig cfg;
  cfg.method = Method::gcnn_tv;
  cfg.max_iterations = 5;
  cfg.stop_on_discrepancy = false;
  cfg.noise_std = 10.0;
  const DenoiserBank bank = zero_residual_bank(DenoiserDomain::gradient, 2);
  const RunResult r = run(cfg, v, gaussian_psf(7, 1.2), &bank);
  ASSERT_EQ(r.trace.iterations.size(), 5u);
  EXPECT_EQ(r.trace.stop_reason, "max_iterations");
  EXPECT_EQ(r.trace.l1, "gradient");
  EXPECT_TRUE(r.trace.has_t);
  EXPECT_TRUE(r.trace.has_z);
  EXPECT_DOUBLE_EQ(r.trace.initial_data_fit, 0.5 * squared_norm(v.data()));
  for (const auto& rec : r.trace.iterations) {
    const double rho = rec.k * std::pow(1.1, rec.k);
    EXPECT_NEAR(rec.rho_t, rho, 1e-12 * rho);
    EXPECT_NEAR(*rec.sigma, std::sqrt(cfg.alpha / rho), 1e-12);
    EXPECT_NEAR(*rec.gamma, std::sqrt(cfg.beta / rho), 1e-12);
    const double s = std::clamp(*rec.sigma, 2.0, 50.0);
    EXPECT_LE(std::abs(*rec.model_level - s), 1.0);
    EXPECT_EQ(*rec.ext_displacement_sq, 0.0);  // zero residual: t = D u exactly
    EXPECT_TRUE(rec.residual_t && rec.residual_z && rec.delta_t && rec.delta_z);
  }
}

TEST(Run, GcnnWithZeroBankHasMonotoneDataFit) {
  const Image v = small_phantom_observation(48, 15.0, 3);
  RunConfig cfg;
  cfg.method = Method::gcnn;
  cfg.noise_std = 15.0;
  cfg.stop_on_discrepancy = false;
  const DenoiserBank bank = zero_residual_bank(DenoiserDomain::gradient, 1);
  const RunResult r = run(cfg, v, gaussian_psf(7, 1.2), &bank);
  EXPECT_EQ(r.trace.c_ext, 0.0);
  EXPECT_EQ(r.trace.c_tilde(), 0.0);
  double prev = r.trace.initial_data_fit;
  for (const auto& rec : r.trace.iterations) {
    EXPECT_LE(rec.data_fit, prev * (1.0 + 1e-12));
    prev = rec.data_fit;
  }
  EXPECT_LE(r.trace.iterations.back().data_fit, r.trace.initial_data_fit);
  EXPECT_TRUE(audit_trace(r.trace, 0.0, 0.0).passed);
}

TEST(Run, ZeroRatioHybridReducesToCnnOnly) {
  const Image v = small_phantom_observation(32, 10.0, 4);
  const DenoiserBank bank = [] {
    std::vector<DnCnnModel> models;
    std::uint64_t seed = 100;
    for (double l : DenoiserBank::standard_levels())
      models.push_back(random_model(DenoiserDomain::image, l, seed++, 3, 0.05, 0.005));
    return DenoiserBank(std::move(models));
  }();
  RunConfig a;
  a.method = Method::icnn;
  a.max_iterations = 8;
  a.stop_on_discrepancy = false;
  a.noise_std = 10.0;
  RunConfig b = a;
  b.method = Method::icnn_tv;
  b.rho_z_ratio = 0.0;
  const RunResult ra = run(a, v, gaussian_psf(7, 1.2), &bank);
  const RunResult rb = run(b, v, gaussian_psf(7, 1.2), &bank);
  EXPECT_LE(oracle::max_abs_diff(ra.restored.data(), rb.restored.data()), 1e-12);
  ASSERT_EQ(ra.trace.iterations.size(), rb.trace.iterations.size());
  for (std::size_t i = 0; i < ra.trace.iterations.size(); ++i) {
    EXPECT_NEAR(ra.trace.iterations[i].data_fit, rb.trace.iterations[i].data_fit,
                1e-12 * ra.trace.iterations[i].data_fit);
  }
  // With a positive ratio the z-term changes the iterates.
  b.rho_z_ratio = 1.0;
  const RunResult rc = run(b, v, gaussian_psf(7, 1.2), &bank);
  EXPECT_GT(oracle::max_abs_diff(ra.restored.data(), rc.restored.data()), 1e-6);
}

TEST(Run, CustomDenoisersThroughHybridEntryPoint) {
  const Image v = small_phantom_observation(32, 8.0, 5);
  ExternalDenoiser ext;
  ext.domain = L1Kind::identity;
  ext.apply = [](const Image& u, double) -> PriorVariable { return u; };
  const InternalDenoiser tv = tv_denoiser();
  RunConfig cfg;
  cfg.method = Method::icnn_tv;
  cfg.max_iterations = 6;
  cfg.stop_on_discrepancy = false;
  const RunResult r = run_hybrid(cfg, v, gaussian_psf(7, 1.2), &ext, &tv);
  EXPECT_EQ(r.trace.iterations.size(), 6u);
  EXPECT_EQ(r.trace.c_ext, 0.0);
  EXPECT_GT(r.trace.c_int, 0.0);
  EXPECT_FALSE(r.trace.iterations[0].model_level.has_value());
  EXPECT_TRUE(audit_trace(r.trace, r.trace.c_ext, r.trace.c_int).passed);
}

TEST(Run, BankRequirementsAndConfigErrors) {
  const Image v(16, 16, 1.0);
  RunConfig cfg;
  cfg.method = Method::gcnn;
  EXPECT_THROW(run(cfg, v, Psf::delta()), std::invalid_argument);
  const DenoiserBank image_bank = zero_residual_bank(DenoiserDomain::image, 1);
  EXPECT_THROW(run(cfg, v, Psf::delta(), &image_bank), std::invalid_argument);
  cfg.method = Method::icnn;
  EXPECT_NO_THROW(run(cfg, v, Psf::delta(), &image_bank));
  cfg.alpha = 0.0;
  EXPECT_THROW(run(cfg, v, Psf::delta(), &image_bank), std::invalid_argument);
  cfg = RunConfig{};
  cfg.epsilon = 0.0;
  EXPECT_THROW(run(cfg, v, Psf::delta()), std::invalid_argument);
  cfg = RunConfig{};
  cfg.max_iterations = 0;
  EXPECT_THROW(run(cfg, v, Psf::delta()), std::invalid_argument);
  cfg = RunConfig{};
  cfg.beta = -1.0;
  EXPECT_THROW(run(cfg, v, Psf::delta()), std::invalid_argument);
}

TEST(Run, IteratesAreNotClipped) {
  Image v = small_phantom_observation(32, 20.0, 6);
  for (double& x : v.data()) x = x * 2.0 - 40.0;  // push values beyond [0,255]
  RunConfig cfg;
  cfg.method = Method::tv;
  cfg.max_iterations = 10;
  cfg.stop_on_discrepancy = false;
  cfg.beta *= 1e-3;
  const RunResult r = run(cfg, v, gaussian_psf(7, 1.2));
  const auto [lo, hi] = std::minmax_element(r.restored.data().begin(), r.restored.data().end());
  EXPECT_TRUE(*lo < 0.0 || *hi > 255.0);
}

TEST(Tune, RejectsZeroNoiseEstimate) {
  RunConfig cfg;
  EXPECT_THROW(tune_to_discrepancy(cfg, Image(16, 16, 1.0), Psf::delta()), std::invalid_argument);
}

TEST(Tune, SatisfyingConfigReturnedAtFirstProbe) {
  const Image v = small_phantom_observation(32, 10.0, 7);
  RunConfig cfg;
  cfg.method = Method::tv;
  cfg.noise_std = 10.0;
  cfg.max_iterations = 10;
  cfg.stop_on_discrepancy = false;
  const RunResult ref = run(cfg, v, gaussian_psf(7, 1.2));
  const double resid = 2.0 * ref.trace.iterations.back().data_fit;
  cfg.tau = resid / (static_cast<double>(v.size()) * 100.0);
  const TuneResult t = tune_to_discrepancy(cfg, v, gaussian_psf(7, 1.2));
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.probes, 1);
  EXPECT_EQ(t.multiplier, 1.0);
  EXPECT_EQ(t.config.alpha, cfg.alpha);
  EXPECT_EQ(t.config.beta, cfg.beta);
  EXPECT_NEAR(t.discrepancy_ratio, 1.0, 1e-12);
}

TEST(Tune, BracketsIntoBand) {
  Image truth;
  const Image v = small_phantom_observation(48, 12.0, 8, &truth);
  RunConfig cfg;
  cfg.method = Method::tv;
  cfg.noise_std = 12.0;
  const TuneResult t = tune_to_discrepancy(cfg, v, gaussian_psf(7, 1.2));
  EXPECT_TRUE(t.converged);
  EXPECT_LE(t.probes, 12);
  EXPECT_GE(t.discrepancy_ratio, 0.9);
  EXPECT_LE(t.discrepancy_ratio, 1.1);
  EXPECT_EQ(t.history.size(), static_cast<std::size_t>(t.probes));
}

TEST(Tune, BudgetExhaustionReportsBestCandidate) {
  const Image v = small_phantom_observation(32, 12.0, 9);
  RunConfig cfg;
  cfg.method = Method::tv;
  cfg.noise_std = 12.0;
  cfg.beta *= 1e6;
  const TuneResult t = tune_to_discrepancy(cfg, v, gaussian_psf(7, 1.2), nullptr, 1);
  EXPECT_EQ(t.probes, 1);
  EXPECT_FALSE(t.converged);
  EXPECT_EQ(t.history.size(), 1u);
}
