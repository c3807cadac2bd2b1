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

// Reference implementations used as test oracles. Each one is written from
// the mathematical definition and shares no code with the library beyond
// the plain data types.

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pnphqs/dncnn.hpp"
#include "pnphqs/image.hpp"
#include "pnphqs/psf.hpp"

namespace oracle {

// Deterministic uniform/normal source for test inputs (std::mt19937_64).
std::vector<double> uniform_vector(std::size_t n, std::uint64_t seed, double lo, double hi);
pnphqs::Image random_image(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0,
                           double hi = 255.0);
pnphqs::GradientField random_field(std::size_t w, std::size_t h, std::uint64_t seed,
                                   double lo = -50.0, double hi = 50.0);

// Direct circular convolution, one output pixel at a time.
pnphqs::Image brute_convolve(const pnphqs::Image& u, const pnphqs::Psf& psf);

// Dense n x n matrices (n = W*H, row-major pixel order) of the operators.
Eigen::MatrixXd blur_matrix(const pnphqs::Psf& psf, std::size_t w, std::size_t h);
Eigen::MatrixXd diff_h_matrix(std::size_t w, std::size_t h);
Eigen::MatrixXd diff_v_matrix(std::size_t w, std::size_t h);

Eigen::VectorXd to_vec(const pnphqs::Image& img);
Eigen::VectorXd to_vec(const std::vector<double>& v);

// Assembles and solves the normal equations with a dense LU factorization.
// `t` is either an image (identity coupling, t_h used) or a gradient field
// (gradient coupling, t_h and t_v used).
struct DenseSystem {
  Eigen::MatrixXd lhs;
  Eigen::VectorXd rhs;
  Eigen::VectorXd solution;
};
DenseSystem dense_normal_solve(const pnphqs::Psf& psf, const pnphqs::Image& v, bool gradient_t,
                               const std::vector<double>& t_h, const std::vector<double>& t_v,
                               double rho_t, const pnphqs::GradientField* z, double rho_z);

// Literal 2-D DFT of a centered kernel, evaluated over its support.
std::complex<double> kernel_dft(const pnphqs::Psf& psf, std::size_t w, std::size_t h,
                                std::size_t kx, std::size_t ky);

// Numerical minimizer of g*||x|| + 0.5*||x - d||^2 over R^2: dense grid
// followed by compass-search refinement.
std::array<double, 2> minimize_prox_objective(double d0, double d1, double g);

// Window-by-window SSIM with an explicit 2-D Gaussian and weighted moments.
double reference_ssim(const pnphqs::Image& a, const pnphqs::Image& b);

// Straightforward DnCNN forward pass; returns the network output image
// (noisy - 255 * prediction).
pnphqs::Image reference_dncnn(const pnphqs::DnCnnModel& model, const pnphqs::Image& noisy);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
