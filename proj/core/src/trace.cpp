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

#include "pnphqs/trace.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace pnphqs {

using nlohmann::ordered_json;

void Trace::fill_bounds(double ext, double in) {
  const double ct = c_tilde(ext, in);
  const double r1 = std::sqrt(2.0 * initial_data_fit);
  for (IterationRecord& rec : iterations) {
    const double k = rec.k;
    rec.energy_bound = initial_data_fit + k * ct;
    rec.residual_t_bound.reset();
    rec.residual_z_bound.reset();
    if (has_t && rec.rho_t > 0.0) {
      rec.residual_t_bound = std::sqrt(1.0 / rec.rho_t) * r1 + std::sqrt(2.0 * ct * k / rec.rho_t);
    }
    if (has_z && rec.rho_z > 0.0) {
      rec.residual_z_bound = std::sqrt(1.0 / rec.rho_z) * r1 + std::sqrt(2.0 * ct * k / rec.rho_z);
    }
  }
}

namespace {

ordered_json opt(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::optional<double> get_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

template <typename T>
T get_req(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw std::invalid_argument(std::string("trace: missing field '") + key + "'");
  }
  return j.at(key).get<T>();
}

}  // namespace

std::string trace_to_json(const Trace& t) {
  ordered_json j;
  j["method"] = t.method;
  j["alpha"] = t.alpha;
  j["beta"] = t.beta;
  j["epsilon"] = t.epsilon;
  j["rho_z_ratio"] = t.rho_z_ratio;
  j["max_iterations"] = t.max_iterations;
  j["tau"] = t.tau;
  j["noise_std"] = t.noise_std;
  j["pixels"] = t.pixels;
  j["has_t"] = t.has_t;
  j["has_z"] = t.has_z;
  j["l1"] = t.l1;
  j["initial_data_fit"] = t.initial_data_fit;
  j["c_ext"] = num(t.c_ext);
  j["c_int"] = num(t.c_int);
  j["c_tilde"] = num(t.c_tilde());
  j["stop_reason"] = t.stop_reason;
  j["metadata"] = t.metadata;
  auto its = ordered_json::array();
  for (const IterationRecord& r : t.iterations) {
    ordered_json e;
    e["k"] = r.k;
    e["rho_t"] = r.rho_t;
    e["rho_z"] = r.rho_z;
    e["sigma"] = opt(r.sigma);
    e["gamma"] = opt(r.gamma);
    e["model_level"] = opt(r.model_level);
    e["data_fit"] = r.data_fit;
    e["residual_t"] = opt(r.residual_t);
    e["residual_z"] = opt(r.residual_z);
    e["delta_t"] = opt(r.delta_t);
    e["delta_z"] = opt(r.delta_z);
    e["delta_u"] = r.delta_u;
    e["ext_displacement_sq"] = opt(r.ext_displacement_sq);
    e["int_displacement_sq"] = opt(r.int_displacement_sq);
    e["discrepancy_ratio"] = opt(r.discrepancy_ratio);
    e["energy_bound"] = num(r.energy_bound);
    e["residual_t_bound"] = opt(r.residual_t_bound);
    e["residual_z_bound"] = opt(r.residual_z_bound);
    its.push_back(std::move(e));
  }
  j["iterations"] = std::move(its);
  return j.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("trace: not valid JSON: ") + e.what());
  }
  Trace t;
  try {
    t.method = get_req<std::string>(j, "method");
    t.alpha = get_req<double>(j, "alpha");
    t.beta = get_req<double>(j, "beta");
    t.epsilon = get_req<double>(j, "epsilon");
    t.rho_z_ratio = j.value("rho_z_ratio", 1.0);
    t.max_iterations = get_req<int>(j, "max_iterations");
    t.tau = get_req<double>(j, "tau");
    t.noise_std = get_req<double>(j, "noise_std");
    t.pixels = get_req<std::size_t>(j, "pixels");
    t.has_t = get_req<bool>(j, "has_t");
    t.has_z = get_req<bool>(j, "has_z");
    t.l1 = j.value("l1", std::string("identity"));
    t.initial_data_fit = get_req<double>(j, "initial_data_fit");
    t.c_ext = get_opt(j, "c_ext").value_or(0.0);
    t.c_int = get_opt(j, "c_int").value_or(0.0);
    t.stop_reason = j.value("stop_reason", std::string());
    if (j.contains("metadata")) t.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    const auto& its = j.at("iterations");
    if (!its.is_array()) throw std::invalid_argument("trace: 'iterations' is not an array");
    for (const auto& e : its) {
      IterationRecord r;
      r.k = get_req<int>(e, "k");
      r.rho_t = get_req<double>(e, "rho_t");
      r.rho_z = get_req<double>(e, "rho_z");
      r.sigma = get_opt(e, "sigma");
      r.gamma = get_opt(e, "gamma");
      r.model_level = get_opt(e, "model_level");
      r.data_fit = get_req<double>(e, "data_fit");
      r.residual_t = get_opt(e, "residual_t");
      r.residual_z = get_opt(e, "residual_z");
      r.delta_t = get_opt(e, "delta_t");
      r.delta_z = get_opt(e, "delta_z");
      r.delta_u = get_req<double>(e, "delta_u");
      r.ext_displacement_sq = get_opt(e, "ext_displacement_sq");
      r.int_displacement_sq = get_opt(e, "int_displacement_sq");
      r.discrepancy_ratio = get_opt(e, "discrepancy_ratio");
      r.energy_bound = get_opt(e, "energy_bound").value_or(0.0);
      r.residual_t_bound = get_opt(e, "residual_t_bound");
      r.residual_z_bound = get_opt(e, "residual_z_bound");
      t.iterations.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("trace: malformed field: ") + e.what());
  }
  return t;
}

}  // namespace pnphqs
