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

#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnphqs/pnphqs.hpp"

namespace pnphqs::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

json number_or_inf(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path sidecar_path(fs::path image) { return image.replace_extension(".json"); }

RoiRect parse_roi(const std::string& text) {
  std::vector<std::size_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(item, &used);
      if (used != item.size() || n < 0) throw std::invalid_argument(item);
      v.push_back(static_cast<std::size_t>(n));
    } catch (const std::exception&) {
      throw UsageError("--roi expects x,y,w,h with non-negative integers, got '" + text + "'");
    }
  }
  if (v.size() != 4) throw UsageError("--roi expects x,y,w,h, got '" + text + "'");
  return RoiRect{v[0], v[1], v[2], v[3]};
}

json roi_json(const RoiRect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

struct PsfOptions {
  std::size_t size = 15;
  double stddev = 1.2;
  std::string file;

  void attach(CLI::App* sub) {
    sub->add_option("--kernel-size", size, "Gaussian PSF size (odd)")->capture_default_str();
    sub->add_option("--kernel-std", stddev, "Gaussian PSF standard deviation")->capture_default_str();
    sub->add_option("--psf-file", file, "Plain-text PSF matrix (overrides the Gaussian)");
  }

  Psf build() const {
    if (!file.empty()) return load_psf_text(file);
    DegradeSpec spec;
    spec.kernel_size = size;
    spec.kernel_std = stddev;
    spec.noise_std = 0.0;
    return spec.psf();
  }

  std::string describe() const {
    if (!file.empty()) return "file:" + file;
    std::ostringstream s;
    s << "gaussian:" << size << ":" << stddev;
    return s.str();
  }
};

struct SolverOptions {
  double alpha = RunConfig{}.alpha;
  double beta = RunConfig{}.beta;
  double epsilon = RunConfig{}.epsilon;
  int max_iterations = RunConfig{}.max_iterations;
  double tau = RunConfig{}.tau;
  double rho_z_ratio = RunConfig{}.rho_z_ratio;
  bool no_stop = false;
  bool tune = false;
  int max_probes = 12;

  void attach(CLI::App* sub) {
    sub->add_option("--alpha", alpha, "External-prior scaling factor")->capture_default_str();
    sub->add_option("--beta", beta, "Internal-prior scaling factor")->capture_default_str();
    sub->add_option("--epsilon", epsilon, "Penalty schedule growth")->capture_default_str();
    sub->add_option("--max-iter", max_iterations, "Iteration cap K")->capture_default_str();
    sub->add_option("--tau", tau, "Discrepancy factor")->capture_default_str();
    sub->add_option("--rho-z-ratio", rho_z_ratio, "rho_z / rho_t")->capture_default_str();
    sub->add_flag("--no-stop", no_stop, "Run all K iterations even once the discrepancy is met");
    sub->add_flag("--tune", tune, "Scale alpha and beta until the discrepancy ratio is in [0.9, 1.1]");
    sub->add_option("--max-probes", max_probes, "Probe budget for --tune")->capture_default_str();
  }

  RunConfig config(Method method, double noise_std) const {
    RunConfig cfg;
    cfg.method = method;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.epsilon = epsilon;
    cfg.max_iterations = max_iterations;
    cfg.noise_std = noise_std;
    cfg.tau = tau;
    cfg.rho_z_ratio = rho_z_ratio;
    cfg.stop_on_discrepancy = !no_stop;
    return cfg;
  }
};

Method parse_method_arg(const std::string& name) {
  try {
    return parse_method(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

DenoiserDomain domain_for(Method m) {
  return l1_kind(m) == L1Kind::gradient ? DenoiserDomain::gradient : DenoiserDomain::image;
}

std::string bank_file_name(DenoiserDomain d) {
  return d == DenoiserDomain::gradient ? "gradient_bank.gdnw" : "image_bank.gdnw";
}

// Resolves the bank for `method` from an explicit path or a directory
// (flag or environment). Returns nullopt for methods without a CNN.
std::optional<DenoiserBank> resolve_bank(Method method, const std::string& bank_path,
                                         const std::string& bank_dir) {
  if (!uses_external(method)) return std::nullopt;
  const DenoiserDomain want = domain_for(method);
  fs::path path;
  if (!bank_path.empty()) {
    path = bank_path;
  } else {
    std::string dir = bank_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv(kBankDirEnv)) dir = env;
    }
    if (dir.empty()) {
      throw UsageError(std::string("method ") + to_string(method) +
                       " needs a denoiser bank: pass --bank or set " + kBankDirEnv);
    }
    path = fs::path(dir) / bank_file_name(want);
  }
  if (!fs::exists(path)) throw UsageError("denoiser bank not found: " + path.string());
  DenoiserBank bank = load_bank(path);
  if (bank.domain() != want) {
    throw UsageError(std::string("incompatible bank: method ") + to_string(method) + " needs a " +
                     to_string(want) + "-domain bank but " + path.string() + " holds " +
                     to_string(bank.domain()) + "-domain models");
  }
  return bank;
}

struct RestoreOutcome {
  RunResult result;
  RunConfig config;
  std::optional<TuneResult> tune;
};

RestoreOutcome restore_image(const RunConfig& cfg, const Image& v, const Psf& psf,
                             const DenoiserBank* bank, bool tune, int max_probes) {
  RestoreOutcome o;
  o.config = cfg;
  if (tune) {
    o.tune = tune_to_discrepancy(cfg, v, psf, bank, max_probes);
    o.config = o.tune->config;
  }
  o.result = run(o.config, v, psf, bank);
  return o;
}

std::optional<double> final_ratio(const Trace& t) {
  if (t.iterations.empty()) {
    const double thr = t.tau * static_cast<double>(t.pixels) * t.noise_std * t.noise_std;
    if (thr > 0.0) return 2.0 * t.initial_data_fit / thr;
    return std::nullopt;
  }
  return t.iterations.back().discrepancy_ratio;
}

// ---------------------------------------------------------------------------

int cmd_phantom(const std::string& out_path, std::size_t size, double background, bool as_json,
                std::ostream& out) {
  PhantomSpec spec = PhantomSpec::standard(size);
  spec.background = background;
  const Phantom p = make_phantom(spec);
  write_image(out_path, p.image);
  const fs::path meta = sidecar_path(out_path);
  write_text(meta, phantom_metadata_json(p, spec));
  if (as_json) {
    json j{{"image", out_path},
           {"metadata", meta.string()},
           {"width", p.image.width()},
           {"height", p.image.height()},
           {"roi", roi_json(p.roi)},
           {"shapes", p.shapes.size()}};
    out << j.dump(2) << "\n";
  } else {
    out << "wrote " << out_path << " (" << size << "x" << size << ", " << p.shapes.size()
        << " shapes) and " << meta.string() << "\n";
  }
  return kExitOk;
}

int cmd_degrade(const std::string& in_path, const std::string& out_path, const DegradeSpec& spec,
                bool as_json, std::ostream& out) {
  spec.validate();
  const Image u = read_image(in_path);
  const Image v = degrade(u, spec);
  write_image(out_path, v);
  // Report against what was stored: the file is clipped and 8-bit.
  Image stored = v;
  for (double& x : stored.data()) x = quantize(x);
  const double value = psnr(u, stored);
  if (as_json) {
    json j{{"input", in_path},
           {"output", out_path},
           {"kernel_size", spec.kernel_size},
           {"kernel_std", spec.kernel_std},
           {"noise_std", spec.noise_std},
           {"seed", spec.seed},
           {"psnr", number_or_inf(value)},
           {"psnr_unquantized", number_or_inf(psnr(u, v))}};
    out << j.dump(2) << "\n";
  } else {
    out << "PSNR " << std::fixed << std::setprecision(4) << value << " dB\n";
  }
  return kExitOk;
}

int cmd_restore(const std::string& in_path, const std::string& out_path, const std::string& method_name,
                double noise_std, const std::string& bank_path, const std::string& trace_path,
                const PsfOptions& psf_opts, const SolverOptions& solver, bool as_json, std::ostream& out) {
  const Method method = parse_method_arg(method_name);
  if (!(noise_std >= 0.0)) throw UsageError("--noise-std must be >= 0");
  if (solver.tune && !(noise_std > 0.0)) throw UsageError("--tune needs --noise-std > 0");
  const std::optional<DenoiserBank> bank = resolve_bank(method, bank_path, "");
  const Image v = read_image(in_path);
  const Psf psf = psf_opts.build();
  const RunConfig cfg = solver.config(method, noise_std);
  RestoreOutcome o = restore_image(cfg, v, psf, bank ? &*bank : nullptr, solver.tune, solver.max_probes);

  Trace& trace = o.result.trace;
  trace.metadata["input"] = in_path;
  trace.metadata["psf"] = psf_opts.describe();
  if (o.tune) {
    std::ostringstream m;
    m << std::setprecision(17) << o.tune->multiplier;
    trace.metadata["tune_multiplier"] = m.str();
    trace.metadata["tune_converged"] = o.tune->converged ? "true" : "false";
  }
  write_image(out_path, o.result.restored);
  if (!trace_path.empty()) write_text(trace_path, trace_to_json(trace));

  const auto ratio = final_ratio(trace);
  if (as_json) {
    json j{{"method", to_string(method)},
           {"output", out_path},
           {"iterations", o.result.iterations},
           {"stop_reason", trace.stop_reason},
           {"discrepancy_met", o.result.discrepancy_met},
           {"discrepancy_ratio", ratio ? json(*ratio) : json(nullptr)},
           {"alpha", o.config.alpha},
           {"beta", o.config.beta}};
    if (o.tune) {
      j["tune"] = {{"multiplier", o.tune->multiplier},
                   {"probes", o.tune->probes},
                   {"converged", o.tune->converged}};
    }
    if (!trace_path.empty()) j["trace"] = trace_path;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(method) << ": " << o.result.iterations << " iterations, stop: " << trace.stop_reason;
    if (ratio) out << ", discrepancy ratio " << std::setprecision(4) << *ratio;
    out << "\n";
    if (o.tune && !o.tune->converged) {
      out << "warning: tuning did not reach [0.9, 1.1] within " << o.tune->probes << " probes\n";
    }
  }
  return o.result.discrepancy_met ? kExitOk : kExitIterationCap;
}

int cmd_metrics(const std::string& ref_path, const std::string& test_path, const std::string& roi_text,
                const std::string& roi_from, const std::string& mask_a, const std::string& mask_b,
                std::ostream& out) {
  if (!roi_text.empty() && !roi_from.empty()) throw UsageError("use either --roi or --roi-from");
  if (mask_a.empty() != mask_b.empty()) throw UsageError("--mask-a and --mask-b go together");
  const Image ref = read_image(ref_path);
  const Image test = read_image(test_path);
  json j;
  j["psnr"] = number_or_inf(psnr(ref, test));
  j["ssim"] = ssim(ref, test);
  std::optional<RoiRect> roi;
  if (!roi_text.empty()) roi = parse_roi(roi_text);
  if (!roi_from.empty()) roi = roi_from_metadata_json(read_text(roi_from));
  if (roi) {
    j["roi"] = roi_json(*roi);
    j["roi_std"] = roi_std(test, *roi);
    j["roi_std_reference"] = roi_std(ref, *roi);
  }
  if (!mask_a.empty()) j["jaccard"] = jaccard(read_mask(mask_a), read_mask(mask_b));
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_audit(const std::string& trace_path, std::optional<double> c_ext, std::optional<double> c_int,
              bool zero_c, double rel_tol, bool as_json, std::ostream& out) {
  if (zero_c && (c_ext || c_int)) throw UsageError("--zero-c excludes --c-ext and --c-int");
  const Trace trace = trace_from_json(read_text(trace_path));
  const double ext = zero_c ? 0.0 : c_ext.value_or(trace.c_ext);
  const double in = zero_c ? 0.0 : c_int.value_or(trace.c_int);
  const AuditReport rep = audit_trace(trace, ext, in, rel_tol);
  out << (as_json ? audit_to_json(rep) : audit_summary(rep));
  return rep.passed ? kExitOk : kExitAuditFailed;
}

int cmd_stub_bank(const std::string& out_path, const std::string& domain_name, bool random,
                  std::uint64_t seed, std::uint32_t features, bool as_json, std::ostream& out) {
  DenoiserDomain domain;
  if (domain_name == "image") {
    domain = DenoiserDomain::image;
  } else if (domain_name == "gradient") {
    domain = DenoiserDomain::gradient;
  } else {
    throw UsageError("--domain must be image or gradient");
  }
  if (features == 0) throw UsageError("--features must be positive");
  DenoiserBank bank;
  if (random) {
    std::vector<DnCnnModel> models;
    std::uint64_t s = seed;
    for (double level : DenoiserBank::standard_levels()) {
      models.push_back(random_model(domain, level, s++, features, 0.05, 0.005));
    }
    bank = DenoiserBank(std::move(models));
  } else {
    bank = zero_residual_bank(domain, features);
  }
  save_bank(out_path, bank);
  if (as_json) {
    out << json{{"bank", out_path}, {"domain", to_string(domain)}, {"models", bank.size()},
                {"features", features}, {"kind", random ? "random" : "zero"}}
               .dump(2)
        << "\n";
  } else {
    out << "wrote " << bank.size() << " " << to_string(domain) << "-domain "
        << (random ? "random" : "zero-residual") << " models to " << out_path << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GridCell {
  std::size_t input = 0;
  std::size_t noise = 0;
  std::size_t method = 0;
};

struct GridInput {
  std::string name;
  Image clean;
  std::optional<RoiRect> roi;
};

int cmd_grid(const std::vector<std::string>& inputs, std::size_t phantom_size,
             const std::vector<std::string>& method_names, const std::vector<double>& noises,
             std::uint64_t seed, const std::string& out_dir, unsigned jobs, const std::string& bank_dir,
             const PsfOptions& psf_opts, const SolverOptions& solver, bool as_json, std::ostream& out,
             std::ostream& err) {
  if (method_names.empty()) throw UsageError("--methods is empty");
  if (noises.empty()) throw UsageError("--noise is empty");
  for (double n : noises) {
    if (!(n > 0.0)) throw UsageError("grid noise levels must be positive");
  }
  if (jobs == 0) jobs = 1;
  std::vector<Method> methods;
  for (const auto& name : method_names) methods.push_back(parse_method_arg(name));

  // Banks are loaded once and shared read-only by all workers.
  std::optional<DenoiserBank> banks[2];
  for (Method m : methods) {
    auto& slot = banks[static_cast<int>(domain_for(m))];
    if (uses_external(m) && !slot) slot = resolve_bank(m, "", bank_dir);
  }

  std::vector<GridInput> sources;
  if (inputs.empty()) {
    const PhantomSpec spec = PhantomSpec::standard(phantom_size);
    const Phantom p = make_phantom(spec);
    sources.push_back({"phantom" + std::to_string(phantom_size), p.image, p.roi});
  } else {
    for (const auto& path : inputs) {
      GridInput g{fs::path(path).stem().string(), read_image(path), std::nullopt};
      const fs::path meta = sidecar_path(path);
      if (fs::exists(meta)) g.roi = roi_from_metadata_json(read_text(meta));
      sources.push_back(std::move(g));
    }
  }
  fs::create_directories(out_dir);

  const Psf psf = psf_opts.build();
  std::vector<GridCell> cells;
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t n = 0; n < noises.size(); ++n)
      for (std::size_t m = 0; m < methods.size(); ++m) cells.push_back({i, n, m});

  // Degraded observations depend only on (input, noise): build them up front.
  std::vector<std::vector<Image>> observed(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t n = 0; n < noises.size(); ++n)
      observed[i].push_back(degrade(sources[i].clean, psf, noises[n], seed + 1000 * i + n));

  std::vector<json> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const GridCell& cell = cells[c];
      const GridInput& src = sources[cell.input];
      const Method method = methods[cell.method];
      const double noise = noises[cell.noise];
      const Image& v = observed[cell.input][cell.noise];
      json row{{"input", src.name}, {"noise_std", noise}, {"method", to_string(method)}};
      try {
        const auto& bank = banks[static_cast<int>(domain_for(method))];
        const DenoiserBank* b = uses_external(method) ? &*bank : nullptr;
        RestoreOutcome o = restore_image(solver.config(method, noise), v, psf, b, solver.tune, solver.max_probes);
        std::ostringstream stem;
        stem << src.name << "_std" << noise << "_" << to_string(method);
        const fs::path image_out = fs::path(out_dir) / (stem.str() + ".png");
        const fs::path trace_out = fs::path(out_dir) / (stem.str() + ".trace.json");
        o.result.trace.metadata["input"] = src.name;
        o.result.trace.metadata["seed"] = std::to_string(seed + 1000 * cell.input + cell.noise);
        write_image(image_out, o.result.restored);
        write_text(trace_out, trace_to_json(o.result.trace));
        row["psnr_degraded"] = number_or_inf(psnr(src.clean, v));
        row["psnr"] = number_or_inf(psnr(src.clean, o.result.restored));
        row["ssim"] = ssim(src.clean, o.result.restored);
        if (src.roi) {
          row["roi_std_degraded"] = roi_std(v, *src.roi);
          row["roi_std"] = roi_std(o.result.restored, *src.roi);
        }
        row["iterations"] = o.result.iterations;
        row["stop_reason"] = o.result.trace.stop_reason;
        row["alpha"] = o.config.alpha;
        row["beta"] = o.config.beta;
        if (o.tune) row["tune_converged"] = o.tune->converged;
        row["image"] = image_out.string();
        row["trace"] = trace_out.string();
      } catch (const std::exception& e) {
        row["error"] = e.what();
        failed = true;
        std::lock_guard<std::mutex> lock(err_mutex);
        err << "grid cell " << src.name << "/" << noise << "/" << to_string(method) << ": " << e.what() << "\n";
      }
      rows[c] = std::move(row);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::min<unsigned>(jobs, static_cast<unsigned>(cells.size()));
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json results = json::array();
  for (auto& r : rows) results.push_back(std::move(r));
  write_text(fs::path(out_dir) / "results.json", results.dump(2) + "\n");
  if (as_json) {
    out << results.dump(2) << "\n";
  } else {
    out << std::left << std::setw(16) << "input" << std::setw(8) << "std" << std::setw(10) << "method"
        << std::setw(12) << "psnr_in" << std::setw(12) << "psnr" << std::setw(10) << "ssim" << "stop\n";
    for (const auto& r : results) {
      out << std::setw(16) << r.at("input").get<std::string>() << std::setw(8) << r.at("noise_std").get<double>()
          << std::setw(10) << r.at("method").get<std::string>();
      if (r.contains("error")) {
        out << "error: " << r.at("error").get<std::string>() << "\n";
        continue;
      }
      out << std::fixed << std::setprecision(4) << std::setw(12) << r.at("psnr_degraded").get<double>()
          << std::setw(12) << r.at("psnr").get<double>() << std::setw(10) << r.at("ssim").get<double>()
          << r.at("stop_reason").get<std::string>() << "\n"
          << std::defaultfloat;
    }
  }
  return failed ? kExitError : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid plug-and-play HQS image restoration"};
  app.name("pnphqs");
  app.require_subcommand(1);

  bool as_json = false;
  std::function<int()> action;

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Write the synthetic test phantom and its JSON sidecar");
  std::string ph_out;
  std::size_t ph_size = 512;
  double ph_background = 50.0;
  phantom->add_option("--out", ph_out, "Output image (.png or .pgm)")->required();
  phantom->add_option("--size", ph_size, "Canvas side in pixels")->capture_default_str();
  phantom->add_option("--background", ph_background, "Background intensity")->capture_default_str();
  phantom->add_flag("--json", as_json, "Machine-readable output");
  phantom->callback([&] { action = [&] { return cmd_phantom(ph_out, ph_size, ph_background, as_json, out); }; });

  // degrade
  auto* deg = app.add_subcommand("degrade", "Blur and add Gaussian noise");
  std::string dg_in, dg_out;
  DegradeSpec dg_spec;
  deg->add_option("--in", dg_in, "Input image")->required();
  deg->add_option("--out", dg_out, "Output image")->required();
  deg->add_option("--kernel-size", dg_spec.kernel_size, "Gaussian PSF size (odd)")->capture_default_str();
  deg->add_option("--kernel-std", dg_spec.kernel_std, "Gaussian PSF standard deviation")->capture_default_str();
  deg->add_option("--noise-std", dg_spec.noise_std, "Noise standard deviation")->capture_default_str();
  deg->add_option("--seed", dg_spec.seed, "Noise seed")->capture_default_str();
  deg->add_flag("--json", as_json, "Machine-readable output");
  deg->callback([&] { action = [&] { return cmd_degrade(dg_in, dg_out, dg_spec, as_json, out); }; });

  // restore
  auto* res = app.add_subcommand("restore", "Run the HQS restoration");
  std::string rs_in, rs_out, rs_method = "tv", rs_bank, rs_trace;
  double rs_noise = 0.0;
  PsfOptions rs_psf;
  SolverOptions rs_solver;
  res->add_option("--in", rs_in, "Observed image")->required();
  res->add_option("--out", rs_out, "Restored image")->required();
  res->add_option("--method", rs_method, "tv, icnn, gcnn, icnn-tv or gcnn-tv")->capture_default_str();
  res->add_option("--noise-std", rs_noise, "Noise standard deviation estimate")->required();
  res->add_option("--bank", rs_bank, std::string("GDNW bank file (default: $") + kBankDirEnv + "/<domain>_bank.gdnw)");
  res->add_option("--trace", rs_trace, "Write the iteration trace as JSON");
  rs_psf.attach(res);
  rs_solver.attach(res);
  res->add_flag("--json", as_json, "Machine-readable output");
  res->callback([&] {
    action = [&] {
      return cmd_restore(rs_in, rs_out, rs_method, rs_noise, rs_bank, rs_trace, rs_psf, rs_solver, as_json, out);
    };
  });

  // metrics
  auto* met = app.add_subcommand("metrics", "Compare a test image to a reference (JSON output)");
  std::string mt_ref, mt_test, mt_roi, mt_roi_from, mt_mask_a, mt_mask_b;
  met->add_option("--ref", mt_ref, "Reference image")->required();
  met->add_option("--test", mt_test, "Test image")->required();
  met->add_option("--roi", mt_roi, "ROI rectangle x,y,w,h");
  met->add_option("--roi-from", mt_roi_from, "Read the ROI from a phantom JSON sidecar");
  met->add_option("--mask-a", mt_mask_a, "First segmentation mask");
  met->add_option("--mask-b", mt_mask_b, "Second segmentation mask");
  met->add_flag("--json", as_json, "Accepted for uniformity; output is always JSON");
  met->callback([&] {
    action = [&] { return cmd_metrics(mt_ref, mt_test, mt_roi, mt_roi_from, mt_mask_a, mt_mask_b, out); };
  });

  // audit
  auto* aud = app.add_subcommand("audit", "Check a trace against the convergence inequalities");
  std::string au_trace;
  std::optional<double> au_c_ext, au_c_int;
  bool au_zero = false;
  double au_tol = 1e-9;
  aud->add_option("--trace", au_trace, "Trace JSON")->required();
  aud->add_option("--c-ext", au_c_ext, "External constant (default: value stored in the trace)");
  aud->add_option("--c-int", au_c_int, "Internal constant (default: value stored in the trace)");
  aud->add_flag("--zero-c", au_zero, "Audit with C_ext = C_int = 0");
  aud->add_option("--rel-tol", au_tol, "Relative round-off tolerance")->capture_default_str();
  aud->add_flag("--json", as_json, "Machine-readable output");
  aud->callback([&] {
    action = [&] { return cmd_audit(au_trace, au_c_ext, au_c_int, au_zero, au_tol, as_json, out); };
  });

  // grid
  auto* grid = app.add_subcommand("grid", "Degrade and restore an image x method x noise grid");
  std::vector<std::string> gr_inputs;
  std::vector<std::string> gr_methods{"tv"};
  std::vector<double> gr_noise{15.0};
  std::size_t gr_size = 128;
  std::uint64_t gr_seed = 0;
  std::string gr_out, gr_bank_dir;
  unsigned gr_jobs = 1;
  PsfOptions gr_psf;
  SolverOptions gr_solver;
  grid->add_option("--inputs", gr_inputs, "Clean input images (default: the phantom)")->delimiter(',');
  grid->add_option("--phantom-size", gr_size, "Phantom size when no inputs are given")->capture_default_str();
  grid->add_option("--methods", gr_methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  grid->add_option("--noise", gr_noise, "Comma-separated noise levels")->delimiter(',')->capture_default_str();
  grid->add_option("--seed", gr_seed, "Base noise seed")->capture_default_str();
  grid->add_option("--out-dir", gr_out, "Output directory")->required();
  grid->add_option("--jobs", gr_jobs, "Parallel workers")->capture_default_str();
  grid->add_option("--bank-dir", gr_bank_dir, std::string("Bank directory (default: $") + kBankDirEnv + ")");
  gr_psf.attach(grid);
  gr_solver.attach(grid);
  grid->add_flag("--json", as_json, "Machine-readable output");
  grid->callback([&] {
    action = [&] {
      return cmd_grid(gr_inputs, gr_size, gr_methods, gr_noise, gr_seed, gr_out, gr_jobs, gr_bank_dir, gr_psf,
                      gr_solver, as_json, out, err);
    };
  });

  // stub-bank
  auto* stub = app.add_subcommand("stub-bank", "Write a zero-residual or random 25-level bank");
  std::string sb_out, sb_domain = "gradient";
  bool sb_random = false;
  std::uint64_t sb_seed = 0;
  std::uint32_t sb_features = DnCnnModel::kDefaultFeatures;
  stub->add_option("--out", sb_out, "Output GDNW bank")->required();
  stub->add_option("--domain", sb_domain, "image or gradient")->capture_default_str();
  stub->add_flag("--random", sb_random, "Random weights instead of a zero residual");
  stub->add_option("--seed", sb_seed, "Seed for --random")->capture_default_str();
  stub->add_option("--features", sb_features, "Hidden channel count")->capture_default_str();
  stub->add_flag("--json", as_json, "Machine-readable output");
  stub->callback([&] {
    action = [&] { return cmd_stub_bank(sb_out, sb_domain, sb_random, sb_seed, sb_features, as_json, out); };
  });

  std::vector<std::string> argv_store{"pnphqs"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "pnphqs: usage error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "pnphqs: error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace pnphqs::cli
