#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "marcink/calibration.hpp"
#include "marcink/dyadic.hpp"
#include "marcink/field_io.hpp"
#include "marcink/maximal.hpp"
#include "marcink/parallel.hpp"

namespace marcink::cli {

namespace fs = std::filesystem;
using multiplier::BoundaryData;
using multiplier::HomogeneousMultiplier;
using multiplier::cplx;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw std::runtime_error("short write: " + path.string());
}

HomogeneousMultiplier load_multiplier(const nlohmann::json& spec) {
  try {
    if (spec.is_string()) {
      std::ifstream in(spec.get<std::string>());
      if (!in)
        throw ConfigError("multiplier file not found: " +
                          spec.get<std::string>());
      nlohmann::json doc;
      in >> doc;
      return HomogeneousMultiplier::from_json(doc);
    }
    return HomogeneousMultiplier::from_json(spec);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid multiplier spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid multiplier spec: ") + e.what());
  }
}

}  // namespace

nlohmann::json error_json(int code, const std::string& kind,
                          const std::string& message) {
  return nlohmann::json{
      {"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
}

ExperimentConfig parse_config(const std::string& command,
                              const nlohmann::json& doc,
                              const std::optional<std::uint64_t>& seed_flag,
                              const std::optional<std::string>& out_flag,
                              const std::optional<int>& threads_flag) {
  static const std::vector<std::string> commands{"check", "apply",  "probe",
                                                 "sweep", "verify", "bench"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError("unknown command: " + command);
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  ExperimentConfig cfg;
  cfg.command = command;

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (!g.is_object()) throw ConfigError("grid must be an object");
    try {
      cfg.grid = fields::make_grid(field_or(g, "d", 2),
                                   field_or(g, "n", 256),
                                   field_or(g, "L", cfg.grid.L));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }
  cfg.p_list = field_or(doc, "p_list", cfg.p_list);
  for (const double p : cfg.p_list)
    if (!(p > 1.0)) throw ConfigError("p_list entries must exceed 1");
  cfg.sizes = field_or(doc, "sizes", cfg.sizes);
  for (const int n : cfg.sizes)
    if (n < 2 || (n & (n - 1)) != 0)
      throw ConfigError("sizes must be powers of two");
  if (doc.contains("strategies")) {
    cfg.strategies.clear();
    for (const auto& s : doc.at("strategies")) {
      try {
        cfg.strategies.push_back(
            probe::strategy_from_name(s.get<std::string>()));
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
    if (cfg.strategies.empty()) throw ConfigError("strategies may not be empty");
  }
  cfg.trials = field_or(doc, "trials", cfg.trials);
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  cfg.seed = field_or<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.out_dir = field_or<std::string>(doc, "out", cfg.out_dir);
  cfg.threads = field_or(doc, "threads", cfg.threads);

  if (doc.contains("report")) {
    const auto& r = doc.at("report");
    if (!r.is_object()) throw ConfigError("report must be an object");
    cfg.report.k_window.k_min = field_or(r, "k_min", cfg.report.k_window.k_min);
    cfg.report.k_window.k_max = field_or(r, "k_max", cfg.report.k_window.k_max);
    if (cfg.report.k_window.k_min > cfg.report.k_window.k_max)
      throw ConfigError("report.k_min must not exceed report.k_max");
    cfg.report.t_points = field_or(r, "t_points", cfg.report.t_points);
    cfg.report.t_log2_min = field_or(r, "t_log2_min", cfg.report.t_log2_min);
    cfg.report.t_log2_max = field_or(r, "t_log2_max", cfg.report.t_log2_max);
    cfg.report.qs = field_or(r, "qs", cfg.report.qs);
    cfg.report.alphas = field_or(r, "alphas", cfg.report.alphas);
    cfg.report.rs = field_or(r, "rs", cfg.report.rs);
    cfg.report.hardy_rs = field_or(r, "hardy_rs", cfg.report.hardy_rs);
    cfg.report.sobolev_grid_n =
        field_or(r, "sobolev_grid_n", cfg.report.sobolev_grid_n);
    cfg.report.multiparam_grid_n =
        field_or(r, "multiparam_grid_n", cfg.report.multiparam_grid_n);
    cfg.report.vq_samples = field_or(r, "vq_samples", cfg.report.vq_samples);
  }

  if (doc.contains("apply")) {
    const auto& a = doc.at("apply");
    cfg.apply_input = field_or<std::string>(a, "input", "");
    cfg.apply_output = field_or<std::string>(a, "output", cfg.apply_output);
  }
  if (doc.contains("verify")) {
    const auto& v = doc.at("verify");
    cfg.verify_n = field_or(v, "n", cfg.verify_n);
    cfg.verify_trials = field_or(v, "trials", cfg.verify_trials);
    if (cfg.verify_n < 8 || (cfg.verify_n & (cfg.verify_n - 1)) != 0)
      throw ConfigError("verify.n must be a power of two >= 8");
  }
  if (doc.contains("bench")) {
    cfg.bench_sizes = field_or(doc.at("bench"), "sizes", cfg.bench_sizes);
  }

  if (doc.contains("multiplier"))
    cfg.mult = load_multiplier(doc.at("multiplier"));

  if (seed_flag) cfg.seed = *seed_flag;
  if (out_flag) cfg.out_dir = *out_flag;
  if (threads_flag) cfg.threads = *threads_flag;

  if ((command == "check" || command == "apply" || command == "probe" ||
       command == "sweep") &&
      !cfg.mult)
    throw ConfigError("command '" + command + "' requires a multiplier");
  if (command == "apply" && cfg.apply_input.empty())
    throw ConfigError("apply requires apply.input (a raw field path)");

  // manifest echo of every tunable that can affect the run
  cfg.resolved = nlohmann::json{
      {"command", cfg.command},
      {"grid", {{"d", cfg.grid.d}, {"n", cfg.grid.n}, {"L", cfg.grid.L}}},
      {"p_list", cfg.p_list},
      {"sizes", cfg.sizes},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"out", cfg.out_dir},
      {"verify", {{"n", cfg.verify_n}, {"trials", cfg.verify_trials}}},
      {"bench", {{"sizes", cfg.bench_sizes}}},
      {"report",
       {{"k_min", cfg.report.k_window.k_min},
        {"k_max", cfg.report.k_window.k_max},
        {"t_points", cfg.report.t_points},
        {"t_log2_min", cfg.report.t_log2_min},
        {"t_log2_max", cfg.report.t_log2_max},
        {"qs", cfg.report.qs},
        {"alphas", cfg.report.alphas},
        {"rs", cfg.report.rs},
        {"hardy_rs", cfg.report.hardy_rs},
        {"sobolev_grid_n", cfg.report.sobolev_grid_n},
        {"multiparam_grid_n", cfg.report.multiparam_grid_n},
        {"vq_samples", cfg.report.vq_samples}}}};
  std::vector<std::string> strategy_names;
  for (const auto s : cfg.strategies)
    strategy_names.push_back(probe::strategy_name(s));
  cfg.resolved["strategies"] = strategy_names;
  if (cfg.mult) cfg.resolved["multiplier"] = cfg.mult->to_json();
  if (!cfg.apply_input.empty()) {
    cfg.resolved["apply"] = {{"input", cfg.apply_input},
                             {"output", cfg.apply_output}};
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

namespace {

double log_uniform_sample(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

SuiteResult suite_partitions(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double s = log_uniform_sample(rng, 1e-6, 1e6);
    const int e = std::ilogb(s);
    double sum = 0.0;
    for (int k = -e - 3; k <= -e + 2; ++k)
      sum += dyadic::eval_beta_sq(std::ldexp(s, k));
    worst = std::max(worst, std::fabs(sum - 1.0));
  }
  for (int i = 0; i < 10000; ++i) {
    double s = log_uniform_sample(rng, 1e-4, std::ldexp(1.0, 30));
    if (i % 2) s = -s;
    double sum = 0.0;
    for (int r = 0; r <= 32; ++r) sum += dyadic::eval_psi(r, s);
    worst = std::max(worst, std::fabs(sum - 1.0));
  }
  return {"partitions", worst < 1e-12, worst,
          "max |sum - 1| over 2x10^4 log-uniform samples"};
}

SuiteResult suite_plancherel(int n, int trials, std::uint64_t seed) {
  const fields::Grid g = fields::make_grid(2, n, 3.14159265358979323846);
  const HomogeneousMultiplier m{
      BoundaryData::lacunary_steps(-4, {1.0, -1.0, 1.0, -1.0, 1.0, -1.0}),
      BoundaryData::power_oscillation(1.0), 2};
  const fields::CachedSymbol sym = fields::precompute_symbol(g, m.symbol());
  const double bound = sym.max_abs();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const fields::Field f = fields::random_gaussian(g, seed + 17 * t);
    const double lhs = fields::lp_norm(fields::apply_symbol(f, sym), 2.0);
    const double rhs = bound * fields::lp_norm(f, 2.0);
    worst = std::max(worst, (lhs - rhs) / rhs);
  }
  return {"plancherel-contraction", worst < 1e-10, worst,
          "max relative excess of ||T f||_2 over max|m| ||f||_2"};
}

SuiteResult suite_reconstruction(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  const std::vector<BoundaryData> hs{
      BoundaryData::constant(cplx(0.4, 0.8)),
      BoundaryData::power_oscillation(1.1),
      BoundaryData::lacunary_steps(-2, {1.0, -0.5, 1.0}),
      BoundaryData::smooth_bumps({{cplx(1.0), 1.0, 0.5}}),
  };
  double worst = 0.0;
  for (const BoundaryData& h : hs) {
    const HomogeneousMultiplier m{h, h, 2};
    for (int i = 0; i < 100; ++i) {
      const double xi1 = std::pow(10.0, lg(rng));
      const double xi2 = std::pow(10.0, lg(rng));
      cplx acc(0.0);
      const int e1 = std::ilogb(xi1), e2 = std::ilogb(xi2);
      for (int k1 = -e1 - 2; k1 <= -e1 + 1; ++k1)
        for (int k2 = -e2 - 2; k2 <= -e2 + 1; ++k2)
          acc += multiplier::eval_m_k_rescaled(h, {k1, k2}, xi1, xi2);
      const double xi[] = {xi1, xi2};
      const double err = std::abs(acc - m.eval(xi)) /
                         std::max(1.0, std::abs(m.eval(xi)));
      worst = std::max(worst, err);
    }
  }
  return {"reconstruction", worst < 1e-10, worst,
          "max relative error of the rescaled-piece sum vs m"};
}

SuiteResult suite_chain(int n, int trials, std::uint64_t seed) {
  const fields::Grid g = fields::make_grid(2, n, 3.14159265358979323846);
  const BoundaryData h = BoundaryData::smooth_bumps({{cplx(1.0), 1.0, 0.4}});
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const fields::Field f = fields::random_gaussian(g, seed + 3 * t);
    const maximal::WeightField w =
        maximal::abs_weight(fields::random_gaussian(g, seed + 3 * t + 1));
    const std::array<int, 2> k{t % 3 - 1, -(t % 2)};
    const auto rep = probe::weighted_chain_check(f, w, h, k, 32);
    worst = std::min(worst, rep.normalized_margin);
  }
  return {"cauchy-schwarz-chain", worst >= -1e-12, worst,
          "min normalized margin (must be >= -1e-12)"};
}

SuiteResult suite_domination(int n, int trials, std::uint64_t seed) {
  const fields::Grid g = fields::make_grid(2, n, 3.14159265358979323846);
  double worst_near = 0.0, worst_cone = 0.0;
  for (int t = 0; t < trials; ++t) {
    const maximal::WeightField w =
        maximal::abs_weight(fields::random_gaussian(g, seed + 7 * t));
    for (const auto& [kappa, s] :
         {std::pair{0, 1.0}, std::pair{2, 0.4}, std::pair{-1, 6.0}}) {
      const auto [lo, hi] = maximal::projection_l_window(g, kappa, s, 12);
      const int mid = (lo + hi) / 2;
      worst_near = std::max(
          worst_near, maximal::near_domination_ratio(w, kappa, s, mid));
      worst_cone = std::max(
          worst_cone, maximal::cone_domination_ratio(w, kappa, s, mid));
    }
  }
  const bool pass = worst_near <= calibration::kNearDominationC &&
                    worst_cone <= calibration::kConeDominationC;
  return {"pointwise-domination", pass, std::max(worst_near, worst_cone),
          "max ratio vs frozen constants " +
              fmt17(calibration::kNearDominationC) + " / " +
              fmt17(calibration::kConeDominationC)};
}

SuiteResult suite_projector(int n, std::uint64_t seed) {
  const fields::Grid g = fields::make_grid(2, n, 3.14159265358979323846);
  const fields::Field f = fields::random_gaussian(g, seed + 5);
  const fields::Field once = multiplier::apply_S(f, 1, 0.7);
  const fields::Field twice = multiplier::apply_S(once, 1, 0.7);
  double worst = 0.0;
  for (std::size_t i = 0; i < once.samples.size(); ++i)
    worst = std::max(worst, std::abs(once.samples[i] - twice.samples[i]));
  const double scale = fields::lp_norm(f, 2.0);
  return {"sharp-cut-projector", worst < 1e-12 * scale, worst / scale,
          "idempotence defect of the sharp cutoff"};
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(int n, int trials,
                                           std::uint64_t seed) {
  std::vector<SuiteResult> out;
  out.push_back(suite_partitions(seed));
  out.push_back(suite_plancherel(n, trials, seed));
  out.push_back(suite_reconstruction(seed));
  out.push_back(suite_chain(n, trials, seed));
  out.push_back(suite_domination(n, std::min(trials, 5), seed));
  out.push_back(suite_projector(n, seed));
  return out;
}

// ---------------------------------------------------------------------------
// command drivers
// ---------------------------------------------------------------------------

namespace {

void write_manifest(const ExperimentConfig& cfg) {
  nlohmann::json manifest = cfg.resolved;
  manifest["artifact_version"] = "0.1.0";
  write_text(fs::path(cfg.out_dir) / "manifest.json",
             manifest.dump(2) + "\n");
}

int run_check(const ExperimentConfig& cfg) {
  const auto report = norms::build_report(*cfg.mult, cfg.report);
  write_text(fs::path(cfg.out_dir) / "report.json",
             report.to_json().dump(2) + "\n");
  write_text(fs::path(cfg.out_dir) / "report.csv", report.to_csv());
  std::printf("check: %zu condition entries, %zu predicted ranges\n",
              report.entries.size(), report.ranges.size());
  for (const auto& r : report.ranges) {
    std::printf("  %-28s p in (%s, %s)  %s\n", r.rule.c_str(),
                fmt17(r.p_lo).c_str(),
                std::isinf(r.p_hi) ? "inf" : fmt17(r.p_hi).c_str(),
                r.space.c_str());
  }
  return 0;
}

int run_apply(const ExperimentConfig& cfg) {
  const fields::Field in = fields::read_field(cfg.apply_input);
  if (in.grid.d != cfg.mult->d)
    throw ConfigError("apply: field dimension != multiplier dimension");
  const fields::Field out = fields::apply_symbol(in, cfg.mult->symbol());
  fields::write_field((fs::path(cfg.out_dir) / cfg.apply_output).string(),
                      out);
  std::printf("apply: wrote %s (n=%d, d=%d)\n", cfg.apply_output.c_str(),
              in.grid.n, in.grid.d);
  return 0;
}

int run_probe(const ExperimentConfig& cfg) {
  std::string csv = "size,p,strategy,seed,ratio,growth\n";
  nlohmann::json all = nlohmann::json::array();
  for (const double p : cfg.p_list) {
    const auto res = probe::probe_norm(*cfg.mult, p, cfg.grid,
                                       cfg.strategies, cfg.trials, cfg.seed);
    const std::string body = res.to_csv();
    csv += body.substr(body.find('\n') + 1);
    all.push_back(res.to_json());
    const auto& best = res.best_row(cfg.grid.n);
    const fields::Field witness =
        probe::rebuild_witness(*cfg.mult, p, cfg.grid, best);
    fields::write_field(
        (fs::path(cfg.out_dir) / ("witness_p" + fmt17(p) + ".field"))
            .string(),
        witness);
    std::printf("probe: p=%s best ratio %s (%s)\n", fmt17(p).c_str(),
                fmt17(res.best_ratios.front()).c_str(),
                best.strategy.c_str());
  }
  write_text(fs::path(cfg.out_dir) / "probe.csv", csv);
  write_text(fs::path(cfg.out_dir) / "probe.json", all.dump(2) + "\n");
  return 0;
}

int run_sweep(const ExperimentConfig& cfg) {
  std::string csv = "size,p,strategy,seed,ratio,growth\n";
  nlohmann::json all = nlohmann::json::array();
  for (const double p : cfg.p_list) {
    const auto res =
        probe::sweep_refinement(*cfg.mult, p, cfg.sizes, cfg.strategies,
                                cfg.trials, cfg.seed, cfg.grid.L);
    const std::string body = res.to_csv();
    csv += body.substr(body.find('\n') + 1);
    all.push_back(res.to_json());
    std::printf("sweep: p=%s best ratios", fmt17(p).c_str());
    for (const double r : res.best_ratios) std::printf(" %s", fmt17(r).c_str());
    std::printf("\n");
  }
  write_text(fs::path(cfg.out_dir) / "sweep.csv", csv);
  write_text(fs::path(cfg.out_dir) / "sweep.json", all.dump(2) + "\n");
  return 0;
}

int run_verify(const ExperimentConfig& cfg) {
  const auto suites =
      run_verify_suites(cfg.verify_n, cfg.verify_trials, cfg.seed);
  std::string csv = "suite,status,metric,detail\n";
  bool all_pass = true;
  for (const auto& s : suites) {
    std::printf("%-24s %s  metric=%s\n", s.suite.c_str(),
                s.pass ? "PASS" : "FAIL", fmt17(s.metric).c_str());
    csv += s.suite + "," + (s.pass ? "pass" : "fail") + "," + fmt17(s.metric) +
           "," + s.detail + "\n";
    all_pass = all_pass && s.pass;
  }
  write_text(fs::path(cfg.out_dir) / "verify.csv", csv);
  if (!all_pass) throw VerificationFailure("one or more suites failed");
  return 0;
}

int run_bench(const ExperimentConfig& cfg) {
  std::string csv = "op,n,millis\n";
  for (const int n : cfg.bench_sizes) {
    const fields::Grid g = fields::make_grid(2, n, 3.14159265358979323846);
    const maximal::WeightField w =
        maximal::abs_weight(fields::random_gaussian(g, cfg.seed));
    const fields::Field f = fields::random_gaussian(g, cfg.seed + 1);
    auto time_op = [&](const char* name, auto&& op) {
      double best = 1e300;
      for (int rep = 0; rep < 3; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        op();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(
            best,
            std::chrono::duration<double, std::milli>(stop - start).count());
      }
      csv += std::string(name) + "," + std::to_string(n) + "," + fmt17(best) +
             "\n";
      std::printf("bench %-22s n=%-5d %10.3f ms\n", name, n, best);
    };
    time_op("hl-maximal-axis",
            [&] { (void)maximal::hl_maximal_axis(w, 1); });
    time_op("strong-maximal", [&] { (void)maximal::strong_maximal(w); });
    time_op("directional-maximal",
            [&] { (void)maximal::directional_maximal(w, 1, 1.3); });
    time_op("lacunary-maximal", [&] {
      (void)maximal::lacunary_maximal(
          w, 1.5, [](int, double) { return 1.0 / 7.875; }, -2, 2, 8);
    });
    time_op("smoothed-projection", [&] {
      (void)maximal::smoothed_projection(f, 0, 1.0, 0,
                                         maximal::ProjectionPart::All);
    });
    time_op("transform-forward",
            [&] { (void)fields::transform_forward(f); });
  }
  write_text(fs::path(cfg.out_dir) / "bench.csv", csv);
  return 0;
}

}  // namespace

int run(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) set_default_threads(cfg.threads);
  fs::create_directories(cfg.out_dir);
  write_manifest(cfg);
  if (cfg.command == "check") return run_check(cfg);
  if (cfg.command == "apply") return run_apply(cfg);
  if (cfg.command == "probe") return run_probe(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "bench") return run_bench(cfg);
  throw ConfigError("unknown command: " + cfg.command);
}

}  // namespace marcink::cli
