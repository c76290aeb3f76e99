#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "marcink: homogeneous degree-zero multiplier toolkit "
      "(condition norms, spectral filtering, maximal operators, "
      "operator-norm probes)"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;

  for (const char* name :
       {"check", "apply", "probe", "sweep", "verify", "bench"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--threads", threads,
                    "worker threads (default: MARCINK_THREADS or all cores)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw marcink::cli::ConfigError("config not found: " + config_path);
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw marcink::cli::ConfigError(std::string("config parse: ") +
                                        e.what());
      }
    }
    const auto cfg =
        marcink::cli::parse_config(command, doc, seed, out_dir, threads);
    return marcink::cli::run(cfg);
  } catch (const marcink::cli::ConfigError& e) {
    std::cerr << marcink::cli::error_json(2, "config", e.what()).dump()
              << "\n";
    return 2;
  } catch (const marcink::cli::VerificationFailure& e) {
    std::cerr << marcink::cli::error_json(4, "verification", e.what()).dump()
              << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << marcink::cli::error_json(3, "runtime", e.what()).dump()
              << "\n";
    return 3;
  }
}
