#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "orbitkit/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"orbitkit: set-valued orbit dynamics, premetric audits, and "
               "finite-topology verification"};
  app.require_subcommand(1);

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"verify-finite", "enumerate finite topologies and cross-check the orbit machinery"},
      {"descend", "run a variational descent or nested-intersection solver"},
      {"gallery", "drive a named dynamics scenario end to end"},
      {"audit", "audit the premetric axioms of a named space"},
      {"remetrize", "test attraction, continuity, and contraction trends of a named map"},
  };

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  long max_steps = 0;
  double tol = 0.0;
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "seed for sampled runs (overrides the config)");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--max-steps", max_steps, "step budget (overrides the config)");
    sub->add_option("--tol", tol, "tolerance (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);    // prints usage or help text
    return rc == 0 ? 0 : 2;  // --help exits 0; any parse failure is a config error
  }
  CLI::App* sub = app.get_subcommands().front();

  try {
    orbitkit::Json cfg = orbitkit::load_config_file(config_path);
    if (!cfg.is_object())
      throw orbitkit::ConfigError("config must be a JSON object");
    if (sub->count("--seed")) cfg["seed"] = seed;
    if (sub->count("--max-steps")) cfg["max_steps"] = max_steps;
    if (sub->count("--tol")) cfg["tol"] = tol;

    auto outcome = orbitkit::run_command(sub->get_name(), cfg);
    const std::string text = outcome.report.dump(2);
    if (sub->count("--out")) {
      std::ofstream f(out_path);
      if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
      }
      f << text << "\n";
    } else {
      std::cout << text << "\n";
    }
    return outcome.exit_code;
  } catch (const orbitkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
