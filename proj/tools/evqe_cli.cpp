#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "evqe/harness.hpp"

namespace {

int default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary variational quantum eigensolver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_dir_override;
  int workers = default_workers();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", seed_override, "override the config seed");
    cmd->add_option("--workers", workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", out_dir_override,
                    "override the config output directory");
  };

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run);
  CLI::App* oracle =
      app.add_subcommand("oracle", "print exact ground-state data");
  add_common(oracle);
  CLI::App* ablate = app.add_subcommand(
      "ablate", "compare identity-initialized and fixed-CX growth");
  add_common(ablate);

  CLI11_PARSE(app, argc, argv);

  try {
    evqe::ExperimentConfig config = evqe::load_config(config_path);
    if (seed_override) config.seed = *seed_override;
    std::string out_dir = out_dir_override.value_or(config.out_dir);

    if (run->parsed()) {
      evqe::run_experiment(config, out_dir, workers);
      std::cout << "wrote " << out_dir << "/summary.json\n";
    } else if (oracle->parsed()) {
      evqe::oracle_report(config, std::cout);
    } else if (ablate->parsed()) {
      evqe::run_ablation(config, out_dir, workers);
      std::cout << "wrote " << out_dir << "/ablate.csv\n";
    }
  } catch (const evqe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
