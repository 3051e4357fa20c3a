#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "fockbench/experiment.hpp"

namespace {

int run(fockbench::ExperimentKind kind, const std::string& config_path,
        int jobs, bool floor_l) {
  using namespace fockbench;
  try {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path, kind);
    if (jobs > 0) cfg.jobs = jobs;
    if (floor_l) cfg.floor_l = true;
    if (const char* env = std::getenv("FOCKBENCH_OUT"))
      if (*env) cfg.output_dir = env;
    return run_experiment(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "truncation budget error: " << e.what() << "\n";
    if (e.suggested_cutoff() > 0)
      std::cerr << "suggested cutoff: " << e.suggested_cutoff() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fockbench: truncated-Fock-space balanced homodyne measurement "
      "experiments"};
  app.require_subcommand(1);

  int exit_code = 0;
  for (fockbench::ExperimentKind kind :
       {fockbench::ExperimentKind::structural,
        fockbench::ExperimentKind::distribution,
        fockbench::ExperimentKind::collapse,
        fockbench::ExperimentKind::pitop,
        fockbench::ExperimentKind::asymptotics,
        fockbench::ExperimentKind::teleport,
        fockbench::ExperimentKind::sample}) {
    CLI::App* sub = app.add_subcommand(fockbench::to_string(kind),
                                       fockbench::to_string(kind) +
                                           " experiment sweep");
    auto config_path = std::make_shared<std::string>();
    auto jobs = std::make_shared<int>(0);
    auto floor_l = std::make_shared<bool>(false);
    sub->add_option("--config", *config_path, "TOML config file")->required();
    sub->add_option("--jobs", *jobs, "parallel workers for sweep points");
    sub->add_flag("--floor-l", *floor_l,
                  "use floor instead of round for l = [x |alpha|]");
    sub->callback([kind, config_path, jobs, floor_l, &exit_code] {
      exit_code = run(kind, *config_path, *jobs, *floor_l);
    });
  }

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
