// Command-line experiment runner.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "risprop/risprop.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
  std::optional<int> threads;
};

risprop::ExperimentConfig resolve_config(const Overrides& o) {
  risprop::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    cfg = risprop::load_config(o.config_path);
    std::clog << "config: " << o.config_path << "\n";
  }
  if (o.seed) {
    std::clog << "override seed: " << cfg.seed << " -> " << *o.seed << "\n";
    cfg.seed = *o.seed;
  }
  if (o.trials) {
    std::clog << "override trials: " << cfg.trials << " -> " << *o.trials << "\n";
    cfg.trials = *o.trials;
  }
  if (o.out) {
    std::clog << "override output_dir: " << cfg.output_dir << " -> " << *o.out << "\n";
    cfg.output_dir = *o.out;
  }
  if (o.threads) {
    std::clog << "override threads: " << cfg.threads << " -> " << *o.threads << "\n";
    cfg.threads = *o.threads;
  }
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

int emit(const risprop::ExperimentConfig& cfg, const risprop::CommandOutput& out,
         const std::string& stem) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (stem + ".csv"), out.csv);
  write_file(dir / (stem + ".manifest.json"), risprop::run_manifest(cfg, out));
  std::cout << out.summary;
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
  if (!out.valid) {
    std::cout << "validation: FAIL\n";
    return kExitValidation;
  }
  std::cout << "validation: ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS multi-cell interference propagation simulator"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--threads", o.threads, "worker threads (0: RIS_SIM_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);

  auto* topology = app.add_subcommand("topology", "sample and export one network topology");
  auto* power = app.add_subcommand("validate-power", "serving power vs its gamma fit");
  auto* outage = app.add_subcommand("outage-sweep", "outage probability over transmit power");
  auto* sis = app.add_subcommand("sis-sim", "agent-based SIS panels");
  auto* r0 = app.add_subcommand("r0-sweep", "propagation intensity sweeps");
  auto* laplace = app.add_subcommand("validate-laplace", "Laplace transform cross-validation");

  std::string axis = "ue_density", group_by = "bs_density";
  r0->add_option("--axis", axis, "ue_density | frequency | ris_elements")
      ->check(CLI::IsMember({"ue_density", "frequency", "ris_elements"}));
  r0->add_option("--group-by", group_by, "none | bs_density | ris_elements | ue_density")
      ->check(CLI::IsMember({"none", "bs_density", "ris_elements", "ue_density"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const risprop::ExperimentConfig cfg = resolve_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    int rc = kExitOk;
    if (*topology) rc = emit(cfg, risprop::cmd_topology(cfg), "topology");
    if (*power) rc = emit(cfg, risprop::cmd_validate_power(cfg), "validate_power");
    if (*outage) rc = emit(cfg, risprop::cmd_outage_sweep(cfg), "outage_sweep");
    if (*sis) rc = emit(cfg, risprop::cmd_sis_sim(cfg), "sis_sim");
    if (*r0) {
      const auto a = risprop::parse_axis(axis);
      const auto g = risprop::parse_group_by(group_by);
      rc = emit(cfg, risprop::cmd_r0_sweep(cfg, a, g), "r0_" + axis + "_" + group_by);
    }
    if (*laplace) rc = emit(cfg, risprop::cmd_validate_laplace(cfg), "validate_laplace");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::clog << "elapsed: " << secs << " s\n";
    return rc;
  } catch (const risprop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const risprop::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const risprop::TopologyError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const risprop::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
