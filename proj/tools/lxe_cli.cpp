#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "lxe/analysis.hpp"
#include "lxe/experiment.hpp"

namespace {

int cmd_run(const std::string& path, std::size_t workers, const std::string& output) {
  auto cfg = lxe::load_config(path);
  if (workers > 0) cfg.workers = workers;
  if (!output.empty()) cfg.output_path = output;
  const auto res = lxe::run(cfg, &std::cerr);
  if (cfg.output_path.empty()) {
    lxe::write_csv(std::cout, res.rows);
  } else {
    lxe::emit(res, cfg.output_path);
    std::cerr << "wrote " << cfg.output_path << " and " << lxe::sidecar_path(cfg.output_path) << "\n";
  }
  return 0;
}

int cmd_crossings(const std::string& csv, const std::string& axis) {
  const auto rows = lxe::read_csv_file(csv);
  std::printf("family,L1,L2,x_star,std_error\n");
  for (const auto& c : lxe::crossings_json(rows, axis))
    std::printf("%s,%d,%d,%.6f,%.6f\n", c["family"].get<std::string>().c_str(), c["L1"].get<int>(),
                c["L2"].get<int>(), c["x_star"].get<double>(), c["std_error"].get<double>());
  return 0;
}

int cmd_collapse(const std::string& csv, const std::string& axis, double pc, double nu) {
  const auto rows = lxe::read_csv_file(csv);
  std::printf("family,residual\n");
  for (const auto& [key, curves] : lxe::group_curves(rows, axis)) {
    if (curves.size() < 2) continue;
    std::printf("%s,%.6e\n", key.c_str(), lxe::collapse_residual(curves, pc, nu));
  }
  return 0;
}

int cmd_leak(std::size_t L, std::size_t samples, std::uint64_t seed, std::size_t workers) {
  const auto est = lxe::estimate_leak_probability(L, samples, seed, workers);
  std::printf("L,n,q_mean,q_stderr,seed\n%zu,%zu,%.6f,%.6f,%llu\n", L, est.n_samples, est.mean, est.std_error,
              static_cast<unsigned long long>(seed));
  return 0;
}

int cmd_cft(const std::string& table, const std::vector<double>& aspects, const std::vector<double>& r_over_L,
            double time_scale, double amplitude) {
  lxe::RunConfig cfg;
  cfg.experiment = lxe::Experiment::CftTables;
  cfg.table = table;
  cfg.T_over_L = aspects;
  cfg.r_over_L = r_over_L;
  cfg.time_scale = time_scale;
  cfg.amplitude = amplitude;
  lxe::write_csv(std::cout, lxe::run(cfg).rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear cross-entropy of monitored Clifford circuits"};
  app.require_subcommand(1);

  std::string config, output, csv, axis = "p", table = "obc";
  std::size_t workers = 0, L = 0, samples = 1000;
  std::uint64_t seed = 1;
  double pc = 0.5, nu = 4.0 / 3.0, time_scale = 1.0, amplitude = 1.0;
  std::vector<double> aspects{0.25, 0.5, 1.0, 2.0, 4.0}, r_over_L{1.0};

  auto* run = app.add_subcommand("run", "Run a JSON-configured experiment");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Worker threads (overrides the config)");
  run->add_option("--output", output, "CSV path (overrides the config)");

  auto* crossings = app.add_subcommand("crossings", "Pairwise crossings of a results CSV");
  crossings->add_option("csv", csv, "Results CSV")->required()->check(CLI::ExistingFile);
  crossings->add_option("--x", axis, "Swept column")->check(CLI::IsMember({"p", "q", "r_xx", "noise_rate"}));

  auto* collapse = app.add_subcommand("collapse", "Scaling-collapse residual of a results CSV");
  collapse->add_option("csv", csv, "Results CSV")->required()->check(CLI::ExistingFile);
  collapse->add_option("--pc", pc, "Critical point")->required();
  collapse->add_option("--nu", nu, "Correlation-length exponent")->required()->check(CLI::PositiveNumber);
  collapse->add_option("--x", axis, "Swept column")->check(CLI::IsMember({"p", "q", "r_xx", "noise_rate"}));

  auto* leak = app.add_subcommand("leak", "Leak probability of random symmetric scramblers");
  leak->add_option("--L", L, "System size")->required()->check(CLI::Range(2, 1 << 20));
  leak->add_option("--samples", samples, "Number of scramblers")->check(CLI::PositiveNumber);
  leak->add_option("--seed", seed, "Seed")->required();
  leak->add_option("--workers", workers, "Worker threads");

  auto* cft = app.add_subcommand("cft", "Tabulate critical predictions");
  cft->add_option("--table", table, "obc, pbc or small-r")->required()->check(CLI::IsMember({"obc", "pbc", "small-r"}));
  cft->add_option("--aspect", aspects, "Aspect ratios T/L")->delimiter(',');
  cft->add_option("--r-over-L", r_over_L, "Block widths r/L")->delimiter(',');
  cft->add_option("--time-scale", time_scale, "Lattice-to-continuum time scale")->check(CLI::PositiveNumber);
  cft->add_option("--amplitude", amplitude, "Amplitude of the periodic prediction");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, workers, output);
    if (*crossings) return cmd_crossings(csv, axis);
    if (*collapse) return cmd_collapse(csv, axis, pc, nu);
    if (*leak) return cmd_leak(L, samples, seed, workers == 0 ? 1 : workers);
    if (*cft) return cmd_cft(table, aspects, r_over_L, time_scale, amplitude);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
