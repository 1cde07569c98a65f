// entroscope: exact-diagonalization entropy experiments on the
// next-nearest-neighbour Heisenberg chain.

#include "entroscope/config.hpp"
#include "entroscope/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace entroscope;

  CLI::App app{"Subsystem entropy experiments on the open Heisenberg chain with NNN Ising coupling"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string experiment;
  std::string config_file;
  ConfigOverrides flags;
  bool bits = false;
  std::vector<double> delta2;

  app.add_option("experiment", experiment,
                 "eigenket-scan | shell-average | volume-law | gamma-fit | degeneracy-census | "
                 "property-suite")
      ->required();
  app.add_option("--config", config_file, "flat key = value config file");
  app.add_option("--n-sites", flags.n_sites, "chain length N");
  app.add_option("--n-up", flags.n_up, "number of up spins (default N/2)");
  app.add_option("--delta2", delta2, "NNN coupling; repeat or comma-separate for several")
      ->delimiter(',');
  app.add_option("--l1", flags.l1, "subsystem size (sites 1..l1)");
  app.add_option("--l1-range", flags.l1_range, "subsystem sizes for volume-law, e.g. 1..4");
  app.add_option("--bins", flags.n_bins, "number of energy shells");
  app.add_option("--min-count", flags.min_shell_count, "smallest shell kept in shell tables");
  app.add_option("--seed", flags.seed, "seed for the property suite");
  app.add_option("--trials", flags.trials, "trials per property");
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("--cache-dir", flags.cache_dir, "spectrum cache directory");
  app.add_option("--format", flags.format, "csv | json");
  app.add_option("--cache", flags.cache, "use | rebuild | off");
  app.add_flag("--bits", bits, "report entropies in bits instead of nats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
  }

  flags.experiment = experiment;
  if (!delta2.empty()) flags.delta2_list = delta2;
  if (bits) flags.units = "bits";

  try {
    const std::string text = config_file.empty() ? std::string() : read_config_file(config_file);
    const RunConfig cfg = parse_config(text, flags);
    const RunReport report = run(cfg);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& a : report.artifacts) std::cout << a.path.string() << "\n";
    std::cout << report.manifest.string() << "\n";
    return report.failed_properties == 0 ? 0 : static_cast<int>(ExitCode::NumericalFailure);
  } catch (const std::exception& e) {
    std::cerr << error_record(e) << "\n";
    return static_cast<int>(classify_error(e));
  }
}
