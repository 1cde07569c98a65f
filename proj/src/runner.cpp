#include "entroscope/runner.hpp"

#include "entroscope/checksum.hpp"
#include "entroscope/error.hpp"
#include "entroscope/experiments.hpp"
#include "entroscope/property_suite.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <variant>

namespace entroscope {

namespace fs = std::filesystem;

namespace {

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, long long>) out += std::to_string(v);
            else if constexpr (std::is_same_v<V, double>) out += format_double(v);
            else if constexpr (std::is_same_v<V, std::string>) out += v;
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) r.push_back(nullptr);
            else r.push_back(v);
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  return nlohmann::json{{"columns", t.columns}, {"rows", rows}}.dump(1) + "\n";
}

Cell count_cell(std::size_t v) { return static_cast<long long>(v); }

class OutputLock {
public:
  explicit OutputLock(const fs::path& dir) : path_(dir / ".entroscope.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw IoError("output directory " + dir.string() + " is locked by another run (" +
                    path_.string() + ")");
    }
    std::fclose(f);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

private:
  fs::path path_;
};

class Emitter {
public:
  Emitter(const RunConfig& cfg, RunReport& report) : cfg_(cfg), report_(report) {}

  void table(const std::string& stem, const Table& t) {
    const bool csv = cfg_.format == OutputFormat::Csv;
    write(stem + (csv ? ".csv" : ".json"), csv ? render_csv(t) : render_json(t));
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = cfg_.out_dir / name;
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    Fnv1a64 h;
    h.update(content);
    report_.artifacts.push_back({path, content.size(), h.digest()});
  }

private:
  const RunConfig& cfg_;
  RunReport& report_;
};

std::string suffix(double delta2) { return "_d2=" + format_coupling(delta2); }

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j = {
      {"experiment", to_string(cfg.experiment)},
      {"n_sites", cfg.n_sites},
      {"n_up", cfg.n_up},
      {"delta2_list", cfg.delta2_list},
      {"n_bins", cfg.n_bins},
      {"min_shell_count", cfg.min_shell_count},
      {"l1", cfg.l1},
      {"seed", cfg.seed},
      {"trials", cfg.trials},
      {"out", cfg.out_dir.string()},
      {"cache_dir", cfg.cache_dir.string()},
      {"cache", to_string(cfg.cache)},
      {"format", to_string(cfg.format)},
      {"units", to_string(cfg.units)},
  };
  if (cfg.l1_range) j["l1_range"] = {cfg.l1_range->first, cfg.l1_range->last};
  return j;
}

void emit_dos(Emitter& emit, const DosTable& dos, double delta2) {
  Table t{{"shell", "lower", "upper", "d_E", "dos", "ln_dos"}, {}};
  for (std::size_t k = 0; k < dos.shells.size(); ++k) {
    const auto& s = dos.shells[k];
    const auto ln = dos.ln_dos(k);
    t.rows.push_back({count_cell(k), s.lower, s.upper, count_cell(s.count), dos.dos(k),
                      ln ? Cell{*ln} : Cell{}});
  }
  emit.table("dos" + suffix(delta2), t);
}

} // namespace

Spectrum obtain_spectrum(const SpectrumKey& key, const fs::path& cache_dir, CachePolicy policy,
                         SpectrumSource* source) {
  const fs::path path = cache_path(cache_dir, key);
  if (policy == CachePolicy::Use && fs::exists(path)) {
    try {
      Spectrum cached = load_spectrum(path, key);
      if (source) *source = SpectrumSource::Cache;
      return cached;
    } catch (const FormatError&) {
      // Stale or foreign file: fall through and rebuild it.
    }
  }
  const SpinBasis basis = enumerate_sector(key.n_sites, key.n_up);
  Spectrum spec = solve_sector(basis, {key.n_sites, key.delta2});
  if (policy != CachePolicy::Off) save_spectrum(spec, path);
  if (source) *source = SpectrumSource::Computed;
  return spec;
}

RunReport run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  const OutputLock lock(cfg.out_dir);
  Emitter emit(cfg, report);
  const double unit = cfg.units == EntropyUnits::Bits ? 1.0 / std::numbers::ln2 : 1.0;

  if (cfg.experiment == Experiment::PropertySuite) {
    const auto results = run_property_suite(cfg.seed, cfg.trials);
    for (const auto& r : results) {
      if (!r.passed()) {
        ++report.failed_properties;
        report.warnings.push_back("property '" + r.name + "' failed");
      }
    }
    emit.write("property_suite.tap", format_tap(results));
  } else {
    const SpinBasis basis = enumerate_sector(cfg.n_sites, cfg.n_up);
    for (const double delta2 : cfg.delta2_list) {
      const SpectrumKey key{cfg.n_sites, cfg.n_up, delta2};
      SpectrumSource source = SpectrumSource::Computed;
      const Spectrum spec = obtain_spectrum(key, cfg.cache_dir, cfg.cache, &source);
      report.spectra.push_back({key, source});
      const DosTable dos = partition_shells(spec.energies(), cfg.n_bins);
      if (dos.oversubscribed) {
        report.warnings.push_back("n_bins exceeds the sector dimension for delta2=" +
                                  format_coupling(delta2));
      }
      const std::string sfx = suffix(delta2);

      switch (cfg.experiment) {
        case Experiment::EigenketScan: {
          const auto scan = run_eigenket_scan(basis, spec, BipartitionSpec::make(cfg.n_sites, cfg.l1), dos);
          Table t{{"index", "energy", "svn", "multiplet_size", "unique"}, {}};
          for (const auto& r : scan.records) {
            t.rows.push_back({count_cell(r.index), r.energy, r.svn.nats * unit,
                              count_cell(r.multiplet_size), count_cell(r.unique() ? 1 : 0)});
          }
          emit.table("eigenket_scan" + sfx, t);
          emit_dos(emit, dos, delta2);
          break;
        }
        case Experiment::ShellAverage: {
          const auto table = run_shell_average(basis, spec, BipartitionSpec::make(cfg.n_sites, cfg.l1),
                                               dos, cfg.min_shell_count);
          Table t{{"shell", "lower", "upper", "midpoint", "d_E", "ln_dos", "mean_svn", "std_svn",
                   "svn_avg_rdm"},
                  {}};
          for (const auto& r : table.rows) {
            t.rows.push_back({count_cell(r.shell), r.lower, r.upper, r.midpoint, count_cell(r.d_e),
                              r.ln_dos, r.mean_svn * unit, r.std_svn * unit, r.svn_avg_rdm * unit});
          }
          emit.table("shell_average" + sfx, t);
          Table thermal{{"shell", "midpoint", "beta_fit", "frobenius_distance"}, {}};
          for (const auto& r : table.rows) {
            thermal.rows.push_back({count_cell(r.shell), r.midpoint, r.beta_fit, r.thermal_distance});
          }
          emit.table("thermal_fit" + sfx, thermal);
          break;
        }
        case Experiment::VolumeLaw: {
          const auto l1s = cfg.l1_values();
          const auto rows = run_volume_law(basis, spec, dos, l1s);
          Table t{{"l1", "mean_svn", "shell_lo", "shell_hi", "d_E"}, {}};
          for (const auto& r : rows) {
            t.rows.push_back({static_cast<long long>(r.l1), r.mean_svn * unit, r.shell_lo,
                              r.shell_hi, count_cell(r.d_e)});
          }
          emit.table("volume_law" + sfx, t);
          break;
        }
        case Experiment::GammaFit: {
          const auto table = run_shell_average(basis, spec, BipartitionSpec::make(cfg.n_sites, cfg.l1),
                                               dos, cfg.min_shell_count);
          Table fits{{"side", "slope", "intercept", "r_squared", "gamma_predicted_mean", "n_rows"}, {}};
          Table shells{{"side", "shell", "ln_dos", "mean_svn", "gamma_predicted"}, {}};
          for (const SpectrumSide side : {SpectrumSide::Left, SpectrumSide::Right}) {
            const FitResult fit = fit_entropy_vs_lndos(table, side);
            const std::string name(to_string(side));
            fits.rows.push_back({name, fit.slope * unit, fit.intercept * unit, fit.r_squared,
                                 fit.gamma_predicted_mean, count_cell(fit.shells.size())});
            for (const auto& g : fit.shells) {
              shells.rows.push_back({name, count_cell(g.shell), g.ln_dos, g.mean_svn * unit,
                                     g.gamma_predicted});
            }
          }
          emit.table("gamma_fit" + sfx, fits);
          emit.table("gamma_shells" + sfx, shells);
          break;
        }
        case Experiment::DegeneracyCensus: {
          Table t{{"scope", "multiplet_size", "count"}, {}};
          for (const auto& [size, count] : degeneracy_census(spec.energies()).histogram) {
            t.rows.push_back({std::string("sector"), count_cell(size), count_cell(count)});
          }
          for (const auto& [size, count] : full_space_census(cfg.n_sites, delta2).histogram) {
            t.rows.push_back({std::string("full"), count_cell(size), count_cell(count)});
          }
          emit.table("degeneracy_census" + sfx, t);
          break;
        }
        case Experiment::PropertySuite:
          break;
      }
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& a : report.artifacts) {
    artifacts.push_back(
        {{"file", a.path.filename().string()}, {"bytes", a.bytes}, {"fnv1a64", hex64(a.checksum)}});
  }
  nlohmann::json spectra = nlohmann::json::array();
  for (const auto& s : report.spectra) {
    spectra.push_back({{"delta2", s.key.delta2},
                       {"file", cache_path(cfg.cache_dir, s.key).filename().string()},
                       {"source", s.source == SpectrumSource::Cache ? "cache" : "computed"}});
  }
  const nlohmann::json manifest = {
      {"tool", "entroscope"},
      {"version", kVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"eigensolver", "LAPACKE dsyevd, reference LAPACK"},
      {"config", config_echo(cfg)},
      {"artifacts", artifacts},
      {"spectra", spectra},
      {"warnings", report.warnings},
      {"wall_time_seconds", report.wall_seconds},
  };
  report.manifest = cfg.out_dir / "manifest.json";
  std::ofstream out(report.manifest);
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + report.manifest.string());
  return report;
}

ExitCode classify_error(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::ConfigError;
  if (dynamic_cast<const IoError*>(&e)) return ExitCode::IoFailure;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return ExitCode::IoFailure;
  return ExitCode::NumericalFailure;
}

std::string error_record(const std::exception& e) {
  std::string kind = "numerical";
  switch (classify_error(e)) {
    case ExitCode::ConfigError: kind = "config"; break;
    case ExitCode::IoFailure: kind = "io"; break;
    default: break;
  }
  return nlohmann::json{{"error", kind},
                        {"exit_code", static_cast<int>(classify_error(e))},
                        {"message", e.what()}}
      .dump();
}

} // namespace entroscope
