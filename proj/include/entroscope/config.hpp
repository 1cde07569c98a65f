#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entroscope {

enum class Experiment { EigenketScan, ShellAverage, VolumeLaw, GammaFit, DegeneracyCensus, PropertySuite };
enum class CachePolicy { Use, Rebuild, Off };
enum class OutputFormat { Csv, Json };
enum class EntropyUnits { Nats, Bits };

std::string_view to_string(Experiment e);
std::string_view to_string(CachePolicy p);
std::string_view to_string(OutputFormat f);
std::string_view to_string(EntropyUnits u);

/// Throws ConfigError for unknown names.
Experiment parse_experiment(std::string_view name);
CachePolicy parse_cache_policy(std::string_view name);
OutputFormat parse_output_format(std::string_view name);
EntropyUnits parse_units(std::string_view name);

struct L1Range {
  int first = 1;
  int last = 1;

  bool operator==(const L1Range&) const = default;
};

/// A fully validated run description.
struct RunConfig {
  Experiment experiment = Experiment::ShellAverage;
  int n_sites = 16;
  int n_up = 8;
  std::vector<double> delta2_list{0.0, 0.5};
  std::size_t n_bins = 50;
  std::size_t min_shell_count = 10;
  int l1 = 6;
  /// Set only when requested; volume-law otherwise sweeps 1..N-1.
  std::optional<L1Range> l1_range;
  std::uint64_t seed = 42;
  std::size_t trials = 200;
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir = "cache";
  CachePolicy cache = CachePolicy::Use;
  OutputFormat format = OutputFormat::Csv;
  EntropyUnits units = EntropyUnits::Nats;

  /// Subsystem sizes visited by the volume-law experiment.
  std::vector<int> l1_values() const;
};

/// Values given on the command line; each one that is set wins over the file.
struct ConfigOverrides {
  std::optional<std::string> experiment;
  std::optional<int> n_sites;
  std::optional<int> n_up;
  std::optional<std::vector<double>> delta2_list;
  std::optional<std::size_t> n_bins;
  std::optional<std::size_t> min_shell_count;
  std::optional<int> l1;
  std::optional<std::string> l1_range;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out_dir;
  std::optional<std::string> cache_dir;
  std::optional<std::string> cache;
  std::optional<std::string> format;
  std::optional<std::string> units;
};

/// Parses a flat `key = value` file (`#` starts a comment), applies the
/// overrides and validates the result. Unknown keys, malformed values and
/// out-of-range settings raise ConfigError.
///
/// Defaults: n_sites=16, n_up=n_sites/2, delta2_list=[0, 0.5], n_bins=50,
/// min_shell_count=10, l1=6 (or n_sites/2 when the chain is too short),
/// seed=42. ENTROSCOPE_CACHE_DIR, when set, replaces the default cache dir.
RunConfig parse_config(std::string_view file_text, const ConfigOverrides& overrides = {});

/// Reads a config file; throws IoError when it cannot be read.
std::string read_config_file(const std::filesystem::path& path);

/// Parses "a..b", "a-b" or a single integer. Throws ConfigError.
L1Range parse_l1_range(std::string_view text);

/// Parses "x", "x,y" or "[x, y]". Throws ConfigError.
std::vector<double> parse_double_list(std::string_view text);

} // namespace entroscope
