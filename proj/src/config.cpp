#include "entroscope/config.hpp"

#include "entroscope/basis.hpp"
#include "entroscope/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace entroscope {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 6> kExperiments{{
    {Experiment::EigenketScan, "eigenket-scan"},
    {Experiment::ShellAverage, "shell-average"},
    {Experiment::VolumeLaw, "volume-law"},
    {Experiment::GammaFit, "gamma-fit"},
    {Experiment::DegeneracyCensus, "degeneracy-census"},
    {Experiment::PropertySuite, "property-suite"},
}};

constexpr std::array<std::string_view, 14> kKnownKeys{
    "experiment", "n_sites", "n_up",  "delta2_list", "n_bins", "min_shell_count", "l1",
    "l1_range",   "seed",    "trials", "out",        "cache",  "format",          "units",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("config: '" + std::string(key) + "' expects an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("config: '" + std::string(key) + "' expects a finite number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_pairs(std::string_view text) {
  std::map<std::string, std::string, std::less<>> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(unquote(trim(view.substr(eq + 1))));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

} // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [value, name] : kExperiments)
    if (value == e) return name;
  return "unknown";
}

std::string_view to_string(CachePolicy p) {
  switch (p) {
    case CachePolicy::Use: return "use";
    case CachePolicy::Rebuild: return "rebuild";
    case CachePolicy::Off: return "off";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }
std::string_view to_string(EntropyUnits u) { return u == EntropyUnits::Nats ? "nats" : "bits"; }

Experiment parse_experiment(std::string_view name) {
  for (const auto& [value, text] : kExperiments)
    if (text == name) return value;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

CachePolicy parse_cache_policy(std::string_view name) {
  if (name == "use") return CachePolicy::Use;
  if (name == "rebuild") return CachePolicy::Rebuild;
  if (name == "off") return CachePolicy::Off;
  throw ConfigError("cache policy must be use, rebuild or off (got '" + std::string(name) + "')");
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("format must be csv or json (got '" + std::string(name) + "')");
}

EntropyUnits parse_units(std::string_view name) {
  if (name == "nats") return EntropyUnits::Nats;
  if (name == "bits") return EntropyUnits::Bits;
  throw ConfigError("units must be nats or bits (got '" + std::string(name) + "')");
}

L1Range parse_l1_range(std::string_view text) {
  text = trim(text);
  std::size_t sep = text.find("..");
  std::size_t skip = 2;
  if (sep == std::string_view::npos) {
    sep = text.find('-', 1);
    skip = 1;
  }
  if (sep == std::string_view::npos) {
    const int single = parse_integer<int>("l1_range", text);
    return {single, single};
  }
  return {parse_integer<int>("l1_range", text.substr(0, sep)),
          parse_integer<int>("l1_range", text.substr(sep + skip))};
}

std::vector<double> parse_double_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<double> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double("delta2_list", text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("config: 'delta2_list' must contain at least one value");
  return out;
}

std::vector<int> RunConfig::l1_values() const {
  const L1Range range = l1_range.value_or(L1Range{1, n_sites - 1});
  std::vector<int> out;
  for (int l = range.first; l <= range.last; ++l) out.push_back(l);
  return out;
}

std::string read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig parse_config(std::string_view file_text, const ConfigOverrides& flags) {
  const auto file = parse_pairs(file_text);
  auto from_file = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = file.find(key);
    if (it == file.end()) return std::nullopt;
    return it->second;
  };

  RunConfig cfg;
  if (const char* env = std::getenv("ENTROSCOPE_CACHE_DIR"); env != nullptr && *env != '\0') {
    cfg.cache_dir = env;
  }

  if (flags.experiment) cfg.experiment = parse_experiment(*flags.experiment);
  else if (auto v = from_file("experiment")) cfg.experiment = parse_experiment(*v);

  if (flags.n_sites) cfg.n_sites = *flags.n_sites;
  else if (auto v = from_file("n_sites")) cfg.n_sites = parse_integer<int>("n_sites", *v);
  if (cfg.n_sites < 2 || cfg.n_sites > kDefaultSiteCap) {
    throw ConfigError("n_sites must lie in [2, " + std::to_string(kDefaultSiteCap) + "]");
  }

  cfg.n_up = cfg.n_sites / 2;
  if (flags.n_up) cfg.n_up = *flags.n_up;
  else if (auto v = from_file("n_up")) cfg.n_up = parse_integer<int>("n_up", *v);
  if (cfg.n_up < 0 || cfg.n_up > cfg.n_sites) throw ConfigError("n_up must lie in [0, n_sites]");

  if (flags.delta2_list) cfg.delta2_list = *flags.delta2_list;
  else if (auto v = from_file("delta2_list")) cfg.delta2_list = parse_double_list(*v);
  if (cfg.delta2_list.empty()) throw ConfigError("delta2_list must not be empty");
  for (const double d : cfg.delta2_list)
    if (!std::isfinite(d)) throw ConfigError("delta2 values must be finite");

  if (flags.n_bins) cfg.n_bins = *flags.n_bins;
  else if (auto v = from_file("n_bins")) cfg.n_bins = parse_integer<std::size_t>("n_bins", *v);
  if (cfg.n_bins < 1) throw ConfigError("n_bins must be positive");

  if (flags.min_shell_count) cfg.min_shell_count = *flags.min_shell_count;
  else if (auto v = from_file("min_shell_count"))
    cfg.min_shell_count = parse_integer<std::size_t>("min_shell_count", *v);

  std::optional<int> l1;
  if (flags.l1) l1 = *flags.l1;
  else if (auto v = from_file("l1")) l1 = parse_integer<int>("l1", *v);
  if (flags.l1_range) cfg.l1_range = parse_l1_range(*flags.l1_range);
  else if (auto v = from_file("l1_range")) cfg.l1_range = parse_l1_range(*v);
  if (l1 && cfg.l1_range) throw ConfigError("l1 and l1_range are mutually exclusive");

  cfg.l1 = l1.value_or(cfg.n_sites > 6 ? 6 : cfg.n_sites / 2);
  if (cfg.l1 < 1 || cfg.l1 > cfg.n_sites - 1) {
    throw ConfigError("l1=" + std::to_string(cfg.l1) + " outside [1, " +
                      std::to_string(cfg.n_sites - 1) + "]");
  }
  if (cfg.l1_range) {
    const auto [a, b] = *cfg.l1_range;
    if (a < 1 || b > cfg.n_sites - 1 || a > b) {
      throw ConfigError("l1_range " + std::to_string(a) + ".." + std::to_string(b) +
                        " must be an increasing range inside [1, " +
                        std::to_string(cfg.n_sites - 1) + "]");
    }
  }

  if (flags.seed) cfg.seed = *flags.seed;
  else if (auto v = from_file("seed")) cfg.seed = parse_integer<std::uint64_t>("seed", *v);

  if (flags.trials) cfg.trials = *flags.trials;
  else if (auto v = from_file("trials")) cfg.trials = parse_integer<std::size_t>("trials", *v);
  if (cfg.trials < 1) throw ConfigError("trials must be positive");

  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  else if (auto v = from_file("out")) cfg.out_dir = *v;
  if (flags.cache_dir) cfg.cache_dir = *flags.cache_dir;

  if (flags.cache) cfg.cache = parse_cache_policy(*flags.cache);
  else if (auto v = from_file("cache")) cfg.cache = parse_cache_policy(*v);

  if (flags.format) cfg.format = parse_output_format(*flags.format);
  else if (auto v = from_file("format")) cfg.format = parse_output_format(*v);

  if (flags.units) cfg.units = parse_units(*flags.units);
  else if (auto v = from_file("units")) cfg.units = parse_units(*v);

  return cfg;
}

} // namespace entroscope
