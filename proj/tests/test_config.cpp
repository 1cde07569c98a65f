#include "entroscope/config.hpp"
#include "entroscope/error.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace entroscope;

TEST_CASE("empty config gives the defaults") {
  ::unsetenv("ENTROSCOPE_CACHE_DIR");
  const RunConfig c = parse_config("");
  CHECK(c.experiment == Experiment::ShellAverage);
  CHECK(c.n_sites == 16);
  CHECK(c.n_up == 8);
  CHECK(c.delta2_list == std::vector<double>{0.0, 0.5});
  CHECK(c.n_bins == 50);
  CHECK(c.min_shell_count == 10);
  CHECK(c.l1 == 6);
  CHECK_FALSE(c.l1_range.has_value());
  CHECK(c.seed == 42);
  CHECK(c.trials == 200);
  CHECK(c.out_dir == "out");
  CHECK(c.cache_dir == "cache");
  CHECK(c.cache == CachePolicy::Use);
  CHECK(c.format == OutputFormat::Csv);
  CHECK(c.units == EntropyUnits::Nats);
  CHECK(c.l1_values().size() == 15);
}

TEST_CASE("file values") {
  const RunConfig c = parse_config(R"(# volume sweep
experiment = volume-law
n_sites = 12
n_up = 5
delta2_list = [0.0, 0.25, 1]
n_bins = 30    # fewer shells
min_shell_count = 4
l1_range = 2..5
seed = 7
trials = 12
out = "results/run1"
cache = rebuild
format = json
units = bits
)");
  CHECK(c.experiment == Experiment::VolumeLaw);
  CHECK(c.n_sites == 12);
  CHECK(c.n_up == 5);
  CHECK(c.delta2_list == std::vector<double>{0.0, 0.25, 1.0});
  CHECK(c.n_bins == 30);
  CHECK(c.min_shell_count == 4);
  CHECK(c.l1_range == L1Range{2, 5});
  CHECK(c.l1_values() == std::vector<int>{2, 3, 4, 5});
  CHECK(c.seed == 7);
  CHECK(c.trials == 12);
  CHECK(c.out_dir == "results/run1");
  CHECK(c.cache == CachePolicy::Rebuild);
  CHECK(c.format == OutputFormat::Json);
  CHECK(c.units == EntropyUnits::Bits);
}

TEST_CASE("flags win over the file") {
  ConfigOverrides flags;
  flags.n_sites = 12;
  flags.delta2_list = std::vector<double>{0.5};
  flags.experiment = "gamma-fit";
  const RunConfig c = parse_config("n_sites = 16\ndelta2_list = 0, 1\nexperiment = volume-law\n", flags);
  CHECK(c.n_sites == 12);
  CHECK(c.n_up == 6);
  CHECK(c.delta2_list == std::vector<double>{0.5});
  CHECK(c.experiment == Experiment::GammaFit);
}

TEST_CASE("short chains get a smaller default subsystem") {
  ConfigOverrides flags;
  flags.n_sites = 4;
  CHECK(parse_config("", flags).l1 == 2);
  flags.n_sites = 7;
  CHECK(parse_config("", flags).l1 == 6);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(parse_config("l1 = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("l1 = 16"), ConfigError);
  CHECK_THROWS_AS(parse_config("bogus = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_sites = twelve"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_sites = 12.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_sites = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_sites = 40"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_up = 17"), ConfigError);
  CHECK_THROWS_AS(parse_config("delta2_list = []"), ConfigError);
  CHECK_THROWS_AS(parse_config("delta2_list = 0, nan"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_bins = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("l1 = 3\nl1_range = 1..4"), ConfigError);
  CHECK_THROWS_AS(parse_config("l1_range = 5..2"), ConfigError);
  CHECK_THROWS_AS(parse_config("l1_range = 0..3"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = everything"), ConfigError);
  CHECK_THROWS_AS(parse_config("cache = sometimes"), ConfigError);
  CHECK_THROWS_AS(parse_config("format = xml"), ConfigError);
  CHECK_THROWS_AS(parse_config("units = joules"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_sites = 12\nn_sites = 14"), ConfigError);
  CHECK_THROWS_AS(parse_config("just some words"), ConfigError);

  ConfigOverrides flags;
  flags.l1 = 3;
  CHECK_THROWS_AS(parse_config("l1_range = 1..4", flags), ConfigError);
}

TEST_CASE("range and list syntax") {
  CHECK(parse_l1_range("1..4") == L1Range{1, 4});
  CHECK(parse_l1_range("2-7") == L1Range{2, 7});
  CHECK(parse_l1_range(" 3 ") == L1Range{3, 3});
  CHECK_THROWS_AS(parse_l1_range("a..b"), ConfigError);
  CHECK(parse_double_list("0.5") == std::vector<double>{0.5});
  CHECK(parse_double_list("[ -1, 2.5e-1 ]") == std::vector<double>{-1.0, 0.25});
  CHECK_THROWS_AS(parse_double_list("1,,2"), ConfigError);
}

TEST_CASE("cache directory from the environment") {
  ::setenv("ENTROSCOPE_CACHE_DIR", "/tmp/env-cache", 1);
  CHECK(parse_config("").cache_dir == "/tmp/env-cache");
  ConfigOverrides flags;
  flags.cache_dir = "flag-cache";
  CHECK(parse_config("", flags).cache_dir == "flag-cache");
  ::unsetenv("ENTROSCOPE_CACHE_DIR");
}

TEST_CASE("reading config files") {
  const auto path = std::filesystem::temp_directory_path() / "entroscope_test_config.conf";
  {
    std::ofstream out(path);
    out << "n_sites = 10\n";
  }
  CHECK(parse_config(read_config_file(path)).n_sites == 10);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_config_file(path), IoError);
}

TEST_CASE("enum names round trip") {
  for (const auto e : {Experiment::EigenketScan, Experiment::ShellAverage, Experiment::VolumeLaw,
                       Experiment::GammaFit, Experiment::DegeneracyCensus, Experiment::PropertySuite}) {
    CHECK(parse_experiment(to_string(e)) == e);
  }
  for (const auto p : {CachePolicy::Use, CachePolicy::Rebuild, CachePolicy::Off})
    CHECK(parse_cache_policy(to_string(p)) == p);
  CHECK(parse_output_format(to_string(OutputFormat::Json)) == OutputFormat::Json);
  CHECK(parse_units(to_string(EntropyUnits::Bits)) == EntropyUnits::Bits);
}
