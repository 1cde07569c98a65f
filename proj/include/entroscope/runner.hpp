#pragma once

#include "entroscope/config.hpp"
#include "entroscope/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace entroscope {

inline constexpr std::string_view kVersion = "1.0.0";

enum class ExitCode : int { Success = 0, ConfigError = 2, NumericalFailure = 3, IoFailure = 4 };

struct Artifact {
  std::filesystem::path path;
  std::uintmax_t bytes = 0;
  std::uint64_t checksum = 0;
};

enum class SpectrumSource { Computed, Cache };

struct SpectrumUse {
  SpectrumKey key;
  SpectrumSource source = SpectrumSource::Computed;
};

struct RunReport {
  std::vector<Artifact> artifacts;
  std::vector<SpectrumUse> spectra;
  std::filesystem::path manifest;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  /// Property-suite invariants that did not hold.
  std::size_t failed_properties = 0;
};

/// Returns the spectrum for `key`, honouring the cache policy. A cache file
/// that fails to load or belongs to another model is rebuilt.
Spectrum obtain_spectrum(const SpectrumKey& key, const std::filesystem::path& cache_dir,
                         CachePolicy policy, SpectrumSource* source = nullptr);

/// Runs one experiment and writes its tables plus manifest.json into
/// config.out_dir. Throws entroscope::Error subclasses on failure.
RunReport run(const RunConfig& config);

/// Exit code for an exception escaping run(); DomainError counts as a
/// numerical failure because configs are validated up front.
ExitCode classify_error(const std::exception& e);

/// Machine-readable one-line JSON error record.
std::string error_record(const std::exception& e);

} // namespace entroscope
