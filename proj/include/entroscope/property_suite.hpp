#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace entroscope {

/// Outcome of one randomized invariant.
struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  /// Worst observed margin; the property holds when margin >= 0. For
  /// inequalities this is (lhs - rhs + tolerance), for equalities
  /// (tolerance - |lhs - rhs|).
  double worst_margin = 0.0;
  double tolerance = 0.0;

  bool passed() const { return worst_margin >= 0.0; }
};

/// Seeded battery of density-matrix invariants: subadditivity, measurement
/// monotonicity, decomposition and basis Shannon bounds (with equality at the
/// eigen-objects), unitary invariance, pure-state complement symmetry,
/// concavity under mixing and ensemble reconstruction. Random dimensions
/// span 2..16.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed, std::size_t trials = 200);

/// TAP report, one line per property.
std::string format_tap(const std::vector<PropertyResult>& results);

} // namespace entroscope
