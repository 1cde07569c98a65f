#pragma once

#include "entroscope/quantum_state.hpp"

#include <compare>
#include <cstddef>
#include <numbers>
#include <span>

namespace entroscope {

/// Entropy in natural units (k_B = 1).
struct EntropyValue {
  double nats = 0.0;

  double bits() const { return nats / std::numbers::ln2; }
  auto operator<=>(const EntropyValue&) const = default;
};

/// Eigenvalues of a density matrix in [-kClipTol, 0) are numerical noise and
/// are treated as zero; anything below signals an invalid state.
inline constexpr double kClipTol = 1e-10;

/// -sum p ln p with 0 ln 0 = 0. Entries must be >= -1e-12 and sum to 1 within 1e-10.
EntropyValue shannon(std::span<const double> p);

/// -Tr(rho ln rho), computed from the spectrum of rho.
EntropyValue von_neumann(const DensityMatrix& rho);

/// ln d for a uniform distribution over d states.
EntropyValue q_boltzmann(std::size_t d);

struct CanonicalThermo {
  EntropyValue entropy;
  double mean_energy = 0.0;
  /// ln sum_n exp(-beta E_n), without any energy shift.
  double ln_partition = 0.0;
};

/// Canonical entropy, mean energy and log partition function of a spectrum.
CanonicalThermo q_gibbs(std::span<const double> energies, double beta);

struct SubadditivityReport {
  EntropyValue s_ab;
  EntropyValue s_a;
  EntropyValue s_b;
  /// S_A + S_B - S_AB, nonnegative up to rounding.
  double slack = 0.0;
};

SubadditivityReport check_subadditivity(const DensityMatrix& rho_full, const BipartitionSpec& part);

} // namespace entroscope
