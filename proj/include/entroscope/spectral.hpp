#pragma once

#include "entroscope/basis.hpp"
#include "entroscope/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <vector>

namespace entroscope {

/// Relative tolerance under which neighbouring eigenvalues are treated as
/// one degenerate multiplet: |E_{k+1} - E_k| < tol * max(1, |E_k|).
inline constexpr double kDegeneracyTol = 1e-10;
inline constexpr double kResidualTol = 1e-9;

/// Which model and sector a spectrum belongs to. n_sites == 0 means the
/// spectrum came from a bare operator with no model attached.
struct SpectrumKey {
  int n_sites = 0;
  int n_up = 0;
  double delta2 = 0.0;

  bool operator==(const SpectrumKey&) const = default;
};

/// Ascending eigenvalues with orthonormal eigenvector columns. The sign of
/// each eigenvector is fixed so that its largest-magnitude entry (first one
/// on ties) is positive.
struct Spectrum {
  SpectrumKey key;
  std::string basis_tag;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  std::span<const double> energies() const {
    return {eigenvalues.data(), static_cast<std::size_t>(eigenvalues.size())};
  }
};

/// Full symmetric eigendecomposition (LAPACK dsyevd). Throws NumericalError
/// if the solver does not converge.
Spectrum diagonalize(const SymmetricOperator& op);

/// Ascending eigenvalues without eigenvectors.
Eigen::VectorXd eigenvalues_only(const SymmetricOperator& op);

/// Builds and diagonalizes H on the given sector, attaching the model key.
Spectrum solve_sector(const SpinBasis& basis, const ModelParams& params);

struct SpectrumDiagnostics {
  /// max_n ||H v_n - E_n v_n||_2, divided by ||H||_F / sqrt(dim).
  double scaled_residual = 0.0;
  /// max |<m|n> - delta_mn| over the sampled pairs.
  double orthonormality_error = 0.0;
};

SpectrumDiagnostics check_spectrum(const SymmetricOperator& op, const Spectrum& spec,
                                   std::size_t sample_pairs = 2000);

/// A run of consecutive eigenindices whose eigenvalues are degenerate.
struct Multiplet {
  std::size_t first = 0;
  std::size_t size = 1;
};

std::vector<Multiplet> find_multiplets(std::span<const double> sorted_energies,
                                       double tol = kDegeneracyTol);

/// Multiplet size for every eigenindex.
std::vector<std::size_t> multiplet_size_per_index(std::span<const double> sorted_energies,
                                                  double tol = kDegeneracyTol);

/// Eigenindices with energies in (lower, upper]. Because the spectrum is
/// sorted, members are always a contiguous index range.
struct EnergyShell {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t first = 0;
  std::size_t count = 0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  auto members() const { return std::views::iota(first, first + count); }
};

struct DosTable {
  std::vector<EnergyShell> shells;
  double width = 0.0;
  /// More bins were requested than there are eigenvalues.
  bool oversubscribed = false;

  std::size_t total_count() const;
  double dos(std::size_t shell) const { return static_cast<double>(shells[shell].count) / width; }
  /// ln(count / width); empty for empty shells.
  std::optional<double> ln_dos(std::size_t shell) const;
  /// Index of the first shell with the largest count.
  std::size_t peak_shell() const;
};

/// Uniform bins over [E_min - eps, E_max] with eps = 1e-9 of the nominal
/// width, so the lowest eigenvalue lands in the first half-open shell.
DosTable partition_shells(std::span<const double> sorted_energies, std::size_t n_bins);

inline constexpr char kSpectrumMagic[8] = {'E', 'N', 'T', 'R', 'S', 'P', 'E', 'C'};
inline constexpr unsigned char kSpectrumVersion = 1;

/// Writes the binary spectrum file: 8-byte magic, version byte, u32 header
/// length, JSON header, little-endian f64 eigenvalues, f64 eigenvectors in
/// column-major order, then a u64 FNV-1a checksum over everything before it.
void save_spectrum(const Spectrum& spec, const std::filesystem::path& path);

Spectrum load_spectrum(const std::filesystem::path& path);

/// As load_spectrum, but throws BasisMismatchError unless the file holds
/// the spectrum for `expected`.
Spectrum load_spectrum(const std::filesystem::path& path, const SpectrumKey& expected);

/// Shortest round-trip decimal form of a coupling, used in file names.
std::string format_coupling(double value);

/// `<dir>/N{N}_nup{n_up}_d2{delta2}.spec`
std::filesystem::path cache_path(const std::filesystem::path& dir, const SpectrumKey& key);

} // namespace entroscope
