#pragma once

#include "entroscope/basis.hpp"
#include "entroscope/entropy.hpp"
#include "entroscope/quantum_state.hpp"
#include "entroscope/spectral.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace entroscope {

inline constexpr std::size_t kDefaultBins = 50;
inline constexpr std::size_t kDefaultMinShellCount = 10;

struct EigenketRecord {
  std::size_t index = 0;
  double energy = 0.0;
  EntropyValue svn;
  /// Size of the degenerate multiplet this eigenket belongs to. Inside a
  /// multiplet the subsystem entropy depends on the chosen eigenbasis.
  std::size_t multiplet_size = 1;

  bool unique() const { return multiplet_size == 1; }
};

struct EigenketScan {
  std::vector<EigenketRecord> records;
  DosTable dos;
};

/// Subsystem entropy of every eigenket.
EigenketScan run_eigenket_scan(const SpinBasis& basis, const Spectrum& spec,
                               const BipartitionSpec& part, const DosTable& dos,
                               double degeneracy_tol = kDegeneracyTol);

struct ShellRow {
  std::size_t shell = 0;
  double lower = 0.0;
  double upper = 0.0;
  double midpoint = 0.0;
  std::size_t d_e = 0;
  double ln_dos = 0.0;
  /// Mean and population standard deviation of the eigenket entropies.
  double mean_svn = 0.0;
  double std_svn = 0.0;
  /// Entropy of the shell-averaged subsystem state.
  double svn_avg_rdm = 0.0;
  /// Inverse temperature of the subsystem Gibbs state closest to the
  /// averaged state, and the Frobenius distance between the two.
  double beta_fit = 0.0;
  double thermal_distance = 0.0;
};

struct ShellTable {
  std::vector<ShellRow> rows;
  DosTable dos;
  std::size_t sector_dim = 0;
  std::size_t min_count = kDefaultMinShellCount;

  /// Index (into dos.shells) of the mid-spectrum shell, the one with the largest d_E.
  std::size_t peak_shell() const { return dos.peak_shell(); }
};

/// Per-shell aggregates; only shells with d_E >= min_count get a row.
ShellTable run_shell_average(const SpinBasis& basis, const Spectrum& spec,
                             const BipartitionSpec& part, const DosTable& dos,
                             std::size_t min_count = kDefaultMinShellCount);

/// Open-chain Hamiltonian on the full 2^n_sites space, all Sz sectors.
/// A single site has H = 0.
Eigen::MatrixXd full_space_hamiltonian(int n_sites, double delta2);

struct ThermalFit {
  double beta = 0.0;
  double distance = 0.0;
};

inline constexpr double kThermalBetaMax = 10.0;

/// Minimizes ||rho - exp(-beta h)/Q||_F over beta in [-beta_max, beta_max]
/// by a grid scan refined with golden-section search.
ThermalFit fit_thermal_beta(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h,
                            double beta_max = kThermalBetaMax);

enum class SpectrumSide { Left, Right };

std::string_view to_string(SpectrumSide side);

struct GammaShell {
  std::size_t shell = 0;
  double ln_dos = 0.0;
  double mean_svn = 0.0;
  /// ln(d_E) / ln(D) with D the sector dimension.
  double gamma_predicted = 0.0;
};

struct FitResult {
  SpectrumSide side = SpectrumSide::Left;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<GammaShell> shells;
  /// Unweighted mean of gamma_predicted over the fitted shells.
  double gamma_predicted_mean = 0.0;
};

/// Least-squares line of mean eigenket entropy against ln(DOS) on one side
/// of the DOS peak. The peak shell belongs to both sides. Needs >= 3 rows.
FitResult fit_entropy_vs_lndos(const ShellTable& table, SpectrumSide side);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct VolumeLawRow {
  int l1 = 0;
  double mean_svn = 0.0;
  double shell_lo = 0.0;
  double shell_hi = 0.0;
  std::size_t d_e = 0;
};

/// Mean eigenket entropy over the mid-spectrum shell for each subsystem size.
std::vector<VolumeLawRow> run_volume_law(const SpinBasis& basis, const Spectrum& spec,
                                         const DosTable& dos, std::span<const int> l1_values);

struct DegeneracyCensus {
  /// multiplet size -> number of multiplets of that size
  std::map<std::size_t, std::size_t> histogram;
  std::size_t n_levels = 0;

  /// Fraction of levels that sit in a multiplet of size >= 2.
  double degenerate_fraction() const;
};

DegeneracyCensus degeneracy_census(std::span<const double> sorted_energies,
                                   double tol = kDegeneracyTol);

/// Census of the full 2^N spectrum, assembled from every Sz sector.
DegeneracyCensus full_space_census(int n_sites, double delta2, double tol = kDegeneracyTol);

} // namespace entroscope
