#pragma once

#include "entroscope/basis.hpp"
#include "entroscope/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace entroscope {

using Complex = std::complex<double>;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kOrthonormalTol = 1e-10;

/// The Hilbert space a state lives on.
///   Full:    the 2^n_sites tensor-product space, site 1 = most significant bit.
///   Sector:  a fixed-Sz sector, identified by its basis tag.
///   Generic: an unstructured space of some dimension.
struct SpaceTag {
  enum class Kind { Full, Sector, Generic };

  Kind kind = Kind::Generic;
  int n_sites = 0;
  std::string basis_tag;

  static SpaceTag full(int n_sites) { return {Kind::Full, n_sites, {}}; }
  static SpaceTag sector(std::string tag) { return {Kind::Sector, 0, std::move(tag)}; }
  static SpaceTag generic() { return {}; }

  bool operator==(const SpaceTag&) const = default;
};

/// Unit-norm state vector.
class StateVector {
public:
  /// Throws DomainError unless |amplitudes| = 1 within kNormTol.
  StateVector(Eigen::VectorXcd amplitudes, SpaceTag space);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  const SpaceTag& space() const { return space_; }
  bool is_real() const;

private:
  Eigen::VectorXcd amps_;
  SpaceTag space_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
public:
  /// Validates Hermiticity, trace and positivity; throws DomainError on failure.
  static DensityMatrix from_matrix(Eigen::MatrixXcd matrix, SpaceTag space);

  /// For matrices that are a density matrix by construction. Only the cheap
  /// shape check is performed and the matrix is symmetrized.
  static DensityMatrix trusted(Eigen::MatrixXcd matrix, SpaceTag space);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const SpaceTag& space() const { return space_; }
  Complex trace() const { return matrix_.trace(); }

  /// Ascending eigenvalues, unclipped.
  Eigen::VectorXd eigenvalues() const;

private:
  DensityMatrix(Eigen::MatrixXcd matrix, SpaceTag space)
      : matrix_(std::move(matrix)), space_(std::move(space)) {}

  Eigen::MatrixXcd matrix_;
  SpaceTag space_;
};

/// Leading-block bipartition of an open chain: subsystem A is sites 1..l1,
/// the bath B is sites l1+1..N.
struct BipartitionSpec {
  int n_sites = 0;
  int l1 = 0;

  /// Throws DomainError unless 1 <= l1 <= n_sites - 1.
  static BipartitionSpec make(int n_sites, int l1);

  std::size_t dim_a() const { return std::size_t{1} << l1; }
  std::size_t dim_b() const { return std::size_t{1} << (n_sites - l1); }
};

/// Scatters sector amplitudes into the full 2^N space.
StateVector embed_sector_state(const SpinBasis& basis, const Eigen::VectorXcd& amplitudes);
StateVector embed_sector_state(const SpinBasis& basis, const Eigen::VectorXd& amplitudes);

/// Lifts a sector density matrix into the full space. Practical only at small N.
DensityMatrix embed_sector_density(const SpinBasis& basis, const DensityMatrix& rho);

DensityMatrix pure_density(const StateVector& psi);

struct WeightedDensity {
  double weight;
  DensityMatrix rho;
};

/// Convex combination; weights must be nonnegative and sum to 1 within 1e-12.
DensityMatrix mix(std::span<const WeightedDensity> components);

/// Uniform mixture of the shell's eigenkets, on the sector space.
DensityMatrix microcanonical(const Spectrum& spec, const EnergyShell& shell);

/// Boltzmann weights exp(-beta E_n) / Q with a max-shift for overflow safety.
std::vector<double> gibbs_weights(std::span<const double> energies, double beta);

/// exp(-beta H) / Q on the sector space.
DensityMatrix gibbs(const Spectrum& spec, double beta);

/// Reduced state of sites 1..l1 (the bath is traced out). Inputs must live
/// in the Full space of part.n_sites sites.
DensityMatrix partial_trace(const StateVector& psi, const BipartitionSpec& part);
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionSpec& part);

/// Reduced state of the bath, sites l1+1..N.
DensityMatrix complement_trace(const StateVector& psi, const BipartitionSpec& part);
DensityMatrix complement_trace(const DensityMatrix& rho, const BipartitionSpec& part);

/// Subsystem state of eigenket n of a sector spectrum.
DensityMatrix eigenket_rdm(const SpinBasis& basis, const Spectrum& spec, std::size_t n,
                           const BipartitionSpec& part);

/// Number of eigenket subsystem states held at once by the windowed shell
/// reductions, sized to keep the window near 256 MiB.
std::size_t rdm_window(const BipartitionSpec& part, std::size_t count);

/// Mean of the eigenket subsystem states over a shell. The states are built
/// in parallel and summed in eigenindex order, so the result does not depend
/// on the thread count.
DensityMatrix averaged_rdm(const SpinBasis& basis, const Spectrum& spec, const EnergyShell& shell,
                           const BipartitionSpec& part);

/// Projective measurement in the orthonormal basis given by the columns of
/// `basis`: rho' = sum_n <phi_n|rho|phi_n> |phi_n><phi_n|.
DensityMatrix measure(const DensityMatrix& rho, const Eigen::MatrixXcd& basis);

/// Diagonal weights <phi_n|rho|phi_n>.
std::vector<double> measurement_weights(const DensityMatrix& rho, const Eigen::MatrixXcd& basis);

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix conjugate(const DensityMatrix& rho, const Eigen::MatrixXcd& unitary);

// Random generators for property tests. All draws come from the supplied
// engine, so a fixed seed reproduces the same objects bit for bit.

using Rng = std::mt19937_64;

Eigen::MatrixXcd random_gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
Eigen::MatrixXcd random_unitary(Rng& rng, std::size_t dim);

/// Columns form a Haar-random orthonormal basis.
Eigen::MatrixXcd random_orthonormal_basis(Rng& rng, std::size_t dim);

StateVector random_pure(Rng& rng, std::size_t dim, SpaceTag space = SpaceTag::generic());

/// G G^dagger / Tr(G G^dagger) with G a square complex Gaussian matrix.
DensityMatrix random_density(Rng& rng, std::size_t dim, SpaceTag space = SpaceTag::generic());

struct PureComponent {
  double weight;
  StateVector psi;
};

/// Ensemble {p_j, psi_j} realizing rho, obtained by rotating the eigen-
/// ensemble sqrt(lambda_i)|e_i> with the rows of `isometry` (K x dim,
/// orthonormal columns, K >= dim). Zero-weight members are dropped.
std::vector<PureComponent> decompose_with(const DensityMatrix& rho, const Eigen::MatrixXcd& isometry);

/// decompose_with using a Haar-random isometry of n_terms rows (0 = dim).
std::vector<PureComponent> random_decomposition(Rng& rng, const DensityMatrix& rho,
                                                std::size_t n_terms = 0);

/// Eigen-ensemble of rho (the decomposition with minimal Shannon entropy).
std::vector<PureComponent> eigen_decomposition(const DensityMatrix& rho);

DensityMatrix reconstruct(std::span<const PureComponent> ensemble, SpaceTag space);

/// Eigenvalues of a Hermitian matrix, real solver when the imaginary part vanishes.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& matrix);

} // namespace entroscope
