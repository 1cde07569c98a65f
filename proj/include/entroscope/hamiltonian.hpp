#pragma once

#include "entroscope/basis.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace entroscope {

/// Open Heisenberg chain with an additional next-nearest-neighbour Sz-Sz
/// coupling:
///
///   H = sum_{i=1}^{N-1} S_i . S_{i+1} + delta2 * sum_{i=1}^{N-2} Sz_i Sz_{i+2}
///
/// Energies are in units of the nearest-neighbour exchange. delta2 = 0 is
/// the integrable point.
struct ModelParams {
  int n_sites = 16;
  double delta2 = 0.0;
};

inline constexpr std::size_t kDenseLimit = 20000;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Real symmetric operator on a SpinBasis. Entries are kept as a row-ordered
/// triplet list that already contains both (i, j) and (j, i).
class SymmetricOperator {
public:
  SymmetricOperator(std::size_t dim, std::vector<Triplet> entries, std::string basis_tag);

  std::size_t dim() const { return dim_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  const std::string& basis_tag() const { return basis_tag_; }

  /// Dense copy. Throws DomainError above kDenseLimit.
  Eigen::MatrixXd dense() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  double frobenius_norm() const;
  double trace() const;

  /// Largest number of stored entries in any single row.
  std::size_t max_row_nonzeros() const;

private:
  std::size_t dim_;
  std::vector<Triplet> entries_;
  std::string basis_tag_;
};

/// H restricted to `basis`. Rows are generated in basis order, so the
/// result does not depend on how the work is split.
SymmetricOperator build_hamiltonian(const SpinBasis& basis, const ModelParams& params);

/// <mask|H|mask> for a single configuration.
double diagonal_energy(Mask mask, const ModelParams& params);

} // namespace entroscope
