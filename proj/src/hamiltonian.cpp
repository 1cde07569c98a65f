#include "entroscope/hamiltonian.hpp"

#include "entroscope/error.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>

namespace entroscope {

namespace {

int spin_sign(Mask mask, int n_sites, int site) {
  return ((mask >> site_bit(n_sites, site)) & 1U) ? 1 : -1;
}

} // namespace

SymmetricOperator::SymmetricOperator(std::size_t dim, std::vector<Triplet> entries,
                                     std::string basis_tag)
    : dim_(dim), entries_(std::move(entries)), basis_tag_(std::move(basis_tag)) {}

Eigen::MatrixXd SymmetricOperator::dense() const {
  if (dim_ > kDenseLimit) {
    throw DomainError("SymmetricOperator::dense: dim " + std::to_string(dim_) +
                      " exceeds the dense limit " + std::to_string(kDenseLimit));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                            static_cast<Eigen::Index>(dim_));
  for (const auto& t : entries_) {
    m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
  }
  return m;
}

Eigen::VectorXd SymmetricOperator::apply(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw DomainError("SymmetricOperator::apply: dimension mismatch");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (const auto& t : entries_) {
    out(static_cast<Eigen::Index>(t.row)) += t.value * v(static_cast<Eigen::Index>(t.col));
  }
  return out;
}

double SymmetricOperator::frobenius_norm() const {
  // Entries are unique per (row, col) as produced by build_hamiltonian.
  double sum = 0.0;
  for (const auto& t : entries_) sum += t.value * t.value;
  return std::sqrt(sum);
}

double SymmetricOperator::trace() const {
  double sum = 0.0;
  for (const auto& t : entries_) {
    if (t.row == t.col) sum += t.value;
  }
  return sum;
}

std::size_t SymmetricOperator::max_row_nonzeros() const {
  std::size_t best = 0;
  std::size_t run = 0;
  std::size_t current = static_cast<std::size_t>(-1);
  for (const auto& t : entries_) {
    if (t.row != current) {
      current = t.row;
      run = 0;
    }
    best = std::max(best, ++run);
  }
  return best;
}

double diagonal_energy(Mask mask, const ModelParams& params) {
  const int n = params.n_sites;
  double nn = 0.0;
  for (int i = 1; i < n; ++i) nn += spin_sign(mask, n, i) * spin_sign(mask, n, i + 1);
  double nnn = 0.0;
  for (int i = 1; i + 2 <= n; ++i) nnn += spin_sign(mask, n, i) * spin_sign(mask, n, i + 2);
  return 0.25 * nn + params.delta2 * 0.25 * nnn;
}

SymmetricOperator build_hamiltonian(const SpinBasis& basis, const ModelParams& params) {
  if (basis.n_sites() != params.n_sites) {
    throw DomainError("build_hamiltonian: basis has " + std::to_string(basis.n_sites()) +
                      " sites but params specify " + std::to_string(params.n_sites));
  }
  if (!std::isfinite(params.delta2)) throw DomainError("build_hamiltonian: delta2 is not finite");

  const int n = params.n_sites;
  std::vector<Triplet> entries;
  entries.reserve(basis.dim() * static_cast<std::size_t>(n));

  std::vector<Triplet> row;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Mask mask = basis.state(i);
    row.clear();
    row.push_back({i, i, diagonal_energy(mask, params)});
    // (S+_i S-_{i+1} + S-_i S+_{i+1}) / 2 flips each anti-aligned bond.
    for (int site = 1; site < n; ++site) {
      const Mask pair = (Mask{1} << site_bit(n, site)) | (Mask{1} << site_bit(n, site + 1));
      const Mask bits = mask & pair;
      if (bits == 0 || bits == pair) continue;
      const Mask flipped = mask ^ pair;
      assert(std::popcount(flipped) == std::popcount(mask));
      row.push_back({i, basis.index_of(flipped), 0.5});
    }
    std::sort(row.begin(), row.end(),
              [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return SymmetricOperator(basis.dim(), std::move(entries), basis.tag());
}

} // namespace entroscope
