#include "entroscope/error.hpp"
#include "entroscope/hamiltonian.hpp"

#include "oracle/brute_force.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

using namespace entroscope;

TEST_CASE("two-site singlet/triplet block") {
  const SpinBasis b = enumerate_sector(2, 1);
  const Eigen::MatrixXd h = build_hamiltonian(b, {2, 0.0}).dense();
  Eigen::Matrix2d expected;
  expected << -0.25, 0.5, 0.5, -0.25;
  CHECK((h - expected).norm() == 0.0);
  const Eigen::VectorXd e = oracle::eigenvalues(h);
  CHECK(e(0) == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(e(1) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("fully polarized three-site state") {
  const SpinBasis b = enumerate_sector(3, 3);
  for (const double d2 : {0.0, 0.5, -1.3, 2.0}) {
    const Eigen::MatrixXd h = build_hamiltonian(b, {3, d2}).dense();
    REQUIRE(h.rows() == 1);
    CHECK(h(0, 0) == doctest::Approx(0.5 + d2 / 4.0).epsilon(1e-15));
  }
}

TEST_CASE("sixteen-site sector is symmetric and sparse") {
  const SpinBasis b = enumerate_sector(16, 8);
  const SymmetricOperator h = build_hamiltonian(b, {16, 0.5});
  CHECK(h.dim() == 12870);
  // Diagonal plus at most N-1 bond flips per row.
  CHECK(h.max_row_nonzeros() <= 16);
  std::map<std::pair<std::size_t, std::size_t>, double> entries;
  for (const auto& t : h.entries()) entries[{t.row, t.col}] = t.value;
  for (const auto& [rc, v] : entries) {
    const auto it = entries.find({rc.second, rc.first});
    REQUIRE(it != entries.end());
    CHECK(it->second == v);
  }
}

TEST_CASE("matches the Kronecker-product oracle in every sector up to N=6") {
  for (int n = 2; n <= 6; ++n) {
    for (const double d2 : {0.0, 0.5, 1.7}) {
      const Eigen::MatrixXd full = oracle::full_hamiltonian(n, d2);
      for (int k = 0; k <= n; ++k) {
        const SpinBasis b = enumerate_sector(n, k);
        const Eigen::MatrixXd mine = build_hamiltonian(b, {n, d2}).dense();
        const Eigen::MatrixXd ref = oracle::restrict(full, oracle::sector_indices(n, k));
        CHECK((mine - ref).cwiseAbs().maxCoeff() <= 1e-14);
      }
    }
  }
}

TEST_CASE("stored entries are exactly symmetric and stay in the sector") {
  const SpinBasis b = enumerate_sector(10, 5);
  const SymmetricOperator op = build_hamiltonian(b, {10, 0.5});
  const Eigen::MatrixXd h = op.dense();
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& t : op.entries()) {
    CHECK(std::popcount(b.state(t.row)) == std::popcount(b.state(t.col)));
  }
}

TEST_CASE("sector traces sum to zero over the full space") {
  for (int n = 2; n <= 10; ++n) {
    for (const double d2 : {0.0, 0.5}) {
      double total = 0.0;
      for (int k = 0; k <= n; ++k) total += build_hamiltonian(enumerate_sector(n, k), {n, d2}).trace();
      CHECK(std::abs(total) <= 1e-12);
    }
  }
}

TEST_CASE("apply agrees with the dense matrix") {
  const SpinBasis b = enumerate_sector(8, 4);
  const SymmetricOperator op = build_hamiltonian(b, {8, 0.5});
  Eigen::VectorXd v(static_cast<Eigen::Index>(b.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::sin(0.3 * static_cast<double>(i) + 1.0);
  CHECK((op.apply(v) - op.dense() * v).norm() <= 1e-12);
  CHECK(op.frobenius_norm() == doctest::Approx(op.dense().norm()).epsilon(1e-14));
}

TEST_CASE("size mismatch and non-finite coupling are rejected") {
  const SpinBasis b = enumerate_sector(4, 2);
  CHECK_THROWS_AS(build_hamiltonian(b, {5, 0.0}), DomainError);
  CHECK_THROWS_AS(build_hamiltonian(b, {4, std::nan("")}), DomainError);
}
