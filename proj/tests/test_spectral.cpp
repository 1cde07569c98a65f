#include "entroscope/error.hpp"
#include "entroscope/spectral.hpp"

#include "oracle/brute_force.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

using namespace entroscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "entroscope_test_spectral";
  fs::create_directories(dir);
  return dir / name;
}

Spectrum model(int n, double d2) { return solve_sector(enumerate_sector(n, n / 2), {n, d2}); }

} // namespace

TEST_CASE("two-site closed form") {
  const Spectrum s = model(2, 0.0);
  REQUIRE(s.dim() == 2);
  CHECK(s.eigenvalues(0) == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.25).epsilon(1e-14));
  const double r = 1.0 / std::sqrt(2.0);
  // Basis order is (|down up>, |up down>); the singlet is antisymmetric.
  CHECK(std::abs(s.eigenvectors(0, 0)) == doctest::Approx(r));
  CHECK(s.eigenvectors(0, 0) == doctest::Approx(-s.eigenvectors(1, 0)));
  CHECK(s.eigenvectors(0, 1) == doctest::Approx(r));
  CHECK(s.eigenvectors(1, 1) == doctest::Approx(r));
  CHECK(s.key == SpectrumKey{2, 1, 0.0});
}

TEST_CASE("identity operator") {
  const SymmetricOperator id(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, "id3");
  const Spectrum s = diagonalize(id);
  CHECK((s.eigenvalues - Eigen::VectorXd::Ones(3)).norm() == 0.0);
  CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-14);
  CHECK(s.basis_tag == "id3");
}

TEST_CASE("four-site ground energy matches full-space brute force") {
  const Eigen::MatrixXd full = oracle::full_hamiltonian(4, 0.0);
  const Eigen::VectorXd all = oracle::eigenvalues(full);
  const Eigen::VectorXd sector = oracle::eigenvalues(oracle::restrict(full, oracle::sector_indices(4, 2)));
  const Spectrum s = model(4, 0.0);
  CHECK(s.eigenvalues(0) == doctest::Approx(sector(0)).epsilon(1e-12));
  // The singlet ground state of the open chain is also the global ground state.
  CHECK(s.eigenvalues(0) == doctest::Approx(all(0)).epsilon(1e-12));
  CHECK((s.eigenvalues - sector).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("residual, orthonormality, completeness and trace") {
  for (const int n : {8, 10, 12}) {
    for (const double d2 : {0.0, 0.5}) {
      const SpinBasis b = enumerate_sector(n, n / 2);
      const SymmetricOperator h = build_hamiltonian(b, {n, d2});
      const Spectrum s = solve_sector(b, {n, d2});
      const SpectrumDiagnostics diag = check_spectrum(h, s);
      CHECK(diag.scaled_residual <= kResidualTol);
      CHECK(diag.orthonormality_error <= 1e-10);
      for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
      CHECK(std::abs(h.trace() - s.eigenvalues.sum()) <= 1e-8 * std::max(1.0, std::abs(h.trace())));
      if (n <= 10) {
        const auto d = static_cast<Eigen::Index>(s.dim());
        CHECK((s.eigenvectors * s.eigenvectors.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() <= 1e-8);
      }
    }
  }
}

TEST_CASE("eigenvector signs are fixed") {
  const Spectrum s = model(8, 0.5);
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    s.eigenvectors.col(c).cwiseAbs().maxCoeff(&pivot);
    CHECK(s.eigenvectors(pivot, c) > 0.0);
  }
}

TEST_CASE("multiplets") {
  const double e[] = {-1.0, 0.0, 1e-12, 2.0, 2.0, 2.0, 3.0};
  const auto m = find_multiplets(e);
  REQUIRE(m.size() == 4);
  CHECK(m[1].first == 1);
  CHECK(m[1].size == 2);
  CHECK(m[2].size == 3);
  const auto per = multiplet_size_per_index(e);
  CHECK(per == std::vector<std::size_t>{1, 2, 2, 3, 3, 3, 1});
  CHECK(find_multiplets(e, 0.0).size() == 7);
}

TEST_CASE("shell partition of {0, 0.1, 0.9} into two bins") {
  const double e[] = {0.0, 0.1, 0.9};
  const DosTable t = partition_shells(e, 2);
  REQUIRE(t.shells.size() == 2);
  CHECK(t.shells[0].count == 2);
  CHECK(t.shells[1].count == 1);
  CHECK(t.width == doctest::Approx(0.45).epsilon(1e-8));
  CHECK(t.width > 0.45);
  CHECK(t.dos(0) == doctest::Approx(2.0 / 0.45).epsilon(1e-8));
  CHECK(t.dos(1) == doctest::Approx(1.0 / 0.45).epsilon(1e-8));
  CHECK(t.shells[0].lower < 0.0);
  CHECK(*t.ln_dos(0) == doctest::Approx(std::log(2.0 / 0.45)).epsilon(1e-8));
}

TEST_CASE("single bin holds everything") {
  const Spectrum s = model(8, 0.5);
  const DosTable t = partition_shells(s.energies(), 1);
  REQUIRE(t.shells.size() == 1);
  CHECK(t.shells[0].count == s.dim());
}

TEST_CASE("degenerate spectrum and oversubscription") {
  const double e[] = {1.0, 1.0, 1.0};
  const DosTable t = partition_shells(e, 4);
  CHECK(t.oversubscribed);
  CHECK(t.total_count() == 3);
  CHECK(t.shells[0].count == 3);
  CHECK_FALSE(t.ln_dos(1).has_value());
}

TEST_CASE("partition is exhaustive, disjoint and half-open for every bin count") {
  const Spectrum s = model(10, 0.5);
  for (std::size_t bins = 1; bins <= 300; bins += 7) {
    const DosTable t = partition_shells(s.energies(), bins);
    REQUIRE(t.shells.size() == bins);
    CHECK(t.total_count() == s.dim());
    std::size_t next = 0;
    for (const auto& shell : t.shells) {
      CHECK(shell.first == next);
      next += shell.count;
      for (const std::size_t n : shell.members()) {
        CHECK(s.eigenvalues(static_cast<Eigen::Index>(n)) > shell.lower);
        CHECK(s.eigenvalues(static_cast<Eigen::Index>(n)) <= shell.upper);
      }
    }
    CHECK(next == s.dim());
  }
  CHECK_THROWS_AS(partition_shells(s.energies(), 0), DomainError);
}

TEST_CASE("DOS profile is bell shaped") {
  // Full-size check (N = 16) runs when ENTROSCOPE_LONG_TESTS is set.
  const int n = std::getenv("ENTROSCOPE_LONG_TESTS") ? 16 : 14;
  const SpinBasis b = enumerate_sector(n, n / 2);
  const Eigen::VectorXd e = eigenvalues_only(build_hamiltonian(b, {n, 0.5}));
  const DosTable t = partition_shells({e.data(), static_cast<std::size_t>(e.size())}, 50);
  const double mid = t.shells[t.peak_shell()].midpoint();
  const double lo = e(0);
  const double hi = e(e.size() - 1);
  CHECK(mid > lo + (hi - lo) / 3.0);
  CHECK(mid < lo + 2.0 * (hi - lo) / 3.0);
}

TEST_CASE("spectrum file round trip is bitwise") {
  const Spectrum s = model(6, 0.5);
  const fs::path p = scratch("roundtrip.spec");
  save_spectrum(s, p);
  const Spectrum r = load_spectrum(p, s.key);
  CHECK(r.key == s.key);
  CHECK(r.basis_tag == s.basis_tag);
  REQUIRE(r.dim() == s.dim());
  CHECK(std::memcmp(r.eigenvalues.data(), s.eigenvalues.data(), s.dim() * sizeof(double)) == 0);
  CHECK(std::memcmp(r.eigenvectors.data(), s.eigenvectors.data(), s.dim() * s.dim() * sizeof(double)) == 0);
}

TEST_CASE("corrupt spectrum files are rejected") {
  const Spectrum s = model(2, 0.0);
  const fs::path good = scratch("good.spec");
  save_spectrum(s, good);
  std::string bytes;
  {
    std::ifstream in(good, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
  };

  SUBCASE("wrong magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    write(scratch("magic.spec"), bad);
    CHECK_THROWS_AS(load_spectrum(scratch("magic.spec")), FormatError);
  }
  SUBCASE("unknown version") {
    std::string bad = bytes;
    bad[8] = 9;
    write(scratch("version.spec"), bad);
    CHECK_THROWS_AS(load_spectrum(scratch("version.spec")), FormatError);
  }
  SUBCASE("truncated") {
    write(scratch("trunc.spec"), bytes.substr(0, bytes.size() - 12));
    CHECK_THROWS_AS(load_spectrum(scratch("trunc.spec")), ChecksumError);
    write(scratch("trunc2.spec"), bytes.substr(0, 11));
    CHECK_THROWS_AS(load_spectrum(scratch("trunc2.spec")), ChecksumError);
  }
  SUBCASE("flipped payload bit") {
    std::string bad = bytes;
    bad[bad.size() - 20] ^= 0x01;
    write(scratch("flip.spec"), bad);
    CHECK_THROWS_AS(load_spectrum(scratch("flip.spec")), ChecksumError);
  }
  SUBCASE("wrong model") {
    CHECK_THROWS_AS(load_spectrum(good, SpectrumKey{2, 1, 0.5}), BasisMismatchError);
    CHECK_THROWS_AS(load_spectrum(good, SpectrumKey{4, 2, 0.0}), BasisMismatchError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_spectrum(scratch("nope.spec")), IoError); }
}

TEST_CASE("cache path layout") {
  CHECK(cache_path("cache", {16, 8, 0.5}) == fs::path("cache/N16_nup8_d20.5.spec"));
  CHECK(cache_path("cache", {14, 7, 0.0}) == fs::path("cache/N14_nup7_d20.spec"));
  CHECK(format_coupling(0.1) == "0.1");
}
