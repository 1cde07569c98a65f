#include "entroscope/quantum_state.hpp"

#include "entroscope/error.hpp"
#include "entroscope/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace entroscope {

namespace {

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_full(const SpaceTag& space, const BipartitionSpec& part, const char* where) {
  if (space.kind != SpaceTag::Kind::Full) {
    throw DomainError(std::string(where) +
                      ": input must live in the full tensor space (embed sector states first)");
  }
  if (space.n_sites != part.n_sites) {
    throw DomainError(std::string(where) + ": state has " + std::to_string(space.n_sites) +
                      " sites, bipartition expects " + std::to_string(part.n_sites));
  }
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool imaginary_part_vanishes(const Eigen::MatrixXcd& m) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
}

// Rows of the reshaped amplitude matrix index sites 1..l1, columns the bath.
// View it column-major as a (d_B x d_A) block: element (b, a) = psi[a * d_B + b].
template <typename Vec>
auto as_block(const Vec& v, const BipartitionSpec& part) {
  using Scalar = typename Vec::Scalar;
  return Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
      v.data(), idx(part.dim_b()), idx(part.dim_a()));
}

} // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes, SpaceTag space)
    : amps_(std::move(amplitudes)), space_(std::move(space)) {
  if (space_.kind == SpaceTag::Kind::Full &&
      dim() != (std::size_t{1} << space_.n_sites)) {
    throw DomainError("StateVector: full-space vector has the wrong length");
  }
  if (std::abs(amps_.norm() - 1.0) > kNormTol) {
    throw DomainError("StateVector: amplitudes are not normalized (norm " +
                      std::to_string(amps_.norm()) + ")");
  }
}

bool StateVector::is_real() const { return amps_.imag().isZero(0.0); }

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd matrix, SpaceTag space) {
  if (matrix.rows() != matrix.cols()) throw DomainError("DensityMatrix: matrix is not square");
  if (max_abs(matrix - matrix.adjoint()) > kHermitianTol) {
    throw DomainError("DensityMatrix: matrix is not Hermitian");
  }
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw DomainError("DensityMatrix: trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const Eigen::VectorXd w = hermitian_eigenvalues(matrix);
  if (w.size() > 0 && w.minCoeff() < -kPsdTol) {
    throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(w.minCoeff()));
  }
  return trusted(std::move(matrix), std::move(space));
}

DensityMatrix DensityMatrix::trusted(Eigen::MatrixXcd matrix, SpaceTag space) {
  if (matrix.rows() != matrix.cols()) throw DomainError("DensityMatrix: matrix is not square");
  Eigen::MatrixXcd symmetric = 0.5 * (matrix + matrix.adjoint());
  return DensityMatrix(std::move(symmetric), std::move(space));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(matrix_); }

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& matrix) {
  if (matrix.size() == 0) return {};
  if (imaginary_part_vanishes(matrix)) {
    const Eigen::MatrixXd re = matrix.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(re, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: no convergence");
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: no convergence");
  return solver.eigenvalues();
}

BipartitionSpec BipartitionSpec::make(int n_sites, int l1) {
  if (n_sites < 2 || l1 < 1 || l1 > n_sites - 1) {
    throw DomainError("BipartitionSpec: l1=" + std::to_string(l1) + " outside [1, " +
                      std::to_string(n_sites - 1) + "]");
  }
  return {n_sites, l1};
}

StateVector embed_sector_state(const SpinBasis& basis, const Eigen::VectorXcd& amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != basis.dim()) {
    throw DomainError("embed_sector_state: vector length " + std::to_string(amplitudes.size()) +
                      " does not match sector dim " + std::to_string(basis.dim()));
  }
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(idx(std::size_t{1} << basis.n_sites()));
  for (std::size_t i = 0; i < basis.dim(); ++i) full(idx(basis.state(i))) = amplitudes(idx(i));
  return {std::move(full), SpaceTag::full(basis.n_sites())};
}

StateVector embed_sector_state(const SpinBasis& basis, const Eigen::VectorXd& amplitudes) {
  return embed_sector_state(basis, Eigen::VectorXcd(amplitudes.cast<Complex>()));
}

DensityMatrix embed_sector_density(const SpinBasis& basis, const DensityMatrix& rho) {
  if (rho.dim() != basis.dim()) throw DomainError("embed_sector_density: dimension mismatch");
  const auto full_dim = idx(std::size_t{1} << basis.n_sites());
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(full_dim, full_dim);
  for (std::size_t j = 0; j < basis.dim(); ++j)
    for (std::size_t i = 0; i < basis.dim(); ++i)
      full(idx(basis.state(i)), idx(basis.state(j))) = rho.matrix()(idx(i), idx(j));
  return DensityMatrix::trusted(std::move(full), SpaceTag::full(basis.n_sites()));
}

DensityMatrix pure_density(const StateVector& psi) {
  const Eigen::VectorXcd& v = psi.amplitudes();
  return DensityMatrix::trusted(v * v.adjoint(), psi.space());
}

DensityMatrix mix(std::span<const WeightedDensity> components) {
  if (components.empty()) throw DomainError("mix: no components");
  const std::size_t dim = components.front().rho.dim();
  double total = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0) throw DomainError("mix: negative weight");
    if (c.rho.dim() != dim) throw DomainError("mix: dimension mismatch");
    if (!(c.rho.space() == components.front().rho.space())) {
      throw DomainError("mix: components live on different spaces");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mix: weights do not sum to 1");

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(idx(dim), idx(dim));
  for (const auto& c : components) sum += c.weight * c.rho.matrix();
  return DensityMatrix::trusted(std::move(sum), components.front().rho.space());
}

DensityMatrix microcanonical(const Spectrum& spec, const EnergyShell& shell) {
  if (shell.count == 0) throw DomainError("microcanonical: empty shell");
  if (shell.first + shell.count > spec.dim()) throw DomainError("microcanonical: shell out of range");
  const Eigen::MatrixXd v = spec.eigenvectors.middleCols(idx(shell.first), idx(shell.count));
  const Eigen::MatrixXd rho = (v * v.transpose()) / static_cast<double>(shell.count);
  return DensityMatrix::trusted(rho.cast<Complex>(), SpaceTag::sector(spec.basis_tag));
}

std::vector<double> gibbs_weights(std::span<const double> energies, double beta) {
  if (!std::isfinite(beta)) throw DomainError("gibbs_weights: beta is not finite");
  if (energies.empty()) throw DomainError("gibbs_weights: empty spectrum");
  double shift = -beta * energies.front();
  for (const double e : energies) shift = std::max(shift, -beta * e);
  std::vector<double> w(energies.size());
  double z = 0.0;
  for (std::size_t n = 0; n < energies.size(); ++n) {
    w[n] = std::exp(-beta * energies[n] - shift);
    z += w[n];
  }
  for (double& x : w) x /= z;
  return w;
}

DensityMatrix gibbs(const Spectrum& spec, double beta) {
  const std::vector<double> p = gibbs_weights(spec.energies(), beta);
  const Eigen::Map<const Eigen::VectorXd> weights(p.data(), idx(p.size()));
  const Eigen::MatrixXd rho =
      spec.eigenvectors * weights.asDiagonal() * spec.eigenvectors.transpose();
  return DensityMatrix::trusted(rho.cast<Complex>(), SpaceTag::sector(spec.basis_tag));
}

DensityMatrix partial_trace(const StateVector& psi, const BipartitionSpec& part) {
  require_full(psi.space(), part, "partial_trace");
  const SpaceTag sub = SpaceTag::full(part.l1);
  if (psi.is_real()) {
    const Eigen::VectorXd re = psi.amplitudes().real();
    const auto m = as_block(re, part);
    const Eigen::MatrixXd rho = m.transpose() * m;
    return DensityMatrix::trusted(rho.cast<Complex>(), sub);
  }
  const auto m = as_block(psi.amplitudes(), part);
  return DensityMatrix::trusted(m.transpose() * m.conjugate(), sub);
}

DensityMatrix complement_trace(const StateVector& psi, const BipartitionSpec& part) {
  require_full(psi.space(), part, "complement_trace");
  const SpaceTag sub = SpaceTag::full(part.n_sites - part.l1);
  if (psi.is_real()) {
    const Eigen::VectorXd re = psi.amplitudes().real();
    const auto m = as_block(re, part);
    const Eigen::MatrixXd rho = m * m.transpose();
    return DensityMatrix::trusted(rho.cast<Complex>(), sub);
  }
  const auto m = as_block(psi.amplitudes(), part);
  return DensityMatrix::trusted(m * m.adjoint(), sub);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionSpec& part) {
  require_full(rho.space(), part, "partial_trace");
  const std::size_t da = part.dim_a();
  const std::size_t db = part.dim_b();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(idx(da), idx(da));
  for (std::size_t a2 = 0; a2 < da; ++a2)
    for (std::size_t a1 = 0; a1 < da; ++a1)
      out(idx(a1), idx(a2)) =
          rho.matrix().block(idx(a1 * db), idx(a2 * db), idx(db), idx(db)).trace();
  return DensityMatrix::trusted(std::move(out), SpaceTag::full(part.l1));
}

DensityMatrix complement_trace(const DensityMatrix& rho, const BipartitionSpec& part) {
  require_full(rho.space(), part, "complement_trace");
  const std::size_t da = part.dim_a();
  const std::size_t db = part.dim_b();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(idx(db), idx(db));
  for (std::size_t a = 0; a < da; ++a) out += rho.matrix().block(idx(a * db), idx(a * db), idx(db), idx(db));
  return DensityMatrix::trusted(std::move(out), SpaceTag::full(part.n_sites - part.l1));
}

DensityMatrix eigenket_rdm(const SpinBasis& basis, const Spectrum& spec, std::size_t n,
                           const BipartitionSpec& part) {
  if (n >= spec.dim()) throw DomainError("eigenket_rdm: eigenindex out of range");
  const Eigen::VectorXd v = spec.eigenvectors.col(idx(n));
  return partial_trace(embed_sector_state(basis, v), part);
}

std::size_t rdm_window(const BipartitionSpec& part, std::size_t count) {
  constexpr std::size_t kBudget = std::size_t{256} << 20;
  const std::size_t per = part.dim_a() * part.dim_a() * sizeof(Complex);
  return std::clamp<std::size_t>(kBudget / per, 1, std::max<std::size_t>(count, 1));
}

DensityMatrix averaged_rdm(const SpinBasis& basis, const Spectrum& spec, const EnergyShell& shell,
                           const BipartitionSpec& part) {
  if (shell.count == 0) throw DomainError("averaged_rdm: empty shell");
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(idx(part.dim_a()), idx(part.dim_a()));
  const std::size_t window = rdm_window(part, shell.count);
  std::vector<Eigen::MatrixXcd> slots(window);
  for (std::size_t start = 0; start < shell.count; start += window) {
    const std::size_t len = std::min(window, shell.count - start);
    parallel_for(len, [&](std::size_t j) {
      slots[j] = eigenket_rdm(basis, spec, shell.first + start + j, part).matrix();
    });
    for (std::size_t j = 0; j < len; ++j) sum += slots[j];
  }
  sum /= static_cast<double>(shell.count);
  return DensityMatrix::trusted(std::move(sum), SpaceTag::full(part.l1));
}

std::vector<double> measurement_weights(const DensityMatrix& rho, const Eigen::MatrixXcd& basis) {
  if (basis.rows() != idx(rho.dim()) || basis.cols() != idx(rho.dim())) {
    throw DomainError("measure: basis must have dim x dim entries");
  }
  const Eigen::MatrixXcd gram = basis.adjoint() * basis;
  if (max_abs(gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())) > kOrthonormalTol) {
    throw DomainError("measure: basis is not orthonormal");
  }
  std::vector<double> w(rho.dim());
  for (std::size_t n = 0; n < rho.dim(); ++n) {
    const auto phi = basis.col(idx(n));
    w[n] = phi.dot(rho.matrix() * phi).real();
  }
  return w;
}

DensityMatrix measure(const DensityMatrix& rho, const Eigen::MatrixXcd& basis) {
  const std::vector<double> w = measurement_weights(rho, basis);
  const Eigen::Map<const Eigen::VectorXd> weights(w.data(), idx(w.size()));
  Eigen::MatrixXcd out = basis * weights.cast<Complex>().asDiagonal() * basis.adjoint();
  return DensityMatrix::trusted(std::move(out), rho.space());
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const Index da = idx(a.dim());
  const Index db = idx(b.dim());
  Eigen::MatrixXcd out(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  SpaceTag space = SpaceTag::generic();
  if (a.space().kind == SpaceTag::Kind::Full && b.space().kind == SpaceTag::Kind::Full) {
    space = SpaceTag::full(a.space().n_sites + b.space().n_sites);
  }
  return DensityMatrix::trusted(std::move(out), std::move(space));
}

DensityMatrix conjugate(const DensityMatrix& rho, const Eigen::MatrixXcd& unitary) {
  return DensityMatrix::trusted(unitary * rho.matrix() * unitary.adjoint(), rho.space());
}

Eigen::MatrixXcd random_gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(idx(rows), idx(cols));
  // Fill in a fixed (column-major) order so draws are reproducible.
  for (Index c = 0; c < g.cols(); ++c)
    for (Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

Eigen::MatrixXcd random_unitary(Rng& rng, std::size_t dim) {
  const Eigen::MatrixXcd z = random_gaussian_matrix(rng, dim, dim);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

Eigen::MatrixXcd random_orthonormal_basis(Rng& rng, std::size_t dim) { return random_unitary(rng, dim); }

StateVector random_pure(Rng& rng, std::size_t dim, SpaceTag space) {
  Eigen::VectorXcd v = random_gaussian_matrix(rng, dim, 1).col(0);
  v /= v.norm();
  return {std::move(v), std::move(space)};
}

DensityMatrix random_density(Rng& rng, std::size_t dim, SpaceTag space) {
  const Eigen::MatrixXcd g = random_gaussian_matrix(rng, dim, dim);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted(std::move(rho), std::move(space));
}

std::vector<PureComponent> decompose_with(const DensityMatrix& rho, const Eigen::MatrixXcd& isometry) {
  const Index d = idx(rho.dim());
  if (isometry.cols() != d || isometry.rows() < d) {
    throw DomainError("decompose_with: isometry must be K x dim with K >= dim");
  }
  const Eigen::MatrixXcd gram = isometry.adjoint() * isometry;
  if (max_abs(gram - Eigen::MatrixXcd::Identity(d, d)) > kOrthonormalTol) {
    throw DomainError("decompose_with: isometry columns are not orthonormal");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("decompose_with: no convergence");
  const Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd scaled =
      solver.eigenvectors() * lambda.cwiseSqrt().cast<Complex>().asDiagonal();
  // Column j of rotated is sum_i V_{j i} sqrt(lambda_i) |e_i>.
  const Eigen::MatrixXcd rotated = scaled * isometry.transpose();

  std::vector<PureComponent> out;
  for (Index j = 0; j < rotated.cols(); ++j) {
    const double p = rotated.col(j).squaredNorm();
    if (p <= 1e-300) continue;
    Eigen::VectorXcd psi = rotated.col(j) / std::sqrt(p);
    psi /= psi.norm();
    out.push_back({p, StateVector(std::move(psi), rho.space())});
  }
  return out;
}

std::vector<PureComponent> random_decomposition(Rng& rng, const DensityMatrix& rho, std::size_t n_terms) {
  const std::size_t d = rho.dim();
  const std::size_t k = n_terms == 0 ? d : n_terms;
  if (k < d) throw DomainError("random_decomposition: need at least dim terms");
  const Eigen::MatrixXcd u = random_unitary(rng, k);
  return decompose_with(rho, u.leftCols(idx(d)));
}

std::vector<PureComponent> eigen_decomposition(const DensityMatrix& rho) {
  const Index d = idx(rho.dim());
  return decompose_with(rho, Eigen::MatrixXcd::Identity(d, d));
}

DensityMatrix reconstruct(std::span<const PureComponent> ensemble, SpaceTag space) {
  if (ensemble.empty()) throw DomainError("reconstruct: empty ensemble");
  const Index d = idx(ensemble.front().psi.dim());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& c : ensemble) {
    const Eigen::VectorXcd& v = c.psi.amplitudes();
    sum += c.weight * (v * v.adjoint());
  }
  return DensityMatrix::trusted(std::move(sum), std::move(space));
}

} // namespace entroscope
