#include "oracle/brute_force.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace oracle {

namespace {

// Basis order per site: index 0 = down, index 1 = up.
Eigen::Matrix2d sz() { return (Eigen::Matrix2d() << -0.5, 0.0, 0.0, 0.5).finished(); }
Eigen::Matrix2d splus() { return (Eigen::Matrix2d() << 0.0, 0.0, 1.0, 0.0).finished(); }
Eigen::Matrix2d sminus() { return splus().transpose(); }

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

} // namespace

Eigen::MatrixXd site_operator(const Eigen::Matrix2d& op, int k, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int site = 1; site <= n; ++site) {
    out = kron(out, site == k ? Eigen::MatrixXd(op) : Eigen::MatrixXd::Identity(2, 2));
  }
  return out;
}

Eigen::MatrixXd full_hamiltonian(int n, double delta2) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 1; i < n; ++i) {
    h += site_operator(sz(), i, n) * site_operator(sz(), i + 1, n);
    h += 0.5 * (site_operator(splus(), i, n) * site_operator(sminus(), i + 1, n) +
                site_operator(sminus(), i, n) * site_operator(splus(), i + 1, n));
  }
  for (int i = 1; i + 2 <= n; ++i) {
    h += delta2 * site_operator(sz(), i, n) * site_operator(sz(), i + 2, n);
  }
  return h;
}

std::vector<int> sector_indices(int n, int n_up) {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int k = 1; k <= n; ++k) total += site_operator(sz(), k, n);
  const double target = 0.5 * (2 * n_up - n);
  std::vector<int> out;
  for (Eigen::Index i = 0; i < total.rows(); ++i) {
    if (std::abs(total(i, i) - target) < 1e-12) out.push_back(static_cast<int>(i));
  }
  return out;
}

Eigen::MatrixXd restrict(const Eigen::MatrixXd& full, const std::vector<int>& indices) {
  const auto d = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = full(indices[i], indices[j]);
  return out;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

Eigen::MatrixXcd trace_out_bath(const Eigen::MatrixXcd& rho, int n, int l1) {
  const int da = 1 << l1;
  const int db = 1 << (n - l1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b) out(a, ap) += rho(a * db + b, ap * db + b);
  return out;
}

Eigen::MatrixXcd trace_out_subsystem(const Eigen::MatrixXcd& rho, int n, int l1) {
  const int da = 1 << l1;
  const int db = 1 << (n - l1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int bp = 0; bp < db; ++bp)
      for (int a = 0; a < da; ++a) out(b, bp) += rho(a * db + b, a * db + bp);
  return out;
}

double entropy(const Eigen::MatrixXcd& rho) {
  const Eigen::VectorXd w =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho, Eigen::EigenvaluesOnly).eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 1e-15) s -= w(i) * std::log(w(i));
  }
  return s;
}

} // namespace oracle
