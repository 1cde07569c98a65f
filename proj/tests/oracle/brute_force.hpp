#pragma once

// Reference implementation for tests: everything is built in the full 2^N
// space from Kronecker products of single-site matrices, with no bitmask or
// sector logic, and diagonalized with Eigen's own solver.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace oracle {

/// Single-site operator `op` acting on site k (1-based) of an n-site chain,
/// with site 1 as the leftmost Kronecker factor.
Eigen::MatrixXd site_operator(const Eigen::Matrix2d& op, int k, int n);

/// Dense 2^n x 2^n Hamiltonian of the open chain.
Eigen::MatrixXd full_hamiltonian(int n, double delta2);

/// Full-space indices whose Sz equals (2 * n_up - n) / 2, found by
/// diagonal total-Sz values rather than bit counting.
std::vector<int> sector_indices(int n, int n_up);

Eigen::MatrixXd restrict(const Eigen::MatrixXd& full, const std::vector<int>& indices);

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m);

/// Reduced density matrix of sites 1..l1 by explicit index sums.
Eigen::MatrixXcd trace_out_bath(const Eigen::MatrixXcd& rho, int n, int l1);

/// Reduced density matrix of sites l1+1..n.
Eigen::MatrixXcd trace_out_subsystem(const Eigen::MatrixXcd& rho, int n, int l1);

/// -Tr rho ln rho from Eigen's Hermitian eigensolver.
double entropy(const Eigen::MatrixXcd& rho);

} // namespace oracle
