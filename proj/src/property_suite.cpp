#include "entroscope/property_suite.hpp"

#include "entroscope/entropy.hpp"
#include "entroscope/quantum_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace entroscope {

namespace {

constexpr double kInequalityTol = 1e-9;

std::size_t draw_dim(Rng& rng, std::size_t lo = 2, std::size_t hi = 16) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

int draw_qubits(Rng& rng) { return std::uniform_int_distribution<int>(2, 4)(rng); }

double shannon_of(const std::vector<PureComponent>& ensemble) {
  std::vector<double> p;
  p.reserve(ensemble.size());
  for (const auto& c : ensemble) p.push_back(c.weight);
  return shannon(p).nats;
}

// Runs `trial` `trials` times and keeps the smallest margin. Each property
// gets its own engine so adding one does not perturb the others.
PropertyResult sweep(std::string name, std::uint64_t seed, std::uint64_t stream, std::size_t trials,
                     double tolerance, const std::function<double(Rng&)>& trial) {
  Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  PropertyResult r{std::move(name), trials, std::numeric_limits<double>::infinity(), tolerance};
  for (std::size_t t = 0; t < trials; ++t) r.worst_margin = std::min(r.worst_margin, trial(rng));
  return r;
}

} // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, std::size_t trials) {
  std::vector<PropertyResult> out;
  const double tol = kInequalityTol;

  out.push_back(sweep("subadditivity S_AB <= S_A + S_B", seed, 0, trials, tol, [&](Rng& rng) {
    const int n = draw_qubits(rng);
    const int l1 = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const DensityMatrix rho = random_density(rng, std::size_t{1} << n, SpaceTag::full(n));
    return check_subadditivity(rho, BipartitionSpec::make(n, l1)).slack + tol;
  }));

  out.push_back(sweep("measurement never lowers S_VN", seed, 1, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const DensityMatrix rho = random_density(rng, d);
    const Eigen::MatrixXcd basis = random_orthonormal_basis(rng, d);
    return von_neumann(measure(rho, basis)).nats - von_neumann(rho).nats + tol;
  }));

  out.push_back(sweep("decomposition Shannon >= S_VN", seed, 2, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const DensityMatrix rho = random_density(rng, d);
    const std::size_t terms = d + std::uniform_int_distribution<std::size_t>(0, d)(rng);
    return shannon_of(random_decomposition(rng, rho, terms)) - von_neumann(rho).nats + tol;
  }));

  out.push_back(sweep("eigen-ensemble Shannon == S_VN", seed, 3, trials, tol, [&](Rng& rng) {
    const DensityMatrix rho = random_density(rng, draw_dim(rng));
    return tol - std::abs(shannon_of(eigen_decomposition(rho)) - von_neumann(rho).nats);
  }));

  out.push_back(sweep("basis Shannon >= S_VN", seed, 4, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const DensityMatrix rho = random_density(rng, d);
    const std::vector<double> w = measurement_weights(rho, random_orthonormal_basis(rng, d));
    return shannon(w).nats - von_neumann(rho).nats + tol;
  }));

  out.push_back(sweep("eigenbasis Shannon == S_VN", seed, 5, trials, tol, [&](Rng& rng) {
    const DensityMatrix rho = random_density(rng, draw_dim(rng));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    const std::vector<double> w = measurement_weights(rho, solver.eigenvectors());
    return tol - std::abs(shannon(w).nats - von_neumann(rho).nats);
  }));

  out.push_back(sweep("unitary invariance of S_VN", seed, 6, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const DensityMatrix rho = random_density(rng, d);
    const Eigen::MatrixXcd u = random_unitary(rng, d);
    return tol - std::abs(von_neumann(conjugate(rho, u)).nats - von_neumann(rho).nats);
  }));

  out.push_back(sweep("pure-state complement symmetry", seed, 7, trials, 1e-8, [&](Rng& rng) {
    const int n = draw_qubits(rng);
    const int l1 = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const auto part = BipartitionSpec::make(n, l1);
    const StateVector psi = random_pure(rng, std::size_t{1} << n, SpaceTag::full(n));
    const double sa = von_neumann(partial_trace(psi, part)).nats;
    const double sb = von_neumann(complement_trace(psi, part)).nats;
    return 1e-8 - std::abs(sa - sb);
  }));

  out.push_back(sweep("concavity of S_VN under mixing", seed, 8, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(k);
    double total = 0.0;
    for (double& x : p) total += (x = unit(rng) + 1e-3);
    std::vector<WeightedDensity> parts;
    double mean_entropy = 0.0;
    double used = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      // The last weight absorbs rounding so the weights sum to one exactly enough.
      const double w = (i + 1 == k) ? 1.0 - used : p[i] / total;
      used += w;
      parts.push_back({w, random_density(rng, d)});
      mean_entropy += w * von_neumann(parts.back().rho).nats;
    }
    return von_neumann(mix(parts)).nats - mean_entropy + tol;
  }));

  out.push_back(sweep("decomposition reconstructs rho", seed, 9, trials, tol, [&](Rng& rng) {
    const std::size_t d = draw_dim(rng);
    const DensityMatrix rho = random_density(rng, d);
    const auto ensemble = random_decomposition(rng, rho, 2 * d);
    return tol - (reconstruct(ensemble, rho.space()).matrix() - rho.matrix()).norm();
  }));

  return out;
}

std::string format_tap(const std::vector<PropertyResult>& results) {
  std::ostringstream os;
  os.precision(6);
  os << "1.." << results.size() << "\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    os << (r.passed() ? "ok " : "not ok ") << (i + 1) << " - " << r.name << " # trials=" << r.trials
       << " tolerance=" << r.tolerance << " worst_margin=" << r.worst_margin << "\n";
  }
  return os.str();
}

} // namespace entroscope
