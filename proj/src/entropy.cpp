#include "entroscope/entropy.hpp"

#include "entroscope/error.hpp"

#include <algorithm>
#include <cmath>

namespace entroscope {

namespace {

double entropy_of_weights(std::span<const double> p) {
  double s = 0.0;
  for (const double x : p) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

} // namespace

EntropyValue shannon(std::span<const double> p) {
  if (p.empty()) throw DomainError("shannon: empty distribution");
  double total = 0.0;
  for (const double x : p) {
    if (x < -1e-12) throw DomainError("shannon: negative probability " + std::to_string(x));
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("shannon: probabilities sum to " + std::to_string(total));
  }
  return {entropy_of_weights(p)};
}

EntropyValue von_neumann(const DensityMatrix& rho) {
  Eigen::VectorXd w = rho.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < -kClipTol) {
      throw NumericalError("von_neumann: eigenvalue " + std::to_string(w(i)) +
                           " is below the clipping tolerance");
    }
    w(i) = std::max(w(i), 0.0);
  }
  return {entropy_of_weights({w.data(), static_cast<std::size_t>(w.size())})};
}

EntropyValue q_boltzmann(std::size_t d) {
  if (d == 0) throw DomainError("q_boltzmann: d must be positive");
  return {std::log(static_cast<double>(d))};
}

CanonicalThermo q_gibbs(std::span<const double> energies, double beta) {
  const std::vector<double> p = gibbs_weights(energies, beta);
  double shift = -beta * energies.front();
  for (const double e : energies) shift = std::max(shift, -beta * e);
  double z = 0.0;
  double u = 0.0;
  for (std::size_t n = 0; n < energies.size(); ++n) {
    z += std::exp(-beta * energies[n] - shift);
    u += p[n] * energies[n];
  }
  CanonicalThermo out;
  out.entropy = {entropy_of_weights(p)};
  out.mean_energy = u;
  out.ln_partition = shift + std::log(z);
  return out;
}

SubadditivityReport check_subadditivity(const DensityMatrix& rho_full, const BipartitionSpec& part) {
  SubadditivityReport r;
  r.s_ab = von_neumann(rho_full);
  r.s_a = von_neumann(partial_trace(rho_full, part));
  r.s_b = von_neumann(complement_trace(rho_full, part));
  r.slack = r.s_a.nats + r.s_b.nats - r.s_ab.nats;
  return r;
}

} // namespace entroscope
