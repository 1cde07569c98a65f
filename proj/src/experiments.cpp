#include "entroscope/experiments.hpp"

#include "entroscope/error.hpp"
#include "entroscope/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace entroscope {

EigenketScan run_eigenket_scan(const SpinBasis& basis, const Spectrum& spec,
                               const BipartitionSpec& part, const DosTable& dos,
                               double degeneracy_tol) {
  const std::vector<std::size_t> sizes = multiplet_size_per_index(spec.energies(), degeneracy_tol);
  EigenketScan scan;
  scan.dos = dos;
  scan.records.resize(spec.dim());
  parallel_for(spec.dim(), [&](std::size_t n) {
    scan.records[n] = {n, spec.eigenvalues(static_cast<Eigen::Index>(n)),
                       von_neumann(eigenket_rdm(basis, spec, n, part)), sizes[n]};
  });
  return scan;
}

ShellTable run_shell_average(const SpinBasis& basis, const Spectrum& spec,
                             const BipartitionSpec& part, const DosTable& dos,
                             std::size_t min_count) {
  if (dos.total_count() != spec.dim()) {
    throw DomainError("run_shell_average: DOS table does not cover the spectrum");
  }
  ShellTable table;
  table.dos = dos;
  table.sector_dim = spec.dim();
  table.min_count = min_count;

  const auto da = static_cast<Eigen::Index>(part.dim_a());
  const Eigen::MatrixXd h_sub = full_space_hamiltonian(part.l1, spec.key.delta2);
  for (std::size_t k = 0; k < dos.shells.size(); ++k) {
    const EnergyShell& shell = dos.shells[k];
    if (shell.count == 0 || shell.count < min_count) continue;

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(da, da);
    std::vector<double> entropies(shell.count);
    const std::size_t window = rdm_window(part, shell.count);
    std::vector<Eigen::MatrixXcd> slots(window);
    for (std::size_t start = 0; start < shell.count; start += window) {
      const std::size_t len = std::min(window, shell.count - start);
      parallel_for(len, [&](std::size_t j) {
        const DensityMatrix rdm = eigenket_rdm(basis, spec, shell.first + start + j, part);
        entropies[start + j] = von_neumann(rdm).nats;
        slots[j] = rdm.matrix();
      });
      for (std::size_t j = 0; j < len; ++j) sum += slots[j];
    }
    const auto d = static_cast<double>(shell.count);
    double mean = 0.0;
    for (const double s : entropies) mean += s;
    mean /= d;
    double var = 0.0;
    for (const double s : entropies) var += (s - mean) * (s - mean);
    var /= d;

    ShellRow row;
    row.shell = k;
    row.lower = shell.lower;
    row.upper = shell.upper;
    row.midpoint = shell.midpoint();
    row.d_e = shell.count;
    row.ln_dos = *dos.ln_dos(k);
    row.mean_svn = mean;
    row.std_svn = std::sqrt(var);
    const DensityMatrix avg = DensityMatrix::trusted(sum / d, SpaceTag::full(part.l1));
    row.svn_avg_rdm = von_neumann(avg).nats;
    const ThermalFit thermal = fit_thermal_beta(avg.matrix(), h_sub);
    row.beta_fit = thermal.beta;
    row.thermal_distance = thermal.distance;
    table.rows.push_back(row);
  }
  return table;
}

Eigen::MatrixXd full_space_hamiltonian(int n_sites, double delta2) {
  if (n_sites < 1) throw DomainError("full_space_hamiltonian: need at least one site");
  const auto dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  if (n_sites == 1) return h;
  for (int n_up = 0; n_up <= n_sites; ++n_up) {
    const SpinBasis basis = enumerate_sector(n_sites, n_up);
    const SymmetricOperator op = build_hamiltonian(basis, {n_sites, delta2});
    for (const Triplet& t : op.entries()) {
      h(static_cast<Eigen::Index>(basis.state(t.row)), static_cast<Eigen::Index>(basis.state(t.col))) = t.value;
    }
  }
  return h;
}

ThermalFit fit_thermal_beta(const Eigen::MatrixXcd& rho, const Eigen::MatrixXd& h, double beta_max) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw DomainError("fit_thermal_beta: state and Hamiltonian dimensions differ");
  }
  if (!(beta_max > 0.0)) throw DomainError("fit_thermal_beta: beta_max must be positive");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("fit_thermal_beta: no convergence");
  const Eigen::VectorXd& e = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  // In the eigenbasis of h the Gibbs state is diagonal, so the off-diagonal
  // part of rho contributes a constant to the distance.
  const Eigen::MatrixXcd rotated = v.transpose() * rho * v;
  const Eigen::VectorXd diag = rotated.diagonal().real();
  double off_diagonal = 0.0;
  for (Eigen::Index c = 0; c < rotated.cols(); ++c)
    for (Eigen::Index r = 0; r < rotated.rows(); ++r)
      if (r != c) off_diagonal += std::norm(rotated(r, c));
  const std::vector<double> levels(e.data(), e.data() + e.size());

  auto distance = [&](double beta) {
    const std::vector<double> p = gibbs_weights(levels, beta);
    double sum = off_diagonal;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = diag(static_cast<Eigen::Index>(i)) - p[i];
      sum += d * d;
    }
    return std::sqrt(sum);
  };

  constexpr int kGrid = 400;
  const double step = 2.0 * beta_max / kGrid;
  int best = 0;
  double best_d = distance(-beta_max);
  for (int i = 1; i <= kGrid; ++i) {
    const double d = distance(-beta_max + step * i);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  double lo = -beta_max + step * std::max(best - 1, 0);
  double hi = -beta_max + step * std::min(best + 1, kGrid);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double fa = distance(a);
  double fb = distance(b);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = distance(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = distance(b);
    }
  }
  ThermalFit fit{-beta_max + step * best, best_d};
  const double mid = 0.5 * (lo + hi);
  if (const double d = distance(mid); d < fit.distance) fit = {mid, d};
  return fit;
}

std::string_view to_string(SpectrumSide side) {
  return side == SpectrumSide::Left ? "left" : "right";
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("least_squares: need at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares: all x values coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

FitResult fit_entropy_vs_lndos(const ShellTable& table, SpectrumSide side) {
  const std::size_t peak = table.peak_shell();
  FitResult out;
  out.side = side;
  const double ln_d = std::log(static_cast<double>(table.sector_dim));
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& row : table.rows) {
    const bool on_side = side == SpectrumSide::Left ? row.shell <= peak : row.shell >= peak;
    if (!on_side) continue;
    x.push_back(row.ln_dos);
    y.push_back(row.mean_svn);
    out.shells.push_back({row.shell, row.ln_dos, row.mean_svn,
                          std::log(static_cast<double>(row.d_e)) / ln_d});
  }
  if (out.shells.size() < 3) {
    throw DomainError("fit_entropy_vs_lndos: only " + std::to_string(out.shells.size()) +
                      " rows on the " + std::string(to_string(side)) + " side, need 3");
  }
  const LineFit fit = least_squares(x, y);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  double sum = 0.0;
  for (const auto& g : out.shells) sum += g.gamma_predicted;
  out.gamma_predicted_mean = sum / static_cast<double>(out.shells.size());
  return out;
}

std::vector<VolumeLawRow> run_volume_law(const SpinBasis& basis, const Spectrum& spec,
                                         const DosTable& dos, std::span<const int> l1_values) {
  const EnergyShell& shell = dos.shells[dos.peak_shell()];
  if (shell.count == 0) throw DomainError("run_volume_law: mid-spectrum shell is empty");
  std::vector<VolumeLawRow> rows;
  for (const int l1 : l1_values) {
    const BipartitionSpec part = BipartitionSpec::make(basis.n_sites(), l1);
    std::vector<double> entropies(shell.count);
    parallel_for(shell.count, [&](std::size_t j) {
      entropies[j] = von_neumann(eigenket_rdm(basis, spec, shell.first + j, part)).nats;
    });
    double sum = 0.0;
    for (const double s : entropies) sum += s;
    rows.push_back({l1, sum / static_cast<double>(shell.count), shell.lower, shell.upper, shell.count});
  }
  return rows;
}

double DegeneracyCensus::degenerate_fraction() const {
  if (n_levels == 0) return 0.0;
  std::size_t in_multiplets = 0;
  for (const auto& [size, count] : histogram) {
    if (size >= 2) in_multiplets += size * count;
  }
  return static_cast<double>(in_multiplets) / static_cast<double>(n_levels);
}

DegeneracyCensus degeneracy_census(std::span<const double> sorted_energies, double tol) {
  DegeneracyCensus census;
  census.n_levels = sorted_energies.size();
  for (const auto& m : find_multiplets(sorted_energies, tol)) ++census.histogram[m.size];
  return census;
}

DegeneracyCensus full_space_census(int n_sites, double delta2, double tol) {
  std::vector<double> energies;
  energies.reserve(std::size_t{1} << n_sites);
  for (int n_up = 0; n_up <= n_sites; ++n_up) {
    const SpinBasis basis = enumerate_sector(n_sites, n_up);
    const SymmetricOperator h = build_hamiltonian(basis, {n_sites, delta2});
    const Eigen::VectorXd w = eigenvalues_only(h);
    energies.insert(energies.end(), w.data(), w.data() + w.size());
  }
  std::sort(energies.begin(), energies.end());
  return degeneracy_census(energies, tol);
}

} // namespace entroscope
