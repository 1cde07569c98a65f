#include "entroscope/spectral.hpp"

#include "entroscope/checksum.hpp"
#include "entroscope/error.hpp"

#include <lapacke.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace entroscope {

namespace {

static_assert(std::endian::native == std::endian::little,
              "spectrum files are written with native little-endian doubles");

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&pivot);
    if (vectors(pivot, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

std::string key_description(const SpectrumKey& key) {
  return "N=" + std::to_string(key.n_sites) + " n_up=" + std::to_string(key.n_up) +
         " delta2=" + format_coupling(key.delta2);
}

} // namespace

Spectrum diagonalize(const SymmetricOperator& op) {
  Eigen::MatrixXd a = op.dense();
  const auto n = static_cast<lapack_int>(op.dim());
  Eigen::VectorXd w(n);
  if (n > 0) {
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    if (info != 0) {
      throw NumericalError("diagonalize: dsyevd failed with info=" + std::to_string(info) +
                           " (dim " + std::to_string(op.dim()) + ", basis " + op.basis_tag() + ")");
    }
  }
  fix_signs(a);
  Spectrum spec;
  spec.basis_tag = op.basis_tag();
  spec.eigenvalues = std::move(w);
  spec.eigenvectors = std::move(a);
  return spec;
}

Eigen::VectorXd eigenvalues_only(const SymmetricOperator& op) {
  Eigen::MatrixXd a = op.dense();
  const auto n = static_cast<lapack_int>(op.dim());
  Eigen::VectorXd w(n);
  if (n > 0) {
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
    if (info != 0) {
      throw NumericalError("eigenvalues_only: dsyevd failed with info=" + std::to_string(info) +
                           " (dim " + std::to_string(op.dim()) + ", basis " + op.basis_tag() + ")");
    }
  }
  return w;
}

Spectrum solve_sector(const SpinBasis& basis, const ModelParams& params) {
  const SymmetricOperator h = build_hamiltonian(basis, params);
  Spectrum spec;
  try {
    spec = diagonalize(h);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " for delta2=" + format_coupling(params.delta2));
  }
  spec.key = {params.n_sites, basis.n_up(), params.delta2};
  return spec;
}

SpectrumDiagnostics check_spectrum(const SymmetricOperator& op, const Spectrum& spec,
                                   std::size_t sample_pairs) {
  SpectrumDiagnostics out;
  const std::size_t dim = spec.dim();
  if (dim == 0) return out;
  const double scale = op.frobenius_norm() / std::sqrt(static_cast<double>(dim));
  for (std::size_t n = 0; n < dim; ++n) {
    const auto col = static_cast<Eigen::Index>(n);
    const Eigen::VectorXd v = spec.eigenvectors.col(col);
    const double r = (op.apply(v) - spec.eigenvalues(col) * v).norm();
    out.scaled_residual = std::max(out.scaled_residual, scale > 0.0 ? r / scale : r);
  }

  auto overlap_error = [&](std::size_t m, std::size_t n) {
    const double dot = spec.eigenvectors.col(static_cast<Eigen::Index>(m))
                           .dot(spec.eigenvectors.col(static_cast<Eigen::Index>(n)));
    return std::abs(dot - (m == n ? 1.0 : 0.0));
  };
  if (dim * dim <= sample_pairs) {
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t n = 0; n < dim; ++n)
        out.orthonormality_error = std::max(out.orthonormality_error, overlap_error(m, n));
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    for (std::size_t s = 0; s < sample_pairs; ++s) {
      const std::size_t m = pick(rng);
      const std::size_t n = (s % 4 == 0) ? m : pick(rng);
      out.orthonormality_error = std::max(out.orthonormality_error, overlap_error(m, n));
    }
  }
  return out;
}

std::vector<Multiplet> find_multiplets(std::span<const double> sorted_energies, double tol) {
  std::vector<Multiplet> out;
  if (sorted_energies.empty()) return out;
  out.push_back({0, 1});
  for (std::size_t k = 1; k < sorted_energies.size(); ++k) {
    const double prev = sorted_energies[k - 1];
    if (sorted_energies[k] - prev < tol * std::max(1.0, std::abs(prev))) {
      ++out.back().size;
    } else {
      out.push_back({k, 1});
    }
  }
  return out;
}

std::vector<std::size_t> multiplet_size_per_index(std::span<const double> sorted_energies,
                                                  double tol) {
  std::vector<std::size_t> out(sorted_energies.size(), 1);
  for (const auto& m : find_multiplets(sorted_energies, tol)) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(m.first), m.size, m.size);
  }
  return out;
}

std::size_t DosTable::total_count() const {
  std::size_t sum = 0;
  for (const auto& s : shells) sum += s.count;
  return sum;
}

std::optional<double> DosTable::ln_dos(std::size_t shell) const {
  if (shells[shell].count == 0) return std::nullopt;
  return std::log(dos(shell));
}

std::size_t DosTable::peak_shell() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < shells.size(); ++k) {
    if (shells[k].count > shells[best].count) best = k;
  }
  return best;
}

DosTable partition_shells(std::span<const double> sorted_energies, std::size_t n_bins) {
  if (n_bins == 0) throw DomainError("partition_shells: n_bins must be positive");
  if (sorted_energies.empty()) throw DomainError("partition_shells: empty spectrum");

  const double e_min = sorted_energies.front();
  const double e_max = sorted_energies.back();
  const auto bins = static_cast<double>(n_bins);
  double span = e_max - e_min;
  if (!(span > 0.0)) span = 1.0;
  const double eps = span / bins * 1e-9;
  const double lower = e_min - eps;
  const double width = (std::max(e_max, e_min + span) - lower) / bins;

  DosTable table;
  table.width = width;
  table.oversubscribed = n_bins > sorted_energies.size();
  table.shells.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    table.shells[k].lower = lower + static_cast<double>(k) * width;
    table.shells[k].upper = (k + 1 == n_bins) ? std::max(lower + bins * width, e_max)
                                              : lower + static_cast<double>(k + 1) * width;
  }

  // Membership is decided against the stored bounds, so (lower, upper] holds
  // exactly even where the bin arithmetic rounds.
  std::size_t k = 0;
  for (std::size_t n = 0; n < sorted_energies.size(); ++n) {
    const double e = sorted_energies[n];
    while (k + 1 < n_bins && e > table.shells[k].upper) ++k;
    auto& shell = table.shells[k];
    if (shell.count == 0) shell.first = n;
    ++shell.count;
  }
  // Empty shells still get a well-defined (empty) index range.
  std::size_t next = 0;
  for (auto& shell : table.shells) {
    if (shell.count == 0) shell.first = next;
    next = shell.first + shell.count;
  }
  return table;
}

std::string format_coupling(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const SpectrumKey& key) {
  return dir / ("N" + std::to_string(key.n_sites) + "_nup" + std::to_string(key.n_up) + "_d2" +
                format_coupling(key.delta2) + ".spec");
}

namespace {

class HashingWriter {
public:
  explicit HashingWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("save_spectrum: cannot open " + path.string());
  }
  void write(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const std::byte*>(data);
    hash_.update({bytes, size});
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  }
  void finish(const std::filesystem::path& path) {
    const std::uint64_t digest = hash_.digest();
    out_.write(reinterpret_cast<const char*>(&digest), sizeof digest);
    out_.flush();
    if (!out_) throw IoError("save_spectrum: write failed for " + path.string());
  }

private:
  std::ofstream out_;
  Fnv1a64 hash_;
};

class HashingReader {
public:
  explicit HashingReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("load_spectrum: cannot open " + path.string());
  }
  void read(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size) {
      throw ChecksumError("load_spectrum: file is truncated");
    }
    hash_.update({static_cast<const std::byte*>(data), size});
  }
  std::uint64_t digest() const { return hash_.digest(); }
  std::uint64_t read_trailer() {
    std::uint64_t stored = 0;
    in_.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (in_.gcount() != sizeof stored) throw ChecksumError("load_spectrum: file is truncated");
    return stored;
  }

private:
  std::ifstream in_;
  Fnv1a64 hash_;
};

} // namespace

void save_spectrum(const Spectrum& spec, const std::filesystem::path& path) {
  const nlohmann::json header = {
      {"n_sites", spec.key.n_sites}, {"n_up", spec.key.n_up},
      {"delta2", spec.key.delta2},   {"dim", spec.dim()},
      {"basis_tag", spec.basis_tag}, {"checksum", "fnv1a64"},
  };
  const std::string text = header.dump();
  const auto length = static_cast<std::uint32_t>(text.size());

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  HashingWriter out(path);
  out.write(kSpectrumMagic, sizeof kSpectrumMagic);
  out.write(&kSpectrumVersion, 1);
  out.write(&length, sizeof length);
  out.write(text.data(), text.size());
  out.write(spec.eigenvalues.data(), spec.dim() * sizeof(double));
  out.write(spec.eigenvectors.data(), spec.dim() * spec.dim() * sizeof(double));
  out.finish(path);
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  HashingReader in(path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (std::memcmp(magic, kSpectrumMagic, sizeof magic) != 0) {
    throw FormatError("load_spectrum: " + path.string() + " is not a spectrum file");
  }
  unsigned char version = 0;
  in.read(&version, 1);
  if (version != kSpectrumVersion) {
    throw FormatError("load_spectrum: unsupported version " + std::to_string(version));
  }
  std::uint32_t length = 0;
  in.read(&length, sizeof length);
  if (length > (1U << 20)) throw FormatError("load_spectrum: implausible header length");
  std::string text(length, '\0');
  in.read(text.data(), length);

  Spectrum spec;
  std::size_t dim = 0;
  try {
    const auto header = nlohmann::json::parse(text);
    if (header.at("checksum").get<std::string>() != "fnv1a64") {
      throw FormatError("load_spectrum: unknown checksum algorithm");
    }
    spec.key.n_sites = header.at("n_sites").get<int>();
    spec.key.n_up = header.at("n_up").get<int>();
    spec.key.delta2 = header.at("delta2").get<double>();
    spec.basis_tag = header.at("basis_tag").get<std::string>();
    dim = header.at("dim").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("load_spectrum: bad header: ") + e.what());
  }

  const auto file_size = std::filesystem::file_size(path);
  const std::uintmax_t expected =
      sizeof kSpectrumMagic + 1 + sizeof length + length + 8ULL * dim * (dim + 1) + 8;
  if (file_size < expected) throw ChecksumError("load_spectrum: file is truncated");
  if (file_size > expected) throw FormatError("load_spectrum: trailing bytes after checksum");

  const auto n = static_cast<Eigen::Index>(dim);
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  in.read(spec.eigenvalues.data(), dim * sizeof(double));
  in.read(spec.eigenvectors.data(), dim * dim * sizeof(double));
  const std::uint64_t computed = in.digest();
  if (in.read_trailer() != computed) {
    throw ChecksumError("load_spectrum: checksum mismatch in " + path.string());
  }
  return spec;
}

Spectrum load_spectrum(const std::filesystem::path& path, const SpectrumKey& expected) {
  Spectrum spec = load_spectrum(path);
  // Bitwise comparison of delta2: the file stores it at full precision.
  if (!(spec.key == expected) ||
      spec.basis_tag != sector_tag(expected.n_sites, expected.n_up)) {
    throw BasisMismatchError("load_spectrum: file holds " + key_description(spec.key) +
                             ", expected " + key_description(expected));
  }
  return spec;
}

} // namespace entroscope
