#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace entroscope {

/// Bit-encoded spin configuration. Site k of an N-site chain (k = 1..N)
/// lives at bit N-k, so site 1 is the most significant bit; a set bit is
/// an up spin.
using Mask = std::uint64_t;

inline constexpr int kDefaultSiteCap = 24;

/// Bit position of site `site` (1-based) in an `n_sites` chain.
constexpr int site_bit(int n_sites, int site) { return n_sites - site; }

/// The fixed-magnetization sector of an N-site spin-1/2 chain: every mask
/// with exactly `n_up` set bits, in ascending order.
///
/// Immutable after construction.
class SpinBasis {
public:
  int n_sites() const { return n_sites_; }
  int n_up() const { return n_up_; }
  std::size_t dim() const { return states_.size(); }
  std::span<const Mask> states() const { return states_; }
  Mask state(std::size_t i) const { return states_[i]; }

  /// Position of `mask` in states(). Throws DomainError if absent.
  std::size_t index_of(Mask mask) const;

  /// Identifier used to tie operators and spectra to this sector.
  std::string tag() const;

private:
  friend SpinBasis enumerate_sector(int n_sites, int n_up, int site_cap);
  SpinBasis(int n_sites, int n_up, std::vector<Mask> states)
      : n_sites_(n_sites), n_up_(n_up), states_(std::move(states)) {}

  int n_sites_;
  int n_up_;
  std::vector<Mask> states_;
};

/// Enumerates every n_sites-bit mask with popcount n_up in increasing order.
SpinBasis enumerate_sector(int n_sites, int n_up, int site_cap = kDefaultSiteCap);

/// binomial(n, k) in exact integer arithmetic (0 when k is out of range).
std::uint64_t binomial(int n, int k);

std::string sector_tag(int n_sites, int n_up);

} // namespace entroscope
