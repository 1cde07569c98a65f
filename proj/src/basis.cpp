#include "entroscope/basis.hpp"

#include "entroscope/error.hpp"

#include <algorithm>
#include <bit>

namespace entroscope {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::string sector_tag(int n_sites, int n_up) {
  return "N" + std::to_string(n_sites) + "_nup" + std::to_string(n_up);
}

SpinBasis enumerate_sector(int n_sites, int n_up, int site_cap) {
  if (n_sites < 2) throw DomainError("enumerate_sector: n_sites must be at least 2");
  if (n_sites > site_cap || n_sites > 62) {
    throw DomainError("enumerate_sector: n_sites=" + std::to_string(n_sites) +
                      " exceeds the site cap of " + std::to_string(site_cap));
  }
  if (n_up < 0 || n_up > n_sites) {
    throw DomainError("enumerate_sector: n_up=" + std::to_string(n_up) +
                      " outside [0, " + std::to_string(n_sites) + "]");
  }

  std::vector<Mask> states;
  states.reserve(binomial(n_sites, n_up));
  if (n_up == 0) {
    states.push_back(0);
  } else {
    // Gosper's hack walks same-popcount masks in increasing order.
    const Mask limit = Mask{1} << n_sites;
    Mask m = (Mask{1} << n_up) - 1;
    while (m < limit) {
      states.push_back(m);
      const Mask lowest = m & (~m + 1);
      const Mask ripple = m + lowest;
      m = (((ripple ^ m) >> 2) / lowest) | ripple;
    }
  }
  return SpinBasis(n_sites, n_up, std::move(states));
}

std::size_t SpinBasis::index_of(Mask mask) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), mask);
  if (it == states_.end() || *it != mask) {
    throw DomainError("index_of: mask " + std::to_string(mask) + " is not in sector " + tag());
  }
  return static_cast<std::size_t>(it - states_.begin());
}

std::string SpinBasis::tag() const { return sector_tag(n_sites_, n_up_); }

} // namespace entroscope
