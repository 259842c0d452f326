#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bredonk/exactla.hpp"

namespace bredonk {

struct E2Entry {
  int p;
  int q;
  AbelianGroupInv group;
};

// Nonzero entries of the E^2 page in the window p = 1..n+1, q = -n-1..-n.
// E^2_{p,q} = H^{n-p+1} when q+n is odd, 0 otherwise; periodic in q.
inline std::vector<E2Entry> e2_page(const std::vector<AbelianGroupInv>& h) {
  const int n = static_cast<int>(h.size()) - 1;
  std::vector<E2Entry> out;
  for (int p = 1; p <= n + 1; ++p)
    for (int q = -n - 1; q <= -n; ++q) {
      if (((q + n) % 2 + 2) % 2 == 0) continue;
      const auto& g = h[n - p + 1];
      if (!g.trivial()) out.push_back({p, q, g});
    }
  return out;
}

inline AbelianGroupInv e2_entry(const std::vector<E2Entry>& page, int p, int q) {
  for (const auto& e : page)
    if (e.p == p && e.q == q) return e.group;
  return {};
}

struct KGroups {
  bool exact = false;
  std::optional<AbelianGroupInv> k0, k1;  // set only when exact
  std::size_t rank0 = 0, rank1 = 0;
  std::string caveat;
};

// Sums of ranks over even and odd degrees.
inline std::pair<std::size_t, std::size_t> rational_k(const std::vector<AbelianGroupInv>& h) {
  std::size_t r0 = 0, r1 = 0;
  for (std::size_t j = 0; j < h.size(); ++j) (j % 2 ? r1 : r0) += h[j].rank;
  return {r0, r1};
}

// Exact for n <= 2 (K0 = H0 + H2, K1 = H1); rational only above that.
inline KGroups k_groups(const std::vector<AbelianGroupInv>& h) {
  KGroups k;
  std::tie(k.rank0, k.rank1) = rational_k(h);
  const std::size_t n = h.empty() ? 0 : h.size() - 1;
  if (n <= 2) {
    k.exact = true;
    k.k0 = h.size() > 2 ? h[0] + h[2] : h[0];
    k.k1 = h.size() > 1 ? h[1] : AbelianGroupInv{};
  } else {
    k.caveat = "integral K-groups only up to higher differentials and extensions; ranks are exact";
  }
  return k;
}

struct CrossCheck {
  bool ok = true;
  std::string detail;
};

inline CrossCheck cross_check(const std::vector<AbelianGroupInv>& x_side,
                              const std::vector<AbelianGroupInv>& blowup_side) {
  if (x_side.size() != blowup_side.size()) return {false, "degree ranges differ"};
  for (std::size_t j = 0; j < x_side.size(); ++j)
    if (x_side[j] != blowup_side[j])
      return {false, "degree " + std::to_string(j) + ": X side " + x_side[j].str() + ", blow-up side " +
                         blowup_side[j].str()};
  return {};
}

}  // namespace bredonk
