#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bredonk/cyclotomic.hpp"
#include "bredonk/errors.hpp"
#include "bredonk/groups.hpp"

namespace bredonk {

// Irreducible (possibly gamma-twisted) characters of a group, evaluated on
// every element. `elements` maps local indices to the ambient group.
struct CharacterTable {
  std::vector<int> elements;
  std::vector<std::vector<Cyclotomic>> values;  // [irreducible][local element]
  std::vector<int> degrees;
  std::vector<std::vector<int>> classes;  // local indices
  std::vector<bool> regular;              // gamma-regular classes
  Cocycle cocycle;                        // local

  std::size_t size() const { return degrees.size(); }
  int group_order() const { return static_cast<int>(elements.size()); }

  int local(int ambient) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), ambient);
    if (it == elements.end() || *it != ambient) return -1;
    return static_cast<int>(it - elements.begin());
  }
  const Cyclotomic& at(std::size_t chi, int ambient) const {
    int l = local(ambient);
    if (l < 0) throw std::out_of_range("element outside the table's group");
    return values[chi][l];
  }

  std::size_t regular_class_count() const {
    return static_cast<std::size_t>(std::count(regular.begin(), regular.end(), true));
  }
};

// (1/|G|) sum_g a(g) conj(b(g)).
inline Cyclotomic inner_product(const std::vector<Cyclotomic>& a, const std::vector<Cyclotomic>& b) {
  Cyclotomic s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i].conj();
  return s.scaled(Rational(1, static_cast<long>(a.size())));
}

namespace detail {

using i64 = std::int64_t;

inline i64 mod_pow(i64 b, i64 e, i64 p) {
  i64 r = 1;
  b %= p;
  if (b < 0) b += p;
  while (e > 0) {
    if (e & 1) r = static_cast<i64>((__int128)r * b % p);
    b = static_cast<i64>((__int128)b * b % p);
    e >>= 1;
  }
  return r;
}
inline i64 mod_inv(i64 a, i64 p) { return mod_pow(a, p - 2, p); }
inline i64 md(i64 a, i64 p) { return ((a % p) + p) % p; }

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> f;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) f.push_back(n);
  return f;
}

inline i64 primitive_root(i64 p) {
  auto f = prime_factors(p - 1);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : f)
      if (mod_pow(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;
}

using ModMat = std::vector<std::vector<i64>>;

// Row-reduce the rows of m in place; returns pivot columns.
inline std::vector<std::size_t> mod_rref(ModMat& m, i64 p) {
  std::vector<std::size_t> piv;
  std::size_t r = 0, cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t s = r;
    while (s < m.size() && m[s][c] == 0) ++s;
    if (s == m.size()) continue;
    std::swap(m[r], m[s]);
    i64 inv = mod_inv(m[r][c], p);
    for (auto& v : m[r]) v = static_cast<i64>((__int128)v * inv % p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      i64 f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = md(m[i][j] - f * m[r][j] % p, p);
    }
    piv.push_back(c);
    ++r;
  }
  m.resize(r);
  return piv;
}

// Kernel of a square matrix, rows are basis vectors.
inline ModMat mod_nullspace(ModMat a, i64 p) {
  std::size_t n = a.empty() ? 0 : a[0].size();
  auto piv = mod_rref(a, p);
  std::vector<bool> is_p(n, false);
  for (auto c : piv) is_p[c] = true;
  ModMat basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_p[f]) continue;
    std::vector<i64> v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = md(-a[i][f], p);
    basis.push_back(v);
  }
  return basis;
}

// Characteristic polynomial (Faddeev-LeVerrier), coefficients low to high.
inline std::vector<i64> mod_charpoly(const ModMat& b, i64 p) {
  std::size_t d = b.size();
  std::vector<i64> c(d + 1, 0);
  c[d] = 1;
  ModMat m(d, std::vector<i64>(d, 0));
  for (std::size_t k = 1; k <= d; ++k) {
    ModMat nm(d, std::vector<i64>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        __int128 s = 0;
        for (std::size_t l = 0; l < d; ++l) s += (__int128)b[i][l] * m[l][j];
        nm[i][j] = static_cast<i64>(s % p);
      }
    for (std::size_t i = 0; i < d; ++i) nm[i][i] = md(nm[i][i] + c[d - k + 1], p);
    __int128 tr = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) tr += (__int128)b[i][l] * nm[l][i];
    i64 t = static_cast<i64>(tr % p);
    c[d - k] = md(-(t * mod_inv(static_cast<i64>(k), p) % p), p);
    m = std::move(nm);
  }
  return c;
}

}  // namespace detail

// Ordinary character table: common eigenvectors of the class-multiplication
// matrices over F_p, p = 1 mod exponent, lifted to Q(zeta_e) through
// eigenvalue multiplicities.
inline CharacterTable character_table(const GroupData& g, std::size_t max_order = 64) {
  using namespace detail;
  if (static_cast<std::size_t>(g.order()) > max_order)
    throw GroupClosureError("group of order " + std::to_string(g.order()) +
                            " too large for the exact character method (cap " +
                            std::to_string(max_order) + ")");
  const int n = g.order();
  const auto& cls = g.classes();
  const std::size_t r = cls.size();
  const int e = g.exponent();

  i64 p = 2 * n + 1;
  while (!(is_prime(p) && (p - 1) % e == 0)) ++p;
  const i64 Z = mod_pow(primitive_root(p), (p - 1) / e, p);

  // a[j][i][k] = #{x in C_j : x^-1 g_k in C_i}
  std::vector<ModMat> A(r, ModMat(r, std::vector<i64>(r, 0)));
  for (std::size_t k = 0; k < r; ++k) {
    int gk = cls[k][0];
    for (std::size_t j = 0; j < r; ++j)
      for (int x : cls[j]) {
        int y = g.mul(g.inv(x), gk);
        A[j][g.class_of(y)][k] += 1;
      }
  }

  std::vector<ModMat> spaces;  // each: rows spanning a common invariant subspace
  {
    ModMat id(r, std::vector<i64>(r, 0));
    for (std::size_t i = 0; i < r; ++i) id[i][i] = 1;
    spaces.push_back(id);
  }
  for (std::size_t j = 1; j < r; ++j) {
    std::vector<ModMat> next;
    for (auto& V : spaces) {
      if (V.size() == 1) {
        next.push_back(V);
        continue;
      }
      auto piv = mod_rref(V, p);
      const std::size_t d = V.size();
      ModMat Bm(d, std::vector<i64>(d, 0));  // A_j restricted, in V coordinates
      for (std::size_t a = 0; a < d; ++a) {
        std::vector<i64> img(r, 0);
        for (std::size_t i = 0; i < r; ++i) {
          __int128 s = 0;
          for (std::size_t k = 0; k < r; ++k) s += (__int128)A[j][i][k] * V[a][k];
          img[i] = static_cast<i64>(s % p);
        }
        for (std::size_t b = 0; b < d; ++b) Bm[b][a] = img[piv[b]];
      }
      auto cp = mod_charpoly(Bm, p);
      std::size_t found = 0;
      for (i64 lam = 0; lam < p && found < d; ++lam) {
        i64 val = 0;
        for (std::size_t k = cp.size(); k-- > 0;) val = md(val * lam % p + cp[k], p);
        if (val != 0) continue;
        ModMat shifted = Bm;
        for (std::size_t i = 0; i < d; ++i) shifted[i][i] = md(shifted[i][i] - lam, p);
        auto ker = mod_nullspace(shifted, p);
        ModMat sub;
        for (const auto& cvec : ker) {
          std::vector<i64> v(r, 0);
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t i = 0; i < r; ++i) v[i] = md(v[i] + cvec[a] * V[a][i] % p, p);
          sub.push_back(v);
        }
        found += sub.size();
        next.push_back(sub);
      }
      if (found != d) throw InvariantViolation("class algebra did not split over F_p");
    }
    spaces = std::move(next);
  }
  if (spaces.size() != r) throw InvariantViolation("character table splitting incomplete");

  std::vector<int> inv_class(r);
  for (std::size_t k = 0; k < r; ++k) inv_class[k] = g.class_of(g.inv(cls[k][0]));

  CharacterTable t;
  t.elements = g.whole();
  t.classes = cls;
  t.regular.assign(r, true);
  t.cocycle = Cocycle::trivial(n);
  for (auto& V : spaces) {
    std::vector<i64> w = V[0];
    i64 s = mod_inv(w[0], p);
    for (auto& x : w) x = static_cast<i64>((__int128)x * s % p);
    i64 sum = 0;
    for (std::size_t k = 0; k < r; ++k)
      sum = md(sum + w[k] * w[inv_class[k]] % p * mod_inv(static_cast<i64>(cls[k].size()), p), p);
    i64 d2 = static_cast<i64>(n) % p * mod_inv(sum, p) % p;
    int deg = 0;
    for (int d = 1; d * d <= n; ++d)
      if (d * d == d2) deg = d;
    if (deg == 0) throw InvariantViolation("degree recovery failed");
    std::vector<i64> theta(r);
    for (std::size_t k = 0; k < r; ++k)
      theta[k] = static_cast<i64>(deg) * w[k] % p * mod_inv(static_cast<i64>(cls[k].size()), p) % p;

    std::vector<Cyclotomic> per_class(r);
    for (std::size_t k = 0; k < r; ++k) {
      int x = cls[k][0];
      int o = g.element_order(x);
      i64 z = mod_pow(Z, e / o, p);
      Cyclotomic val(e);
      std::vector<Rational> coeff(e, Rational(0));
      for (int l = 0; l < o; ++l) {
        i64 m = 0;
        for (int jj = 0; jj < o; ++jj) {
          i64 th = theta[g.class_of(g.power(x, jj))];
          m = md(m + th * mod_pow(z, static_cast<i64>(o - (static_cast<i64>(jj) * l) % o) % o, p), p);
        }
        m = m * mod_inv(o, p) % p;
        if (m > deg) throw InvariantViolation("eigenvalue multiplicity out of range");
        if (m) val += Cyclotomic::root(e, static_cast<long>(l) * (e / o)).scaled(Rational(m));
      }
      per_class[k] = val;
    }
    std::vector<Cyclotomic> row(n);
    for (int a = 0; a < n; ++a) row[a] = per_class[g.class_of(a)];
    t.values.push_back(std::move(row));
    t.degrees.push_back(deg);
  }

  // deterministic order: trivial first, then by degree, then by values
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto keyed = [&](std::size_t i) {
    std::vector<Rational> k;
    for (const auto& v : t.values[i]) {
      auto c = v.key(e);
      k.insert(k.end(), c.begin(), c.end());
    }
    return k;
  };
  std::vector<std::vector<Rational>> keys;
  for (std::size_t i = 0; i < t.size(); ++i) keys.push_back(keyed(i));
  auto is_trivial = [&](std::size_t i) {
    if (t.degrees[i] != 1) return false;
    for (const auto& v : t.values[i])
      if (v != Cyclotomic::rational(1)) return false;
    return true;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    bool ta = is_trivial(a), tb = is_trivial(b);
    if (ta != tb) return ta;
    if (t.degrees[a] != t.degrees[b]) return t.degrees[a] < t.degrees[b];
    return keys[a] < keys[b];
  });
  CharacterTable sorted = t;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    sorted.values[i] = t.values[idx[i]];
    sorted.degrees[i] = t.degrees[idx[i]];
  }
  int dsum = 0;
  for (int d : sorted.degrees) dsum += d * d;
  if (dsum != n) throw InvariantViolation("sum of squared degrees differs from |G|");
  return sorted;
}

// g is gamma-regular when gamma(g,h) = gamma(h,g) for all h commuting with g.
inline bool gamma_regular(const GroupData& g, const Cocycle& gamma, int a) {
  for (int h : g.centralizer(a))
    if (gamma.exponent(a, h) != gamma.exponent(h, a)) return false;
  return true;
}

// gamma-twisted table via mu_m x_gamma G: keep the irreducibles on which the
// central generator acts by zeta_m.
inline CharacterTable twisted_character_table(const GroupData& g, const Cocycle& gamma,
                                              std::size_t max_order = 64) {
  if (static_cast<std::size_t>(g.order()) > max_order)
    throw GroupClosureError("group of order " + std::to_string(g.order()) +
                            " too large for the exact character method (cap " +
                            std::to_string(max_order) + ")");
  gamma.validate(g);
  const int n = g.order(), m = gamma.modulus;
  CharacterTable out;
  out.elements = g.whole();
  out.classes = g.classes();
  out.cocycle = gamma;
  for (const auto& c : out.classes) out.regular.push_back(gamma_regular(g, gamma, c[0]));

  if (gamma.is_trivial()) {
    auto t = character_table(g, max_order);
    out.values = std::move(t.values);
    out.degrees = std::move(t.degrees);
  } else {
    GroupData ext = central_extension(g, gamma);
    auto t = character_table(ext, max_order * static_cast<std::size_t>(m));
    const Cyclotomic zeta = Cyclotomic::root(m, 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.values[i][n] != zeta.scaled(Rational(t.degrees[i]))) continue;
      out.values.emplace_back(t.values[i].begin(), t.values[i].begin() + n);
      out.degrees.push_back(t.degrees[i]);
    }
  }
  if (out.size() != out.regular_class_count())
    throw InvariantViolation("twisted irreducible count differs from the gamma-regular class count");
  int dsum = 0;
  for (int d : out.degrees) dsum += d * d;
  if (dsum != n) throw InvariantViolation("twisted degrees do not square-sum to |G|");
  return out;
}

// Table of a subgroup with ambient element labels and the restricted cocycle.
inline CharacterTable subgroup_table(const GroupData& g, const Subgroup& h, const Cocycle& gamma,
                                     std::size_t max_order = 64) {
  if (!g.is_subgroup(h)) throw InvariantViolation("subgroup_table: not a subgroup");
  GroupData local = g.restricted(h);
  auto t = twisted_character_table(local, gamma.restricted(h), max_order);
  t.elements = h;
  return t;
}

// Row orthogonality; returns an empty string when the table is sound.
inline std::string table_defect(const CharacterTable& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      auto ip = inner_product(t.values[i], t.values[j]);
      if (ip != Cyclotomic::rational(i == j ? 1 : 0))
        return "orthogonality fails for (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  long s = 0;
  for (int d : t.degrees) s += static_cast<long>(d) * d;
  if (s != t.group_order()) return "sum of squared degrees differs from |G|";
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.values[i][0] != Cyclotomic::rational(t.degrees[i])) return "value at 1 is not the degree";
  if (t.size() != t.regular_class_count()) return "irreducible count differs from regular class count";
  return "";
}

// Entry (i,j): multiplicity of irreducible i of H in the restriction of
// irreducible j of G. Both tables must carry the same ambient cocycle.
inline IntMatrix restriction_matrix(const CharacterTable& tg, const CharacterTable& th) {
  for (int a : th.elements)
    if (tg.local(a) < 0) throw InvariantViolation("restriction_matrix: H is not a subgroup of G");
  IntMatrix r(th.size(), tg.size());
  for (std::size_t j = 0; j < tg.size(); ++j) {
    std::vector<Cyclotomic> res;
    for (int a : th.elements) res.push_back(tg.at(j, a));
    for (std::size_t i = 0; i < th.size(); ++i) {
      auto q = inner_product(res, th.values[i]).as_rational();
      if (!q || q->get_den() != 1 || *q < 0)
        throw InvariantViolation("restriction multiplicity is not a nonnegative integer");
      r(i, j) = q->get_num();
    }
  }
  return r;
}

// pi -> ^w pi from irreducibles of H to irreducibles of K = wHw^-1, with
//   ^w pi(v) = conj(gamma(w^-1,w)) gamma(w^-1,v) gamma(w^-1 v,w) pi(w^-1 v w).
// gamma is the ambient cocycle. Entry (i,j) = 1 when ^w(pi_j) = pi_i.
inline IntMatrix conjugation_matrix(const GroupData& g, int w, const CharacterTable& th,
                                    const CharacterTable& tk, const Cocycle& gamma) {
  if (g.conjugate(w, th.elements) != tk.elements)
    throw InvariantViolation("conjugation_matrix: stabilizer mismatch (target is not wHw^-1)");
  const int wi = g.inv(w);
  std::vector<Cyclotomic> factor;
  for (int v : tk.elements) {
    Rational ph = gamma.phase(wi, v) + gamma.phase(g.mul(wi, v), w) - gamma.phase(wi, w);
    factor.push_back(Cyclotomic::phase(ph));
  }
  IntMatrix m(tk.size(), th.size());
  for (std::size_t j = 0; j < th.size(); ++j) {
    std::vector<Cyclotomic> img;
    for (std::size_t l = 0; l < tk.elements.size(); ++l) {
      int v = tk.elements[l];
      img.push_back(factor[l] * th.at(j, g.mul(g.mul(wi, v), w)));
    }
    int hit = -1;
    for (std::size_t i = 0; i < tk.size() && hit < 0; ++i) {
      if (tk.degrees[i] != th.degrees[j]) continue;
      bool same = true;
      for (std::size_t l = 0; l < img.size() && same; ++l) same = img[l] == tk.values[i][l];
      if (same) hit = static_cast<int>(i);
    }
    if (hit < 0)
      throw InvariantViolation("conjugated character is not an irreducible gamma-character of wHw^-1");
    m(hit, j) = 1;
  }
  return m;
}

// A one-dimensional map on a subgroup N given by phases (e^{2 pi i q}).
using PhaseCharacter = std::map<int, Rational>;

inline Cyclotomic phase_value(const PhaseCharacter& iota, int v) {
  auto it = iota.find(v);
  return Cyclotomic::phase(it == iota.end() ? Rational(0) : it->second);
}

// iota(u) iota(v) = conj(gamma(u,v)) iota(uv) on N.
inline std::string iota_character_defect(const GroupData& g, const Subgroup& n,
                                         const PhaseCharacter& iota, const Cocycle& gamma) {
  auto ph = [&](int v) {
    auto it = iota.find(v);
    return it == iota.end() ? Rational(0) : it->second;
  };
  for (int u : n)
    for (int v : n)
      if (frac(ph(u) + ph(v) + gamma.phase(u, v) - ph(g.mul(u, v))) != 0)
        return "iota is not a conj(gamma)-character at (" + g.label(u) + "," + g.label(v) + ")";
  return "";
}

// iota(w v w^-1) = iota(v) gamma(wv,w^-1) gamma(w,v) conj(gamma(w,w^-1)) for
// w in `acting`, v in N.
inline std::string iota_conjugation_defect(const GroupData& g, const Subgroup& n,
                                           const PhaseCharacter& iota, const Cocycle& gamma,
                                           const Subgroup& acting) {
  auto ph = [&](int v) {
    auto it = iota.find(v);
    return it == iota.end() ? Rational(0) : it->second;
  };
  for (int w : acting)
    for (int v : n) {
      Rational rhs = ph(v) + gamma.phase(g.mul(w, v), g.inv(w)) + gamma.phase(w, v) -
                     gamma.phase(w, g.inv(w));
      if (frac(ph(g.conj(w, v)) - rhs) != 0)
        return "iota not conjugation-stable under " + g.label(w) + " at " + g.label(v);
    }
  return "";
}

// Irreducibles pi of the table's group with pi(v) = conj(iota(v)) id on N.
inline std::vector<int> lying_over_basis(const GroupData& g, const CharacterTable& t,
                                         const Subgroup& n, const PhaseCharacter& iota,
                                         const Cocycle& gamma) {
  for (int v : n)
    if (t.local(v) < 0) throw InvariantViolation("lying_over_basis: N is not inside G");
  if (!g.is_subgroup(n)) throw InvariantViolation("lying_over_basis: N is not a subgroup");
  if (!g.is_normal(n, t.elements)) throw InvariantViolation("lying_over_basis: N is not normal");
  if (auto d = iota_character_defect(g, n, iota, gamma); !d.empty()) throw InvariantViolation(d);
  if (auto d = iota_conjugation_defect(g, n, iota, gamma, t.elements); !d.empty())
    throw InvariantViolation(d);
  std::vector<int> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool ok = true;
    for (int v : n) {
      if (t.at(i, v) != phase_value(iota, v).conj().scaled(Rational(t.degrees[i]))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace bredonk
