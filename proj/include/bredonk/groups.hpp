#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bredonk/cyclotomic.hpp"
#include "bredonk/errors.hpp"
#include "bredonk/exactla.hpp"

namespace bredonk {

// Lambda = B Z^n, B given by columns.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(IntMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
      throw SchemaError("lattice basis must be a non-empty square matrix");
    auto inv = inverse(to_rational(basis_));
    if (!inv) throw SchemaError("lattice basis is singular");
    inv_ = *inv;
  }

  std::size_t dim() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  const RatMatrix& inverse_basis() const { return inv_; }

  RatVec coords(const RatVec& x) const { return inv_ * x; }
  RatVec point(const RatVec& c) const { return to_rational(basis_) * c; }

  RatVec shifted(const RatVec& x, const IntVec& lam) const {
    RatVec y(x);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) y[i] += Rational(basis_(i, j) * lam[j]);
    return y;
  }

  bool contains(const RatVec& x) const {
    for (const auto& c : coords(x))
      if (c.get_den() != 1) return false;
    return true;
  }

  // x = reduced + B*lam with lattice coordinates of reduced in [0,1).
  std::pair<RatVec, IntVec> reduce(const RatVec& x) const {
    RatVec c = coords(x);
    IntVec lam(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      lam[i] = Cyclotomic::floor_div(c[i]);
      c[i] -= Rational(lam[i]);
    }
    return {point(c), lam};
  }

  // Fractional lattice coordinates: a hashable key for x mod Lambda.
  RatVec key(const RatVec& x) const {
    RatVec c = coords(x);
    for (auto& v : c) v = frac(v);
    return c;
  }

  // Does the integer matrix A map Lambda onto itself?
  bool preserved_by(const IntMatrix& a) const {
    RatMatrix conj = inv_ * to_rational(a) * to_rational(basis_);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        if (conj(i, j).get_den() != 1) return false;
    Rational d = determinant(conj);
    return d == 1 || d == -1;
  }

  bool operator==(const Lattice& o) const { return basis_ == o.basis_; }

 private:
  IntMatrix basis_;
  RatMatrix inv_;
};

// x -> A x + b on R^n / Lambda.
struct AffineTorusMap {
  IntMatrix linear;
  RatVec translation;

  static AffineTorusMap identity(std::size_t n) {
    return {IntMatrix::identity(n), RatVec(n, Rational(0))};
  }

  RatVec apply(const RatVec& x) const {
    RatVec y = to_rational(linear) * x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
    return y;
  }

  RatVec apply_linear(const RatVec& x) const { return to_rational(linear) * x; }

  // (this o other)(x) = this(other(x))
  AffineTorusMap compose(const AffineTorusMap& other) const {
    return {linear * other.linear, apply(other.translation)};
  }

  AffineTorusMap reduced(const Lattice& lat) const {
    return {linear, lat.reduce(translation).first};
  }

  // Canonical key modulo Lambda.
  std::pair<std::vector<Integer>, RatVec> key(const Lattice& lat) const {
    std::vector<Integer> a;
    for (std::size_t i = 0; i < linear.rows(); ++i)
      for (std::size_t j = 0; j < linear.cols(); ++j) a.push_back(linear(i, j));
    return {a, lat.key(translation)};
  }

  bool equals_mod(const AffineTorusMap& o, const Lattice& lat) const {
    return key(lat) == o.key(lat);
  }
};

// Sorted element indices of an ambient group.
using Subgroup = std::vector<int>;

// Finite group as a multiplication table; element 0 is the identity.
class GroupData {
 public:
  GroupData() = default;

  // Validates closure, associativity, identity and inverses.
  static GroupData from_table(std::vector<std::vector<int>> mult,
                              std::vector<std::string> labels = {}) {
    GroupData g;
    g.n_ = static_cast<int>(mult.size());
    if (g.n_ == 0) throw GroupClosureError("empty group");
    g.mult_.assign(g.n_ * g.n_, 0);
    for (int a = 0; a < g.n_; ++a) {
      if (static_cast<int>(mult[a].size()) != g.n_) throw GroupClosureError("ragged table");
      for (int b = 0; b < g.n_; ++b) {
        int c = mult[a][b];
        if (c < 0 || c >= g.n_) throw GroupClosureError("table not closed");
        g.mult_[a * g.n_ + b] = c;
      }
    }
    g.finish(std::move(labels));
    return g;
  }

  int order() const { return n_; }
  int mul(int a, int b) const { return mult_[a * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int conj(int w, int v) const { return mul(mul(w, v), inv(w)); }  // w v w^-1
  int element_order(int a) const { return elt_order_[a]; }
  int power(int a, long k) const {
    k %= elt_order_[a];
    if (k < 0) k += elt_order_[a];
    int r = 0;
    for (long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  int exponent() const {
    int e = 1;
    for (int o : elt_order_) e = std::lcm(e, o);
    return e;
  }

  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }

  const std::vector<std::vector<int>>& classes() const { return classes_; }
  int class_of(int a) const { return class_of_[a]; }

  const std::vector<int>& generators() const { return gens_; }
  void set_generators(std::vector<int> gens) { gens_ = std::move(gens); }

  bool has_affine() const { return !affine_.empty(); }
  const AffineTorusMap& affine(int a) const { return affine_.at(a); }
  const Lattice& lattice() const { return lattice_; }
  std::size_t dim() const { return lattice_.dim(); }

  Subgroup whole() const {
    Subgroup s(n_);
    std::iota(s.begin(), s.end(), 0);
    return s;
  }

  Subgroup generate(const std::vector<int>& gens) const {
    std::vector<bool> in(n_, false);
    in[0] = true;
    std::deque<int> q{0};
    while (!q.empty()) {
      int a = q.front();
      q.pop_front();
      for (int g : gens) {
        int b = mul(a, g);
        if (!in[b]) {
          in[b] = true;
          q.push_back(b);
        }
      }
    }
    Subgroup s;
    for (int a = 0; a < n_; ++a)
      if (in[a]) s.push_back(a);
    return s;
  }

  bool is_subgroup(const Subgroup& h) const {
    if (h.empty() || h[0] != 0 || !std::is_sorted(h.begin(), h.end())) return false;
    for (int a : h) {
      if (a < 0 || a >= n_) return false;
      for (int b : h)
        if (!std::binary_search(h.begin(), h.end(), mul(a, inv(b)))) return false;
    }
    return true;
  }

  bool is_normal(const Subgroup& n, const Subgroup& in) const {
    for (int w : in)
      for (int v : n)
        if (!std::binary_search(n.begin(), n.end(), conj(w, v))) return false;
    return true;
  }

  Subgroup conjugate(int w, const Subgroup& h) const {
    Subgroup r;
    for (int v : h) r.push_back(conj(w, v));
    std::sort(r.begin(), r.end());
    return r;
  }

  Subgroup centralizer(int a) const {
    Subgroup r;
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == mul(b, a)) r.push_back(b);
    return r;
  }

  // Standalone copy of a subgroup; local index i is h[i].
  GroupData restricted(const Subgroup& h) const {
    std::vector<std::vector<int>> t(h.size(), std::vector<int>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) {
        int c = mul(h[i], h[j]);
        auto it = std::lower_bound(h.begin(), h.end(), c);
        if (it == h.end() || *it != c) throw GroupClosureError("not a subgroup");
        t[i][j] = static_cast<int>(it - h.begin());
      }
    std::vector<std::string> lab;
    for (int a : h) lab.push_back(labels_[a]);
    GroupData g = from_table(std::move(t), std::move(lab));
    g.set_generators(small_generating_set(g));
    return g;
  }

  friend GroupData close_affine_group(const Lattice&, const std::vector<AffineTorusMap>&,
                                      const std::vector<std::string>&, std::size_t);

  static std::vector<int> small_generating_set(const GroupData& g) {
    std::vector<int> gens;
    Subgroup cur{0};
    for (int a = 1; a < g.order(); ++a) {
      if (std::binary_search(cur.begin(), cur.end(), a)) continue;
      gens.push_back(a);
      cur = g.generate(gens);
    }
    return gens;
  }

 private:
  void finish(std::vector<std::string> labels) {
    for (int a = 0; a < n_; ++a)
      if (mul(0, a) != a || mul(a, 0) != a) throw GroupClosureError("element 0 is not the identity");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul(a, b) == 0) {
          if (mul(b, a) != 0) throw GroupClosureError("one-sided inverse");
          inv_[a] = b;
        }
    for (int a = 0; a < n_; ++a)
      if (inv_[a] < 0) throw GroupClosureError("missing inverse");
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw GroupClosureError("table not associative");
    elt_order_.assign(n_, 0);
    for (int a = 0; a < n_; ++a) {
      int k = 1, p = a;
      while (p != 0) {
        p = mul(p, a);
        ++k;
      }
      elt_order_[a] = k;
    }
    class_of_.assign(n_, -1);
    classes_.clear();
    for (int a = 0; a < n_; ++a) {
      if (class_of_[a] >= 0) continue;
      std::set<int> cls;
      for (int w = 0; w < n_; ++w) cls.insert(conj(w, a));
      for (int b : cls) class_of_[b] = static_cast<int>(classes_.size());
      classes_.emplace_back(cls.begin(), cls.end());
    }
    if (labels.size() != static_cast<std::size_t>(n_)) {
      labels.clear();
      for (int a = 0; a < n_; ++a) labels.push_back("g" + std::to_string(a));
    }
    labels_ = std::move(labels);
  }

  int n_ = 0;
  std::vector<int> mult_, inv_, elt_order_, class_of_;
  std::vector<std::vector<int>> classes_;
  std::vector<std::string> labels_;
  std::vector<int> gens_;
  std::vector<AffineTorusMap> affine_;
  Lattice lattice_;
};

// Breadth-first closure under right multiplication by generators. Element
// labels are shortest words in the generator names ("1" for the identity).
inline GroupData close_affine_group(const Lattice& lat, const std::vector<AffineTorusMap>& gens,
                                    const std::vector<std::string>& names = {},
                                    std::size_t bound = 64) {
  const std::size_t n = lat.dim();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    if (g.linear.rows() != n || g.linear.cols() != n || g.translation.size() != n)
      throw SchemaError("generator " + std::to_string(i) + " has the wrong dimension");
    if (!lat.preserved_by(g.linear))
      throw GroupClosureError("generator " + std::to_string(i) + " does not preserve the lattice");
  }
  std::vector<AffineTorusMap> elts{AffineTorusMap::identity(n)};
  std::vector<std::string> labels{"1"};
  std::map<std::pair<std::vector<Integer>, RatVec>, int> index;
  index[elts[0].key(lat)] = 0;
  for (std::size_t head = 0; head < elts.size(); ++head) {
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      AffineTorusMap c = elts[head].compose(gens[gi]).reduced(lat);
      auto k = c.key(lat);
      if (index.count(k)) continue;
      if (elts.size() >= bound)
        throw GroupClosureError("group not finite or bound too small (bound " +
                                std::to_string(bound) + ")");
      index[k] = static_cast<int>(elts.size());
      elts.push_back(c);
      std::string gname = gi < names.size() ? names[gi] : "g" + std::to_string(gi);
      labels.push_back(head == 0 ? gname : labels[head] + "*" + gname);
    }
  }
  std::vector<std::vector<int>> t(elts.size(), std::vector<int>(elts.size()));
  for (std::size_t a = 0; a < elts.size(); ++a)
    for (std::size_t b = 0; b < elts.size(); ++b)
      t[a][b] = index.at(elts[a].compose(elts[b]).reduced(lat).key(lat));
  GroupData g = GroupData::from_table(std::move(t), std::move(labels));
  g.affine_ = std::move(elts);
  g.lattice_ = lat;
  std::vector<int> gi;
  for (const auto& x : gens) gi.push_back(index.at(x.reduced(lat).key(lat)));
  std::sort(gi.begin(), gi.end());
  gi.erase(std::unique(gi.begin(), gi.end()), gi.end());
  gi.erase(std::remove(gi.begin(), gi.end(), 0), gi.end());
  g.gens_ = gi;
  return g;
}

// Index of an affine map in a closed group, if present.
inline std::optional<int> find_element(const GroupData& g, const AffineTorusMap& m) {
  for (int a = 0; a < g.order(); ++a)
    if (g.affine(a).equals_mod(m, g.lattice())) return a;
  return std::nullopt;
}

// ---------- small abstract groups ----------

inline GroupData cyclic_group(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  GroupData g = GroupData::from_table(std::move(t));
  if (n > 1) g.set_generators({1});
  return g;
}

// Order 2n; element r^i s^j has index i + n*j.
inline GroupData dihedral_group(int n) {
  int N = 2 * n;
  std::vector<std::vector<int>> t(N, std::vector<int>(N));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      int i1 = a % n, j1 = a / n, i2 = b % n, j2 = b / n;
      // r^i1 s^j1 r^i2 s^j2 = r^(i1 + (-1)^j1 i2) s^(j1+j2)
      int i = ((i1 + (j1 ? -i2 : i2)) % n + n) % n;
      t[a][b] = i + n * ((j1 + j2) % 2);
    }
  GroupData g = GroupData::from_table(std::move(t));
  g.set_generators(GroupData::small_generating_set(g));
  return g;
}

inline GroupData direct_product(const GroupData& a, const GroupData& b) {
  int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y)
      t[x][y] = a.mul(x % na, y % na) + na * b.mul(x / na, y / na);
  GroupData g = GroupData::from_table(std::move(t));
  g.set_generators(GroupData::small_generating_set(g));
  return g;
}

// Group generated by permutations of {0..d-1}.
inline GroupData permutation_group(const std::vector<std::vector<int>>& gens, std::size_t bound = 64) {
  if (gens.empty()) return cyclic_group(1);
  std::size_t d = gens[0].size();
  std::vector<int> id(d);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> elts{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  auto compose = [&](const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(d);
    for (std::size_t i = 0; i < d; ++i) r[i] = p[q[i]];
    return r;
  };
  for (std::size_t h = 0; h < elts.size(); ++h)
    for (const auto& g : gens) {
      auto c = compose(elts[h], g);
      if (index.count(c)) continue;
      if (elts.size() >= bound) throw GroupClosureError("permutation group exceeds bound");
      index[c] = static_cast<int>(elts.size());
      elts.push_back(c);
    }
  std::vector<std::vector<int>> t(elts.size(), std::vector<int>(elts.size()));
  for (std::size_t a = 0; a < elts.size(); ++a)
    for (std::size_t b = 0; b < elts.size(); ++b) t[a][b] = index.at(compose(elts[a], elts[b]));
  GroupData g = GroupData::from_table(std::move(t));
  g.set_generators(GroupData::small_generating_set(g));
  return g;
}

// ---------- 2-cocycles with values in mu_m ----------

struct Cocycle {
  int modulus = 1;
  std::vector<int> table;  // exponent of gamma(a,b) at a*n+b
  int n = 0;

  static Cocycle trivial(int order) { return {1, std::vector<int>(order * order, 0), order}; }

  int exponent(int a, int b) const { return table[a * n + b]; }
  // Phase gamma(a,b) as a rational in [0,1).
  Rational phase(int a, int b) const { return Rational(exponent(a, b), modulus); }
  Cyclotomic value(int a, int b) const { return Cyclotomic::root(modulus, exponent(a, b)); }

  bool is_trivial() const {
    return std::all_of(table.begin(), table.end(), [](int e) { return e == 0; });
  }

  void set(int a, int b, long e) { table[a * n + b] = static_cast<int>(((e % modulus) + modulus) % modulus); }

  // Returns an empty string when valid, otherwise a description.
  std::string defect(const GroupData& g) const {
    if (n != g.order() || table.size() != static_cast<std::size_t>(n * n))
      return "cocycle table size does not match the group";
    if (modulus < 1) return "cocycle modulus must be positive";
    for (int a = 0; a < n; ++a)
      if (exponent(0, a) != 0 || exponent(a, 0) != 0)
        return "cocycle not normalized at (1," + g.label(a) + ")";
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
          long lhs = exponent(v, w) + exponent(u, g.mul(v, w));
          long rhs = exponent(u, v) + exponent(g.mul(u, v), w);
          if ((lhs - rhs) % modulus != 0)
            return "2-cocycle identity fails at (" + g.label(u) + "," + g.label(v) + "," +
                   g.label(w) + ")";
        }
    return "";
  }

  void validate(const GroupData& g) const {
    auto d = defect(g);
    if (!d.empty()) throw InvariantViolation("invalid cocycle: " + d);
  }

  Cocycle restricted(const Subgroup& h) const {
    Cocycle c{modulus, std::vector<int>(h.size() * h.size()), static_cast<int>(h.size())};
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) c.table[i * h.size() + j] = exponent(h[i], h[j]);
    return c;
  }

  bool inverse_normalized(const GroupData& g) const {
    for (int a = 0; a < n; ++a)
      if (exponent(a, g.inv(a)) != 0) return false;
    return true;
  }

  // Cohomologous cocycle with gamma(w, w^-1) = 1 for all w. May double the
  // modulus (square roots are needed at involutions).
  Cocycle inverse_normalized_copy(const GroupData& g) const {
    const int m2 = 2 * modulus;
    std::vector<int> c(n, 0);  // c_w as exponent mod m2
    for (int a = 0; a < n; ++a) {
      int b = g.inv(a);
      if (a == 0) continue;
      if (a == b) {
        c[a] = (modulus - exponent(a, a)) % modulus;  // c_a^2 = conj gamma(a,a)
      } else if (a < b) {
        c[a] = (2 * (modulus - exponent(a, b))) % m2;
        c[b] = 0;
      }
    }
    Cocycle out{m2, std::vector<int>(n * n), n};
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        out.set(u, v, 2L * exponent(u, v) + c[u] + c[v] - c[g.mul(u, v)]);
    // shrink the modulus back when possible
    bool all_even = std::all_of(out.table.begin(), out.table.end(), [](int e) { return e % 2 == 0; });
    if (all_even) {
      for (auto& e : out.table) e /= 2;
      out.modulus = modulus;
    }
    return out;
  }

  bool operator==(const Cocycle& o) const {
    if (n != o.n) return false;
    int m = std::lcm(modulus, o.modulus);
    for (std::size_t i = 0; i < table.size(); ++i)
      if (static_cast<long>(table[i]) * (m / modulus) % m != static_cast<long>(o.table[i]) * (m / o.modulus) % m)
        return false;
    return true;
  }
};

// mu_m x_gamma G; (a, g) has index g + |G| * a, so (0, g) keeps index g.
inline GroupData central_extension(const GroupData& g, const Cocycle& gamma) {
  const int n = g.order(), m = gamma.modulus;
  std::vector<std::vector<int>> t(n * m, std::vector<int>(n * m));
  for (int x = 0; x < n * m; ++x)
    for (int y = 0; y < n * m; ++y) {
      int a = x / n, u = x % n, b = y / n, v = y % n;
      int c = (a + b + gamma.exponent(u, v)) % m;
      t[x][y] = g.mul(u, v) + n * c;
    }
  return GroupData::from_table(std::move(t));
}

}  // namespace bredonk
