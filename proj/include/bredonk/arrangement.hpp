#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bredonk/errors.hpp"
#include "bredonk/exactla.hpp"
#include "bredonk/groups.hpp"

namespace bredonk {

inline Rational dot(const IntVec& a, const RatVec& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * x[i];
  return s;
}

inline Rational dot(const RatVec& a, const RatVec& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

inline RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

// {x : <normal, x> in offsets + period Z}. The normal is a primitive integer
// covector with first nonzero entry positive; period is the generator of
// <normal, Lambda>, offsets are sorted in [0, period).
struct HyperplaneFamily {
  IntVec normal;
  Integer period;
  std::vector<Rational> offsets;

  // Normalizes an arbitrary rational description. `period` defaults to the
  // lattice pairing of `normal`.
  static HyperplaneFamily make(const Lattice& lat, const RatVec& normal,
                               const std::vector<Rational>& offsets,
                               std::optional<Rational> period = std::nullopt) {
    const std::size_t n = lat.dim();
    if (normal.size() != n) throw SchemaError("hyperplane normal has the wrong dimension");
    if (std::all_of(normal.begin(), normal.end(), [](const Rational& q) { return q == 0; }))
      throw SchemaError("hyperplane normal is zero");
    Integer l = 1;
    for (const auto& q : normal) l = lcm(l, Integer(q.get_den()));
    Integer g = 0;
    for (const auto& q : normal) {
      Rational v = q * Rational(l);
      g = gcd(g, v.get_num());
    }
    Rational s = Rational(l) / Rational(g);
    for (const auto& q : normal)
      if (q != 0) {
        if (q < 0) s = -s;
        break;
      }
    HyperplaneFamily f;
    for (const auto& q : normal) {
      Rational v = q * s;
      f.normal.push_back(v.get_num());
    }
    // lattice pairing
    Integer pair = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Integer v = 0;
      for (std::size_t i = 0; i < n; ++i) v += f.normal[i] * lat.basis()(i, j);
      pair = gcd(pair, v);
    }
    f.period = pair;
    Rational p = period ? abs(*period * s) : Rational(pair);
    if (p <= 0) throw SchemaError("hyperplane period must be positive");
    std::vector<Rational> scaled;
    for (const auto& o : offsets) {
      Rational v = o * s;
      scaled.push_back(v - p * Rational(Cyclotomic::floor_div(v / p)));
    }
    std::sort(scaled.begin(), scaled.end());
    scaled.erase(std::unique(scaled.begin(), scaled.end()), scaled.end());
    // the set must be invariant under shifts by the lattice pairing
    for (const auto& o : scaled) {
      Rational moved = o + Rational(pair);
      moved -= p * Rational(Cyclotomic::floor_div(moved / p));
      if (!std::binary_search(scaled.begin(), scaled.end(), moved))
        throw SchemaError("hyperplane family is not periodic under the lattice");
    }
    for (const auto& o : scaled)
      for (Rational v = o; v < Rational(pair); v += p) f.offsets.push_back(v);
    std::sort(f.offsets.begin(), f.offsets.end());
    f.offsets.erase(std::unique(f.offsets.begin(), f.offsets.end()), f.offsets.end());
    return f;
  }

  Rational value(const RatVec& x) const { return dot(normal, x); }

  Rational reduce(const Rational& v) const {
    Rational p(period);
    return v - p * Rational(Cyclotomic::floor_div(v / p));
  }

  bool contains_value(const Rational& v) const {
    return std::binary_search(offsets.begin(), offsets.end(), reduce(v));
  }
  bool contains(const RatVec& x) const { return contains_value(value(x)); }

  // Index of the open slab containing v (v must avoid the family).
  Integer slab(const Rational& v) const {
    Integer q = Cyclotomic::floor_div(v / Rational(period));
    Rational f = v - Rational(q * period);
    auto idx = std::lower_bound(offsets.begin(), offsets.end(), f) - offsets.begin();
    return q * static_cast<long>(offsets.size()) + idx;
  }

  // Slab shift caused by translating by B*lam.
  Integer slab_shift(const Lattice& lat, const IntVec& lam) const {
    Rational v = dot(normal, lat.point(RatVec(lam.begin(), lam.end()))) / Rational(period);
    if (v.get_den() != 1) throw InvariantViolation("lattice translate breaks family periodicity");
    return v.get_num() * static_cast<long>(offsets.size());
  }

  std::vector<Rational> values_in(const Rational& lo, const Rational& hi) const {
    std::vector<Rational> out;
    if (offsets.empty()) return out;
    Integer q = Cyclotomic::floor_div(lo / Rational(period)) - 1;
    for (;; ++q) {
      Rational base = Rational(q * period);
      if (base > hi) break;
      for (const auto& o : offsets) {
        Rational v = base + o;
        if (v >= lo && v <= hi) out.push_back(v);
      }
    }
    return out;
  }

  HyperplaneFamily merged(const HyperplaneFamily& o) const {
    if (normal != o.normal) throw std::invalid_argument("merging families with different normals");
    HyperplaneFamily f = *this;
    f.offsets.insert(f.offsets.end(), o.offsets.begin(), o.offsets.end());
    std::sort(f.offsets.begin(), f.offsets.end());
    f.offsets.erase(std::unique(f.offsets.begin(), f.offsets.end()), f.offsets.end());
    return f;
  }

  // w(H) for an affine map w.
  HyperplaneFamily image(const AffineTorusMap& w, const Lattice& lat) const {
    auto ainv = inverse(to_rational(w.linear));
    if (!ainv) throw GroupClosureError("singular linear part");
    RatVec an(normal.begin(), normal.end());
    RatVec nn = ainv->transpose() * an;  // y -> <a, A^-1 y>
    RatVec b = *ainv * w.translation;
    Rational shift = dot(an, b);
    std::vector<Rational> offs;
    for (const auto& o : offsets) offs.push_back(o + shift);
    return make(lat, nn, offs, Rational(period));
  }

  bool operator==(const HyperplaneFamily& o) const {
    return normal == o.normal && period == o.period && offsets == o.offsets;
  }
};

struct Arrangement {
  Lattice lattice;
  std::vector<HyperplaneFamily> families;

  void add(const HyperplaneFamily& f) {
    if (f.offsets.empty()) return;
    for (auto& g : families)
      if (g.normal == f.normal) {
        g = g.merged(f);
        return;
      }
    families.push_back(f);
    std::sort(families.begin(), families.end(),
              [](const HyperplaneFamily& a, const HyperplaneFamily& b) { return a.normal < b.normal; });
  }

  // Hyperplanes (B^-1 x)_i in Z.
  void add_grid() {
    for (std::size_t i = 0; i < lattice.dim(); ++i)
      add(HyperplaneFamily::make(lattice, lattice.inverse_basis().row(i), {Rational(0)}, Rational(1)));
  }

  Arrangement closed_under(const GroupData& g) const {
    Arrangement a{lattice, {}};
    for (const auto& f : families)
      for (int w = 0; w < g.order(); ++w) a.add(f.image(g.affine(w), lattice));
    return a;
  }

  bool operator==(const Arrangement& o) const { return families == o.families; }
};

// Fixed hyperplanes of an element whose linear part is a reflection
// (rank(A - I) = 1); empty family for glides and non-reflections.
inline std::optional<HyperplaneFamily> mirror_family(const AffineTorusMap& w, const Lattice& lat) {
  const std::size_t n = lat.dim();
  IntMatrix d = w.linear - IntMatrix::identity(n);
  if (integer_rank(d) != 1) return std::nullopt;
  std::size_t r = 0;
  IntVec row = d.row(0);
  while (std::all_of(row.begin(), row.end(), [](const Integer& v) { return v == 0; })) row = d.row(++r);
  Integer g = 0;
  for (const auto& v : row) g = gcd(g, v);
  IntVec a;
  for (const auto& v : row) a.push_back(v / g);
  // (A - I) x = u <a, x>
  std::size_t piv = 0;
  while (a[piv] == 0) ++piv;
  RatVec u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = Rational(d(i, piv)) / Rational(a[piv]);
  // fixed on the torus: t u + b in Lambda where t = <a, x>
  RatVec up = lat.coords(u), bp = lat.coords(w.translation);
  std::size_t lead = 0;
  while (lead < n && up[lead] == 0) ++lead;
  for (std::size_t i = 0; i < n; ++i)
    if (up[i] == 0 && bp[i].get_den() != 1) return std::nullopt;
  Integer pair = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Integer v = 0;
    for (std::size_t i = 0; i < n; ++i) v += a[i] * lat.basis()(i, j);
    pair = gcd(pair, v);
  }
  // candidates t = (k - bp[lead]) / up[lead] in [0, pair)
  std::vector<Rational> ts;
  Rational step = 1 / abs(up[lead]);
  Rational t0 = -bp[lead] / up[lead];
  t0 -= step * Rational(Cyclotomic::floor_div(t0 / step));
  for (Rational t = t0; t < Rational(pair); t += step) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = Rational(t * up[i] + bp[i]).get_den() == 1;
    if (ok) ts.push_back(t);
  }
  if (ts.empty()) return std::nullopt;
  return HyperplaneFamily::make(lat, RatVec(a.begin(), a.end()), ts, Rational(pair));
}

// ---------- cell complexes ----------

struct Incidence {
  std::size_t face;
  IntVec shift;  // face + B*shift lies in the boundary of this cell's lift
  int sign;      // incidence number (abstract cells may use |sign| > 1)
};

struct Cell {
  std::vector<RatVec> vertices;  // sorted, lift in the cover
  RatVec barycenter;
  std::vector<RatVec> frame;  // orientation: ordered basis of the direction space
  std::vector<Incidence> boundary;
  std::string label;
};

struct CellImage {
  std::size_t cell;
  IntVec shift;  // w(lift) = image lift + B*shift
  int sign;
};

class EquivariantComplex {
 public:
  std::size_t dim = 0;
  bool geometric = false;
  Lattice lattice;
  std::optional<Arrangement> arrangement;
  std::vector<std::vector<Cell>> cells;
  std::shared_ptr<const GroupData> group;
  std::vector<std::vector<std::vector<CellImage>>> action;  // [k][w][cell]
  std::vector<std::vector<Subgroup>> stabilizers;           // [k][cell]

  std::size_t count(std::size_t k) const { return k < cells.size() ? cells[k].size() : 0; }
  bool has_action() const { return group != nullptr && !action.empty(); }

  // Rows: (k-1)-cells, columns: k-cells.
  IntMatrix boundary_matrix(std::size_t k) const {
    if (k == 0 || k > dim) return IntMatrix(k == 0 ? 0 : count(k - 1), count(k));
    IntMatrix m(count(k - 1), count(k));
    for (std::size_t c = 0; c < count(k); ++c)
      for (const auto& inc : cells[k][c].boundary) m(inc.face, c) += inc.sign;
    return m;
  }

  // C^k -> C^{k+1}.
  IntMatrix coboundary(std::size_t k) const {
    if (k >= dim) return IntMatrix(0, count(k));
    return boundary_matrix(k + 1).transpose();
  }

  long euler_characteristic() const {
    long e = 0;
    for (std::size_t k = 0; k <= dim; ++k) e += (k % 2 ? -1L : 1L) * static_cast<long>(count(k));
    return e;
  }

  // Signed permutation matrix of w on C_k.
  IntMatrix action_matrix(std::size_t k, int w) const {
    IntMatrix m(count(k), count(k));
    for (std::size_t c = 0; c < count(k); ++c) {
      const auto& im = action[k][w][c];
      m(im.cell, c) = im.sign;
    }
    return m;
  }

  std::vector<std::size_t> orbit_labels(std::size_t k) const {
    std::vector<std::size_t> lab(count(k), SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t c = 0; c < count(k); ++c) {
      if (lab[c] != SIZE_MAX) continue;
      for (int w = 0; w < (group ? group->order() : 1); ++w)
        lab[has_action() ? action[k][w][c].cell : c] = next;
      ++next;
    }
    return lab;
  }

  std::size_t orbit_count(std::size_t k) const {
    auto l = orbit_labels(k);
    return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
  }

  // User-supplied cells and incidence integers; boundary[k][cell] lists
  // (face index, incidence) for k >= 1.
  static EquivariantComplex abstract(
      const std::vector<std::size_t>& counts,
      const std::vector<std::vector<std::vector<std::pair<std::size_t, int>>>>& boundary) {
    EquivariantComplex x;
    if (counts.empty()) throw SchemaError("abstract complex needs at least one dimension");
    x.dim = counts.size() - 1;
    x.cells.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
      x.cells[k].resize(counts[k]);
      for (std::size_t c = 0; c < counts[k]; ++c) {
        x.cells[k][c].label = "e" + std::to_string(k) + "_" + std::to_string(c);
        if (k == 0) continue;
        if (k >= boundary.size() || c >= boundary[k].size()) continue;
        for (auto [f, s] : boundary[k][c]) {
          if (f >= counts[k - 1]) throw SchemaError("abstract boundary refers to a missing face");
          x.cells[k][c].boundary.push_back({f, {}, s});
        }
      }
    }
    for (std::size_t k = 2; k <= x.dim; ++k)
      if (!(x.boundary_matrix(k - 1) * x.boundary_matrix(k)).is_zero())
        throw InvariantViolation("abstract complex: boundary of boundary is nonzero");
    return x;
  }
};

namespace detail {

inline std::vector<RatVec> make_frame(const std::vector<RatVec>& verts, std::size_t k) {
  std::vector<RatVec> frame;
  if (k == 0) return frame;
  const std::size_t n = verts[0].size();
  for (std::size_t i = 1; i < verts.size() && frame.size() < k; ++i) {
    auto cand = frame;
    cand.push_back(sub(verts[i], verts[0]));
    if (rank(RatMatrix::from_columns(cand, n)) == cand.size()) frame = std::move(cand);
  }
  if (frame.size() != k) throw InvariantViolation("degenerate cell: vertices do not span its dimension");
  return frame;
}

// Coordinates of vectors (in the span of frame) with respect to frame.
inline RatMatrix frame_coords(const std::vector<RatVec>& frame, const std::vector<RatVec>& vecs) {
  const std::size_t k = frame.size();
  if (k == 0) return RatMatrix(0, 0);
  const std::size_t n = frame[0].size();
  RatMatrix f = RatMatrix::from_columns(frame, n);  // n x k
  auto e = rref(f.transpose());                       // pivots select k independent rows
  RatMatrix sq(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sq(i, j) = f(e.pivots[i], j);
  RatMatrix si = *inverse(sq);
  RatMatrix out(k, vecs.size());
  for (std::size_t c = 0; c < vecs.size(); ++c) {
    RatVec y(k);
    for (std::size_t i = 0; i < k; ++i) y[i] = vecs[c][e.pivots[i]];
    RatVec x = si * y;
    for (std::size_t i = 0; i < k; ++i) out(i, c) = x[i];
  }
  return out;
}

inline int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

inline RatVec barycenter_of(const std::vector<RatVec>& verts) {
  RatVec b(verts[0].size(), Rational(0));
  for (const auto& v : verts)
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += v[i];
  for (auto& x : b) x /= Rational(static_cast<long>(verts.size()));
  return b;
}

// Outward vector first, then the facet frame, expressed in the cell frame.
inline int incidence_sign(const Cell& cell, const RatVec& facet_bary,
                          const std::vector<RatVec>& facet_frame) {
  std::vector<RatVec> vecs{sub(facet_bary, cell.barycenter)};
  vecs.insert(vecs.end(), facet_frame.begin(), facet_frame.end());
  int s = sign_of(determinant(frame_coords(cell.frame, vecs)));
  if (s == 0) throw InvariantViolation("incidence sign degenerate");
  return s;
}

inline std::vector<RatVec> shifted_all(const Lattice& lat, std::vector<RatVec> v, const IntVec& lam) {
  for (auto& x : v) x = lat.shifted(x, lam);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

// Canonical cell given by its vertex lift and the vertex sets of its facets.
struct RawCell {
  std::vector<RatVec> vertices;
  std::vector<std::vector<RatVec>> facets;
};

// Builds a geometric complex from canonical raw cells (barycenters in the
// half-open fundamental domain).
inline EquivariantComplex assemble_geometric(const Lattice& lat, std::vector<std::vector<RawCell>> raw) {
  EquivariantComplex x;
  x.geometric = true;
  x.lattice = lat;
  x.dim = raw.size() - 1;
  x.cells.resize(raw.size());
  std::vector<std::map<RatVec, std::size_t>> index(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    for (auto& r : raw[k]) std::sort(r.vertices.begin(), r.vertices.end());
    std::sort(raw[k].begin(), raw[k].end(), [&](const RawCell& a, const RawCell& b) {
      return lat.key(detail::barycenter_of(a.vertices)) < lat.key(detail::barycenter_of(b.vertices));
    });
    for (std::size_t c = 0; c < raw[k].size(); ++c) {
      Cell cell;
      cell.vertices = raw[k][c].vertices;
      cell.barycenter = detail::barycenter_of(cell.vertices);
      auto key = lat.key(cell.barycenter);
      if (lat.coords(cell.barycenter) != key)
        throw InvariantViolation("cell representative outside the fundamental domain");
      if (!index[k].emplace(key, c).second) throw InvariantViolation("duplicate cell");
      cell.frame = detail::make_frame(cell.vertices, k);
      x.cells[k].push_back(std::move(cell));
    }
  }
  for (std::size_t k = 1; k < raw.size(); ++k)
    for (std::size_t c = 0; c < raw[k].size(); ++c) {
      auto& cell = x.cells[k][c];
      for (auto fv : raw[k][c].facets) {
        std::sort(fv.begin(), fv.end());
        RatVec fb = detail::barycenter_of(fv);
        auto [red, lam] = lat.reduce(fb);
        auto it = index[k - 1].find(lat.key(fb));
        if (it == index[k - 1].end()) throw InvariantViolation("facet missing from the complex");
        const Cell& face = x.cells[k - 1][it->second];
        if (detail::shifted_all(lat, face.vertices, lam) != fv)
          throw InvariantViolation("facet vertex set mismatch");
        std::vector<RatVec> fframe;
        for (const auto& v : face.frame) fframe.push_back(v);
        int s = k == 1 ? detail::sign_of(dot(sub(fb, cell.barycenter), cell.frame[0]))
                       : detail::incidence_sign(cell, fb, fframe);
        if (s == 0) throw InvariantViolation("degenerate edge orientation");
        cell.boundary.push_back({it->second, lam, s});
      }
    }
  for (std::size_t k = 2; k <= x.dim; ++k)
    if (!(x.boundary_matrix(k - 1) * x.boundary_matrix(k)).is_zero())
      throw InvariantViolation("boundary of boundary is nonzero");
  return x;
}

namespace detail {

using SignVec = std::vector<std::int8_t>;

struct Hyper {
  IntVec a;
  Rational c;
};

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

}  // namespace detail

// Faces of the arrangement (grid always included) inside the closed box
// B[0,1]^n; canonical faces become the cells of the torus complex.
inline EquivariantComplex build_from_arrangement(Arrangement arr) {
  using namespace detail;
  const Lattice& lat = arr.lattice;
  const std::size_t n = lat.dim();
  if (n == 0 || n > 3) throw UnsupportedDimension("geometric builder supports dimensions 1..3, got " + std::to_string(n));
  arr.add_grid();

  std::vector<RatVec> corners;
  for (std::size_t m = 0; m < (1u << n); ++m) {
    RatVec c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (m >> i) & 1u;
    corners.push_back(lat.point(c));
  }
  std::vector<Hyper> hs;
  for (const auto& f : arr.families) {
    Rational lo = f.value(corners[0]), hi = lo;
    for (const auto& c : corners) {
      lo = std::min(lo, f.value(c));
      hi = std::max(hi, f.value(c));
    }
    for (const auto& v : f.values_in(lo, hi)) hs.push_back({f.normal, v});
  }
  const std::size_t H = hs.size();
  auto in_box = [&](const RatVec& x) {
    for (const auto& c : lat.coords(x))
      if (c < 0 || c > 1) return false;
    return true;
  };
  auto sign_vec = [&](const RatVec& x) {
    SignVec s(H);
    for (std::size_t h = 0; h < H; ++h) s[h] = static_cast<std::int8_t>(sign_of(dot(hs[h].a, x) - hs[h].c));
    return s;
  };

  std::map<RatVec, std::size_t> vindex;
  std::vector<RatVec> verts;
  for_each_subset(H, n, [&](const std::vector<std::size_t>& sel) {
    RatMatrix a(n, n);
    RatVec b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(hs[sel[i]].a[j]);
      b[i] = hs[sel[i]].c;
    }
    auto ai = inverse(a);
    if (!ai) return;
    RatVec x = *ai * b;
    if (!in_box(x) || vindex.count(x)) return;
    vindex[x] = verts.size();
    verts.push_back(x);
  });
  std::vector<SignVec> vsign;
  for (const auto& v : verts) vsign.push_back(sign_vec(v));

  struct Face {
    SignVec sign;
    std::vector<std::size_t> verts;
    std::set<std::size_t> facets;
  };
  std::vector<std::vector<Face>> faces(n + 1);
  for (std::size_t i = 0; i < verts.size(); ++i) faces[0].push_back({vsign[i], {i}, {}});

  for (std::size_t k = 1; k <= n; ++k) {
    std::map<SignVec, std::size_t> seen;
    std::set<SignVec> rejected;
    for (std::size_t gi = 0; gi < faces[k - 1].size(); ++gi) {
      const SignVec sg = faces[k - 1][gi].sign;
      std::vector<std::size_t> zg;
      for (std::size_t h = 0; h < H; ++h)
        if (sg[h] == 0) zg.push_back(h);
      std::set<std::vector<std::size_t>> flats;
      for_each_subset(zg.size(), n - k, [&](const std::vector<std::size_t>& sel) {
        std::vector<RatVec> rows;
        for (auto s : sel) rows.push_back(RatVec(hs[zg[s]].a.begin(), hs[zg[s]].a.end()));
        RatMatrix sm = rows.empty() ? RatMatrix(0, n) : RatMatrix::from_columns(rows, n).transpose();
        if (rank(sm) != n - k) return;
        std::vector<std::size_t> zl;
        for (auto h : zg) {
          auto ext = rows;
          ext.push_back(RatVec(hs[h].a.begin(), hs[h].a.end()));
          if (rank(RatMatrix::from_columns(ext, n)) == n - k) zl.push_back(h);
        }
        if (!flats.insert(zl).second) return;
        RatMatrix ns = rows.empty() ? RatMatrix::identity(n) : nullspace(sm);
        std::vector<std::size_t> transverse;
        for (auto h : zg)
          if (!std::binary_search(zl.begin(), zl.end(), h)) transverse.push_back(h);
        RatVec u;
        for (std::size_t j = 0; j < ns.cols() && u.empty(); ++j) {
          RatVec b = ns.column(j);
          for (auto h : transverse)
            if (dot(hs[h].a, b) != 0) {
              u = b;
              break;
            }
        }
        if (u.empty()) return;
        for (int dir : {1, -1}) {
          SignVec s = sg;
          for (auto h : transverse) s[h] = static_cast<std::int8_t>(dir * sign_of(dot(hs[h].a, u)));
          if (auto it = seen.find(s); it != seen.end()) {
            faces[k][it->second].facets.insert(gi);
            continue;
          }
          if (rejected.count(s)) continue;
          std::vector<std::size_t> vs;
          for (std::size_t v = 0; v < verts.size(); ++v) {
            bool ok = true;
            for (std::size_t h = 0; h < H && ok; ++h) ok = vsign[v][h] == 0 || vsign[v][h] == s[h];
            if (ok) vs.push_back(v);
          }
          std::vector<RatVec> diffs;
          for (std::size_t i = 1; i < vs.size(); ++i) diffs.push_back(sub(verts[vs[i]], verts[vs[0]]));
          std::size_t r = diffs.empty() ? 0 : rank(RatMatrix::from_columns(diffs, n));
          if (r != k) {
            rejected.insert(s);
            continue;
          }
          seen[s] = faces[k].size();
          faces[k].push_back({s, vs, {gi}});
        }
      });
    }
  }

  std::vector<std::vector<RawCell>> raw(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    for (const auto& f : faces[k]) {
      std::vector<RatVec> vv;
      for (auto v : f.verts) vv.push_back(verts[v]);
      RatVec bc = barycenter_of(vv);
      RatVec co = lat.coords(bc);
      if (std::any_of(co.begin(), co.end(), [](const Rational& q) { return q < 0 || q >= 1; })) continue;
      RawCell rc{vv, {}};
      for (auto gi : f.facets) {
        std::vector<RatVec> fv;
        for (auto v : faces[k - 1][gi].verts) fv.push_back(verts[v]);
        rc.facets.push_back(fv);
      }
      raw[k].push_back(std::move(rc));
    }
  EquivariantComplex x = assemble_geometric(lat, std::move(raw));
  arr.families.erase(std::remove_if(arr.families.begin(), arr.families.end(), [](const HyperplaneFamily& f) { return f.offsets.empty(); }), arr.families.end());
  x.arrangement = arr;
  if (x.euler_characteristic() != 0) throw InvariantViolation("torus complex has nonzero Euler characteristic");
  return x;
}

inline EquivariantComplex build_torus_complex(const Lattice& lat, const std::vector<HyperplaneFamily>& families) {
  Arrangement arr{lat, {}};
  for (const auto& f : families) arr.add(f);
  return build_from_arrangement(arr);
}

// ---------- group action ----------

inline int orientation_sign(const Cell& from, const Cell& to, const IntMatrix& linear) {
  if (from.frame.empty()) return 1;
  std::vector<RatVec> img;
  RatMatrix a = to_rational(linear);
  for (const auto& v : from.frame) img.push_back(a * v);
  int s = detail::sign_of(determinant(detail::frame_coords(to.frame, img)));
  if (s == 0) throw NonCellularError("group element collapses a cell");
  return s;
}

inline EquivariantComplex install_action(EquivariantComplex x, std::shared_ptr<const GroupData> g) {
  if (!g) throw std::invalid_argument("install_action: null group");
  x.group = g;
  x.action.assign(x.dim + 1, {});
  x.stabilizers.assign(x.dim + 1, {});
  if (!x.geometric) {
    if (g->order() != 1)
      throw NonCellularError("abstract complexes need an explicit action table (use install_abstract_action)");
    for (std::size_t k = 0; k <= x.dim; ++k) {
      std::vector<CellImage> id;
      for (std::size_t c = 0; c < x.count(k); ++c) id.push_back({c, {}, 1});
      x.action[k].push_back(id);
      x.stabilizers[k].assign(x.count(k), Subgroup{0});
    }
    return x;
  }
  if (!g->has_affine() || !(g->lattice() == x.lattice))
    throw NonCellularError("group does not act on this torus");
  const Lattice& lat = x.lattice;
  for (std::size_t k = 0; k <= x.dim; ++k) {
    std::map<RatVec, std::size_t> index;
    for (std::size_t c = 0; c < x.count(k); ++c) index[lat.key(x.cells[k][c].barycenter)] = c;
    x.action[k].assign(g->order(), std::vector<CellImage>(x.count(k)));
    for (int w = 0; w < g->order(); ++w) {
      const auto& m = g->affine(w);
      for (std::size_t c = 0; c < x.count(k); ++c) {
        const Cell& cell = x.cells[k][c];
        RatVec q = m.apply(cell.barycenter);
        auto it = index.find(lat.key(q));
        if (it == index.end())
          throw NonCellularError("action not cellular: " + g->label(w) + " moves a " + std::to_string(k) +
                                 "-cell off the complex");
        auto lam = lat.reduce(q).second;
        std::vector<RatVec> img;
        for (const auto& v : cell.vertices) img.push_back(m.apply(v));
        std::sort(img.begin(), img.end());
        const Cell& target = x.cells[k][it->second];
        if (detail::shifted_all(lat, target.vertices, lam) != img)
          throw NonCellularError("action not cellular: " + g->label(w) + " does not map a " +
                                 std::to_string(k) + "-cell onto a cell");
        x.action[k][w][c] = {it->second, lam, orientation_sign(cell, target, m.linear)};
      }
    }
    for (std::size_t c = 0; c < x.count(k); ++c) {
      Subgroup s;
      for (int w = 0; w < g->order(); ++w)
        if (x.action[k][w][c].cell == c) s.push_back(w);
      x.stabilizers[k].push_back(s);
    }
  }
  return x;
}

// images[k][w][c] = (cell, sign); validated as a chain-map action.
inline EquivariantComplex install_abstract_action(
    EquivariantComplex x, std::shared_ptr<const GroupData> g,
    const std::vector<std::vector<std::vector<std::pair<std::size_t, int>>>>& images) {
  x.group = g;
  x.action.assign(x.dim + 1, {});
  x.stabilizers.assign(x.dim + 1, {});
  for (std::size_t k = 0; k <= x.dim; ++k) {
    x.action[k].assign(g->order(), std::vector<CellImage>(x.count(k)));
    for (int w = 0; w < g->order(); ++w)
      for (std::size_t c = 0; c < x.count(k); ++c) {
        auto [t, s] = images.at(k).at(w).at(c);
        x.action[k][w][c] = {t, {}, s};
      }
    for (std::size_t c = 0; c < x.count(k); ++c) {
      Subgroup s;
      for (int w = 0; w < g->order(); ++w)
        if (x.action[k][w][c].cell == c) s.push_back(w);
      x.stabilizers[k].push_back(s);
    }
  }
  for (int w = 0; w < g->order(); ++w)
    for (std::size_t k = 1; k <= x.dim; ++k)
      if (x.action_matrix(k - 1, w) * x.boundary_matrix(k) != x.boundary_matrix(k) * x.action_matrix(k, w))
        throw NonCellularError("abstract action does not commute with the boundary");
  return x;
}

// Every stabilizer fixes its cell pointwise (and preserves orientation).
inline std::string w_cw_defect(const EquivariantComplex& x) {
  if (!x.has_action()) return "";
  for (std::size_t k = 0; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c)
      for (int w : x.stabilizers[k][c]) {
        const auto& im = x.action[k][w][c];
        if (im.sign != 1)
          return "stabilizer element " + x.group->label(w) + " reverses a " + std::to_string(k) + "-cell";
        if (!x.geometric) continue;
        const auto& m = x.group->affine(w);
        for (const auto& v : x.cells[k][c].vertices)
          if (m.apply(v) != x.lattice.shifted(v, im.shift))
            return "stabilizer element " + x.group->label(w) + " moves a point of a " + std::to_string(k) + "-cell";
      }
  return "";
}

inline bool is_w_cw(const EquivariantComplex& x) { return w_cw_defect(x).empty(); }

namespace detail {

struct FaceRef {
  std::size_t dim, cell;
  IntVec shift;
  bool operator<(const FaceRef& o) const {
    return std::tie(dim, cell, shift) < std::tie(o.dim, o.cell, o.shift);
  }
};

inline IntVec add_shift(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

// All faces (any dimension, with shifts) of the canonical lift of a cell.
inline std::set<FaceRef> closure(const EquivariantComplex& x, std::size_t k, std::size_t c) {
  std::set<FaceRef> out;
  std::vector<FaceRef> stack{{k, c, IntVec(x.lattice.dim(), Integer(0))}};
  while (!stack.empty()) {
    FaceRef f = stack.back();
    stack.pop_back();
    if (!out.insert(f).second) continue;
    if (f.dim == 0) continue;
    for (const auto& inc : x.cells[f.dim][f.cell].boundary)
      stack.push_back({f.dim - 1, inc.face, add_shift(f.shift, inc.shift)});
  }
  return out;
}

}  // namespace detail

// Barycentric subdivision of a geometric complex (no action installed).
inline EquivariantComplex barycentric_subdivision(const EquivariantComplex& x) {
  using detail::FaceRef;
  if (!x.geometric) throw UnsupportedDimension("barycentric subdivision needs a geometric complex");
  const Lattice& lat = x.lattice;
  std::vector<std::vector<std::set<FaceRef>>> clos(x.dim + 1);
  for (std::size_t k = 0; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) clos[k].push_back(detail::closure(x, k, c));
  auto bary = [&](const FaceRef& f) { return lat.shifted(x.cells[f.dim][f.cell].barycenter, f.shift); };
  auto is_face = [&](const FaceRef& big, const FaceRef& small) {
    IntVec rel(small.shift);
    for (std::size_t i = 0; i < rel.size(); ++i) rel[i] -= big.shift[i];
    return small.dim < big.dim && clos[big.dim][big.cell].count({small.dim, small.cell, rel}) > 0;
  };
  std::vector<std::vector<RawCell>> raw(x.dim + 1);
  for (std::size_t k = 0; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      std::vector<FaceRef> members(clos[k][c].begin(), clos[k][c].end());
      std::vector<FaceRef> chain{{k, c, IntVec(lat.dim(), Integer(0))}};
      std::function<void()> rec = [&]() {
        std::vector<RatVec> vs;
        for (const auto& f : chain) vs.push_back(bary(f));
        RawCell rc{vs, {}};
        if (chain.size() > 1)
          for (std::size_t drop = 0; drop < chain.size(); ++drop) {
            std::vector<RatVec> fv;
            for (std::size_t i = 0; i < chain.size(); ++i)
              if (i != drop) fv.push_back(vs[i]);
            rc.facets.push_back(fv);
          }
        raw[chain.size() - 1].push_back(rc);
        for (const auto& m : members)
          if (is_face(chain.back(), m)) {
            chain.push_back(m);
            rec();
            chain.pop_back();
          }
      };
      rec();
    }
  EquivariantComplex y = assemble_geometric(lat, std::move(raw));
  y.arrangement = x.arrangement;
  return y;
}

// Arrangement complex refined by the mirrors of all reflections of W; falls
// back to barycentric subdivision if that still is not a W-CW complex.
inline EquivariantComplex equivariant_refine(const EquivariantComplex& x) {
  if (!x.has_action()) throw std::invalid_argument("equivariant_refine: action not installed");
  if (is_w_cw(x)) return x;
  auto g = x.group;
  EquivariantComplex cur = x;
  if (x.arrangement) {
    Arrangement arr = *x.arrangement;
    for (int w = 0; w < g->order(); ++w)
      if (auto f = mirror_family(g->affine(w), x.lattice)) arr.add(*f);
    arr = arr.closed_under(*g);
    cur = install_action(build_from_arrangement(arr), g);
    if (is_w_cw(cur)) return cur;
  }
  if (!x.geometric) throw InvariantViolation("abstract complex is not a W-CW complex");
  for (int round = 0; round < 2; ++round) {
    cur = install_action(barycentric_subdivision(cur), g);
    if (is_w_cw(cur)) return cur;
  }
  throw InvariantViolation("could not refine to a W-CW complex: " + w_cw_defect(cur));
}

// Torus complex of the arrangement generated by `families`, closed under the
// group, with the action installed and refined to a W-CW structure.
inline EquivariantComplex equivariant_torus_complex(std::shared_ptr<const GroupData> g,
                                                    const std::vector<HyperplaneFamily>& families) {
  Arrangement arr{g->lattice(), {}};
  for (const auto& f : families) arr.add(f);
  arr.add_grid();
  arr = arr.closed_under(*g);
  return equivariant_refine(install_action(build_from_arrangement(arr), g));
}

// Chain-map check: every element commutes with the boundary, with signs.
inline std::string equivariance_defect(const EquivariantComplex& x) {
  if (!x.has_action()) return "";
  for (int w = 0; w < x.group->order(); ++w)
    for (std::size_t k = 1; k <= x.dim; ++k)
      if (x.action_matrix(k - 1, w) * x.boundary_matrix(k) != x.boundary_matrix(k) * x.action_matrix(k, w))
        return "element " + x.group->label(w) + " is not a chain map in degree " + std::to_string(k);
  return "";
}

}  // namespace bredonk
