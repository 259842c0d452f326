#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bredonk/characters.hpp"
#include "bredonk/cyclotomic.hpp"
#include "bredonk/errors.hpp"
#include "bredonk/groups.hpp"

namespace bredonk {

// Finite W-set: act[w][x] = w.x
struct WSet {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> act;

  std::size_t size() const { return labels.size(); }

  Subgroup stabilizer(const GroupData& g, int x) const {
    Subgroup s;
    for (int w = 0; w < g.order(); ++w)
      if (act[w][x] == x) s.push_back(w);
    return s;
  }

  // Orbit representatives, smallest point first.
  std::vector<int> orbit_representatives() const {
    std::vector<int> seen(size(), 0), reps;
    for (std::size_t x = 0; x < size(); ++x) {
      if (seen[x]) continue;
      reps.push_back(static_cast<int>(x));
      for (const auto& row : act) seen[row[x]] = 1;
    }
    return reps;
  }
};

// Left cosets wH, labelled by their smallest element.
inline WSet coset_space(const GroupData& g, const Subgroup& h) {
  if (!g.is_subgroup(h)) throw InvariantViolation("coset_space: not a subgroup");
  std::vector<int> coset_of(g.order(), -1);
  std::vector<int> rep;
  for (int w = 0; w < g.order(); ++w) {
    if (coset_of[w] >= 0) continue;
    for (int v : h) coset_of[g.mul(w, v)] = static_cast<int>(rep.size());
    rep.push_back(w);
  }
  WSet s;
  for (int r : rep) s.labels.push_back(g.label(r) + "H");
  s.act.assign(g.order(), std::vector<int>(rep.size()));
  for (int w = 0; w < g.order(); ++w)
    for (std::size_t c = 0; c < rep.size(); ++c) s.act[w][c] = coset_of[g.mul(w, rep[c])];
  return s;
}

// C(O) x_gamma W on the basis delta_x w, index x*|W| + w.
class FiniteCrossedProduct {
 public:
  using Element = std::map<std::size_t, Cyclotomic>;

  std::shared_ptr<const GroupData> group;
  WSet orbit;
  Cocycle gamma;

  std::size_t dim() const { return orbit.size() * static_cast<std::size_t>(group->order()); }
  std::size_t index(int x, int w) const { return static_cast<std::size_t>(x) * group->order() + w; }
  int point_of(std::size_t i) const { return static_cast<int>(i / group->order()); }
  int element_of(std::size_t i) const { return static_cast<int>(i % group->order()); }

  // delta_x u . delta_y v = [x = u.y] gamma(u,v) delta_x uv
  std::optional<std::pair<std::size_t, Rational>> mul(std::size_t i, std::size_t j) const {
    int x = point_of(i), u = element_of(i), y = point_of(j), v = element_of(j);
    if (orbit.act[u][y] != x) return std::nullopt;
    return std::make_pair(index(x, group->mul(u, v)), gamma.phase(u, v));
  }

  // (delta_x w)* = conj(gamma(w^-1,w)) delta_{w^-1 x} w^-1
  std::pair<std::size_t, Rational> star(std::size_t i) const {
    int x = point_of(i), w = element_of(i), wi = group->inv(w);
    return {index(orbit.act[wi][x], wi), -gamma.phase(wi, w)};
  }

  Element basis(std::size_t i) const { return {{i, Cyclotomic::rational(1)}}; }

  Element multiply(const Element& a, const Element& b) const {
    Element out;
    for (const auto& [i, ca] : a)
      for (const auto& [j, cb] : b)
        if (auto p = mul(i, j)) accumulate(out, p->first, ca * cb * Cyclotomic::phase(p->second));
    return prune(out);
  }

  Element adjoint(const Element& a) const {
    Element out;
    for (const auto& [i, c] : a) {
      auto [j, ph] = star(i);
      accumulate(out, j, c.conj() * Cyclotomic::phase(ph));
    }
    return prune(out);
  }

  static bool equal(const Element& a, const Element& b) { return prune(subtract(a, b)).empty(); }

  static Element subtract(const Element& a, const Element& b) {
    Element out = a;
    for (const auto& [i, c] : b) accumulate(out, i, c.scaled(Rational(-1)));
    return out;
  }

  static void accumulate(Element& e, std::size_t i, const Cyclotomic& c) {
    auto it = e.find(i);
    if (it == e.end()) e.emplace(i, c);
    else it->second += c;
  }

  static Element prune(Element e) {
    for (auto it = e.begin(); it != e.end();) {
      if (it->second.is_zero()) it = e.erase(it);
      else ++it;
    }
    return e;
  }
};

inline FiniteCrossedProduct build_crossed_product(std::shared_ptr<const GroupData> g, WSet orbit,
                                                  const Cocycle& gamma) {
  const int n = g->order();
  if (orbit.act.size() != static_cast<std::size_t>(n)) throw SchemaError("orbit action table has wrong size");
  for (const auto& row : orbit.act) {
    if (row.size() != orbit.size()) throw SchemaError("orbit action row has wrong size");
    for (int y : row)
      if (y < 0 || static_cast<std::size_t>(y) >= orbit.size()) throw SchemaError("orbit action leaves the set");
  }
  for (std::size_t x = 0; x < orbit.size(); ++x) {
    if (orbit.act[0][x] != static_cast<int>(x)) throw InvariantViolation("identity moves an orbit point");
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (orbit.act[g->mul(u, v)][x] != orbit.act[u][orbit.act[v][x]])
          throw InvariantViolation("orbit table is not a group action");
  }
  gamma.validate(*g);
  return {std::move(g), std::move(orbit), gamma};
}

// Associativity on all basis triples; empty string when sound.
inline std::string associativity_defect(const FiniteCrossedProduct& a) {
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto ij = a.mul(i, j);
      for (std::size_t k = 0; k < d; ++k) {
        auto jk = a.mul(j, k);
        std::optional<std::pair<std::size_t, Rational>> left, right;
        if (ij)
          if (auto p = a.mul(ij->first, k)) left = std::make_pair(p->first, frac(ij->second + p->second));
        if (jk)
          if (auto p = a.mul(i, jk->first)) right = std::make_pair(p->first, frac(jk->second + p->second));
        if (left != right)
          return "associativity fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                 std::to_string(k) + ")";
      }
    }
  return "";
}

// * is an anti-automorphism of order two.
inline std::string involution_defect(const FiniteCrossedProduct& a) {
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i) {
    auto [j, p1] = a.star(i);
    auto [k, p2] = a.star(j);
    if (k != i || frac(p2 - p1) != 0) return "involution is not of order two at " + std::to_string(i);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto lhs = a.adjoint(a.multiply(a.basis(i), a.basis(j)));
      auto rhs = a.multiply(a.adjoint(a.basis(j)), a.adjoint(a.basis(i)));
      if (!FiniteCrossedProduct::equal(lhs, rhs))
        return "(ab)* != b*a* at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  return "";
}

struct DualPoint {
  int basepoint;
  int irrep;            // index in the basepoint stabilizer's twisted table
  int degree;           // of the stabilizer representation
  std::size_t dimension;  // of the induced representation
};

// Irreducible representations rho_{x,pi}: one basepoint per orbit, pi an
// irreducible gamma-representation of W_x.
inline std::vector<DualPoint> orbit_dual(const FiniteCrossedProduct& a, std::size_t max_order = 64) {
  std::vector<DualPoint> out;
  const GroupData& g = *a.group;
  for (int x : a.orbit.orbit_representatives()) {
    Subgroup wx = a.orbit.stabilizer(g, x);
    auto t = subgroup_table(g, wx, a.gamma, max_order);
    std::size_t index = g.order() / wx.size();
    for (std::size_t i = 0; i < t.size(); ++i)
      out.push_back({x, static_cast<int>(i), t.degrees[i], index * t.degrees[i]});
  }
  return out;
}

namespace detail {

inline int coefficient_order(const FiniteCrossedProduct& a, const FiniteCrossedProduct::Element* extra = nullptr) {
  int n = a.gamma.modulus;
  if (extra)
    for (const auto& [i, c] : *extra) n = std::lcm(n, c.order());
  return n;
}

// Element -> Q^{dim * phi(n)} via canonical coordinates.
inline RatVec flatten(const FiniteCrossedProduct& a, const FiniteCrossedProduct::Element& e, int n) {
  const std::size_t phi = detail::cyclotomic_polynomial(n).size() - 1;
  RatVec v(a.dim() * phi, Rational(0));
  for (const auto& [i, c] : e) {
    if (n % c.order()) throw std::logic_error("flatten: coefficient outside Q(zeta_n)");
    auto can = c.lifted(n).canonical();
    for (std::size_t j = 0; j < phi; ++j) v[i * phi + j] = can[j];
  }
  return v;
}

inline FiniteCrossedProduct::Element unflatten(const FiniteCrossedProduct& a, const RatVec& v, int n) {
  const std::size_t phi = detail::cyclotomic_polynomial(n).size() - 1;
  FiniteCrossedProduct::Element e;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Cyclotomic c(n);
    for (std::size_t j = 0; j < phi; ++j) c += Cyclotomic::root(n, static_cast<long>(j)).scaled(v[i * phi + j]);
    if (!c.is_zero()) e.emplace(i, c);
  }
  return e;
}

// Q-basis (columns) of the centre, computed over Q(zeta_n) viewed as Q^phi.
inline RatMatrix center_basis(const FiniteCrossedProduct& a, int n) {
  const std::size_t phi = detail::cyclotomic_polynomial(n).size() - 1, d = a.dim();
  const GroupData& g = *a.group;
  std::vector<FiniteCrossedProduct::Element> gens;
  for (std::size_t x = 0; x < a.orbit.size(); ++x) gens.push_back(a.basis(a.index(static_cast<int>(x), 0)));
  for (int w : g.generators()) {
    FiniteCrossedProduct::Element u;
    for (std::size_t x = 0; x < a.orbit.size(); ++x) u[a.index(static_cast<int>(x), w)] = Cyclotomic::rational(1);
    gens.push_back(u);
  }
  // multiplication by zeta^k on canonical coordinates
  std::vector<std::vector<std::vector<Rational>>> shift(n);
  for (int k = 0; k < n; ++k)
    for (std::size_t j = 0; j < phi; ++j) shift[k].push_back(Cyclotomic::root(n, k + static_cast<long>(j)).canonical());
  auto exponent = [&](const Rational& ph) {
    Rational f = frac(ph) * n;
    if (f.get_den() != 1) throw std::logic_error("phase outside the coefficient field");
    return static_cast<int>(f.get_num().get_si());
  };
  RatMatrix m(gens.size() * d * phi, d * phi);
  for (std::size_t gi = 0; gi < gens.size(); ++gi)
    for (const auto& [b, unit] : gens[gi]) {  // generators carry coefficient 1
      for (std::size_t i = 0; i < d; ++i) {
        // e_i * e_b and e_b * e_i with opposite signs
        for (int side = 0; side < 2; ++side) {
          auto p = side == 0 ? a.mul(i, b) : a.mul(b, i);
          if (!p) continue;
          int k = exponent(p->second);
          int sign = side == 0 ? 1 : -1;
          std::size_t row0 = (gi * d + p->first) * phi;
          for (std::size_t j = 0; j < phi; ++j)
            for (std::size_t r = 0; r < phi; ++r)
              if (shift[k][j][r] != 0) m(row0 + r, i * phi + j) += sign * shift[k][j][r];
        }
      }
    }
  return nullspace(m);
}

}  // namespace detail

// Independent count of simple summands: dim of the centre over Q(zeta).
inline std::size_t center_dimension(const FiniteCrossedProduct& a) {
  int n = detail::coefficient_order(a);
  const std::size_t phi = detail::cyclotomic_polynomial(n).size() - 1;
  return detail::center_basis(a, n).cols() / phi;
}

// dim P_x A P_x for P_x = delta_x 1.
inline std::size_t corner_dimension(const FiniteCrossedProduct& a, int x) {
  auto px = a.basis(a.index(x, 0));
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!a.multiply(a.multiply(px, a.basis(i)), px).empty()) ++count;
  return count;
}

struct IdealSummand {
  FiniteCrossedProduct::Element projection;
  bool idempotent = false;
  bool self_adjoint = false;
  bool central = false;
  std::size_t k0_rank = 0;        // dual points lying over conj(iota), by characters
  std::size_t center_rank = 0;    // dim of P.Z(A), by linear algebra
  Rational trace;                 // of P in the left regular representation
  Integer block_dimension = 0;    // sum of dim(rho)^2 over the lying-over dual points
};

// P = sum_z |W'_z|^-1 sum_{w in W'_z} iota_z(w) delta_z w and the ideal it cuts.
inline IdealSummand ideal_summand(const FiniteCrossedProduct& a, const std::vector<Subgroup>& wprime,
                                  const std::vector<PhaseCharacter>& iota, std::size_t max_order = 64) {
  const GroupData& g = *a.group;
  if (wprime.size() != a.orbit.size() || iota.size() != a.orbit.size())
    throw SchemaError("ideal_summand: need W' and iota at every orbit point");
  IdealSummand out;
  for (std::size_t z = 0; z < a.orbit.size(); ++z) {
    Subgroup wz = a.orbit.stabilizer(g, static_cast<int>(z));
    if (!g.is_subgroup(wprime[z]) || !g.is_normal(wprime[z], wz))
      throw InvariantViolation("W'_x is not a normal subgroup of W_x");
    if (auto d = iota_character_defect(g, wprime[z], iota[z], a.gamma); !d.empty()) throw InvariantViolation(d);
    Rational inv(1, static_cast<long>(wprime[z].size()));
    for (int w : wprime[z])
      FiniteCrossedProduct::accumulate(out.projection, a.index(static_cast<int>(z), w),
                                       phase_value(iota[z], w).scaled(inv));
  }
  for (int u = 0; u < g.order(); ++u)
    for (std::size_t z = 0; z < a.orbit.size(); ++z) {
      std::size_t uz = a.orbit.act[u][z];
      if (g.conjugate(u, wprime[z]) != wprime[uz]) throw InvariantViolation("W' is not conjugation-stable on the orbit");
      for (int v : wprime[z]) {
        Rational rhs = frac(iota[z].count(v) ? iota[z].at(v) : Rational(0)) + a.gamma.phase(g.mul(u, v), g.inv(u)) +
                       a.gamma.phase(u, v) - a.gamma.phase(u, g.inv(u));
        auto it = iota[uz].find(g.conj(u, v));
        Rational lhs = it == iota[uz].end() ? Rational(0) : it->second;
        if (frac(lhs - rhs) != 0) throw InvariantViolation("iota violates the conjugation law on the orbit");
      }
    }
  const auto& p = out.projection;
  out.idempotent = FiniteCrossedProduct::equal(a.multiply(p, p), p);
  out.self_adjoint = FiniteCrossedProduct::equal(a.adjoint(p), p);
  out.central = true;
  for (std::size_t i = 0; i < a.dim() && out.central; ++i)
    out.central = FiniteCrossedProduct::equal(a.multiply(p, a.basis(i)), a.multiply(a.basis(i), p));
  Cyclotomic tr = Cyclotomic::rational(0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto pi = a.multiply(p, a.basis(i));
    if (auto it = pi.find(i); it != pi.end()) tr += it->second;
  }
  auto q = tr.as_rational();
  if (!q) throw InvariantViolation("trace of P is not rational");
  out.trace = *q;

  for (int x : a.orbit.orbit_representatives()) {
    Subgroup wx = a.orbit.stabilizer(g, x);
    auto t = subgroup_table(g, wx, a.gamma, max_order);
    auto over = lying_over_basis(g, t, wprime[x], iota[x], a.gamma);
    out.k0_rank += over.size();
    for (int i : over) {
      Integer dimr = Integer(g.order() / static_cast<int>(wx.size())) * t.degrees[i];
      out.block_dimension += dimr * dimr;
    }
  }

  int n = detail::coefficient_order(a, &p);
  const std::size_t phi = detail::cyclotomic_polynomial(n).size() - 1;
  RatMatrix z = detail::center_basis(a, n);
  std::vector<RatVec> cols;
  for (std::size_t c = 0; c < z.cols(); ++c)
    cols.push_back(detail::flatten(a, a.multiply(p, detail::unflatten(a, z.column(c), n)), n));
  out.center_rank = cols.empty() ? 0 : rank(RatMatrix::from_columns(cols, a.dim() * phi)) / phi;
  return out;
}

}  // namespace bredonk
