#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bredonk/arrangement.hpp"
#include "bredonk/characters.hpp"
#include "bredonk/errors.hpp"
#include "bredonk/groups.hpp"

namespace bredonk {

struct LocusEntry {
  int reflection;  // element index in W
  HyperplaneFamily family;
};

struct IotaEntry {
  int reflection;
  std::size_t component;
  Rational phase;  // iota = e^{2 pi i phase}
};

struct SlicedLocusSpec {
  std::vector<LocusEntry> loci;
  std::vector<IotaEntry> iota;
  bool empty() const { return loci.empty(); }

  std::vector<int> reflections() const {
    std::vector<int> r;
    for (const auto& e : loci) r.push_back(e.reflection);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }
};

using ChamberKey = std::vector<Integer>;

struct BlowupResult {
  EquivariantComplex X;
  EquivariantComplex Xt;
  Cocycle gamma;
  std::vector<std::vector<std::size_t>> projection;  // [k][X~ cell] -> X cell
  std::vector<std::vector<ChamberKey>> chamber;      // [k][X~ cell]
  std::vector<std::vector<Subgroup>> wprime;         // [k][X cell]
  std::vector<std::vector<PhaseCharacter>> iota;     // [k][X cell], on wprime
  std::vector<int> reflections;                      // distinct reflections of the sliced loci
  std::vector<std::vector<std::vector<long>>> component;  // [reflection][k][X cell], -1 off the locus
  std::vector<std::size_t> component_count;               // per reflection
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Generated W'_z plus iota extended from the reflection values:
// iota(v r) = iota(v) iota(r) gamma(v, r).
inline PhaseCharacter extend_iota(const GroupData& g, const Cocycle& gamma, const std::vector<int>& gens,
                                  const std::vector<Rational>& values, const std::string& where) {
  PhaseCharacter out{{0, Rational(0)}};
  std::vector<int> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int v = queue[h];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int vr = g.mul(v, gens[i]);
      Rational ph = frac(out[v] + values[i] + gamma.phase(v, gens[i]));
      auto it = out.find(vr);
      if (it == out.end()) {
        out[vr] = ph;
        queue.push_back(vr);
      } else if (it->second != ph) {
        throw InvariantViolation("iota assignment is not a conj(gamma)-character of W'_z at " + where);
      }
    }
  }
  return out;
}

}  // namespace detail

// X~: pairs (X-cell, adjacent chamber of the complement of the sliced locus)
// modulo Lambda, glued as in the cover.
inline BlowupResult build_blowup(const EquivariantComplex& x, const SlicedLocusSpec& spec, const Cocycle& gamma) {
  if (!x.has_action()) throw std::invalid_argument("build_blowup: action not installed");
  const GroupData& g = *x.group;
  BlowupResult res;
  res.X = x;
  res.gamma = gamma;
  res.reflections = spec.reflections();
  const std::size_t nd = x.dim + 1;
  res.wprime.assign(nd, {});
  res.iota.assign(nd, {});

  if (spec.empty()) {
    res.Xt = x;
    for (std::size_t k = 0; k < nd; ++k) {
      res.projection.emplace_back(x.count(k));
      std::iota(res.projection[k].begin(), res.projection[k].end(), 0);
      res.chamber.emplace_back(x.count(k), ChamberKey{});
      res.wprime[k].assign(x.count(k), Subgroup{0});
      res.iota[k].assign(x.count(k), PhaseCharacter{{0, Rational(0)}});
    }
    return res;
  }
  if (!x.geometric) throw UnsupportedDimension("blow-up needs a geometric complex");
  const Lattice& lat = x.lattice;

  // merged sliced arrangement and per-reflection loci
  Arrangement sliced{lat, {}};
  for (const auto& e : spec.loci) {
    if (e.reflection < 0 || e.reflection >= g.order()) throw SchemaError("sliced locus names a missing element");
    sliced.add(e.family);
  }
  for (const auto& cells : x.cells)
    for (const auto& cell : cells)
      for (const auto& f : sliced.families) {
        Rational lo = f.value(cell.vertices[0]), hi = lo;
        for (const auto& v : cell.vertices) {
          lo = std::min(lo, f.value(v));
          hi = std::max(hi, f.value(v));
        }
        for (const auto& val : f.values_in(lo, hi))
          if (val > lo && val < hi)
            throw InvariantViolation("sliced family not a subcomplex of X: a cell crosses a sliced hyperplane");
      }

  const auto& refl = res.reflections;
  std::vector<std::vector<std::vector<bool>>> on(refl.size());
  for (std::size_t r = 0; r < refl.size(); ++r) {
    on[r].resize(nd);
    for (std::size_t k = 0; k < nd; ++k)
      for (std::size_t c = 0; c < x.count(k); ++c) {
        bool hit = false;
        for (const auto& e : spec.loci)
          if (e.reflection == refl[r] && e.family.contains(x.cells[k][c].barycenter)) hit = true;
        on[r][k].push_back(hit);
        if (hit && !std::binary_search(x.stabilizers[k][c].begin(), x.stabilizers[k][c].end(), refl[r]))
          throw InvariantViolation("sliced locus not fixed by its reflection: " + g.label(refl[r]) +
                                   " does not fix a cell of its sliced locus");
      }
  }

  // connected components of each locus, labelled in (dim, cell) order
  std::vector<std::size_t> offset(nd + 1, 0);
  for (std::size_t k = 0; k < nd; ++k) offset[k + 1] = offset[k] + x.count(k);
  res.component.assign(refl.size(), {});
  res.component_count.assign(refl.size(), 0);
  for (std::size_t r = 0; r < refl.size(); ++r) {
    detail::UnionFind uf(offset[nd]);
    for (std::size_t k = 1; k < nd; ++k)
      for (std::size_t c = 0; c < x.count(k); ++c) {
        if (!on[r][k][c]) continue;
        for (const auto& inc : x.cells[k][c].boundary)
          if (on[r][k - 1][inc.face]) uf.unite(offset[k] + c, offset[k - 1] + inc.face);
      }
    std::map<std::size_t, long> label;
    res.component[r].resize(nd);
    for (std::size_t k = 0; k < nd; ++k)
      for (std::size_t c = 0; c < x.count(k); ++c) {
        long l = -1;
        if (on[r][k][c]) {
          auto root = uf.find(offset[k] + c);
          auto it = label.find(root);
          if (it == label.end()) it = label.emplace(root, static_cast<long>(label.size())).first;
          l = it->second;
        }
        res.component[r][k].push_back(l);
      }
    res.component_count[r] = label.size();
  }
  std::map<std::pair<int, std::size_t>, Rational> iota_table;
  for (const auto& e : spec.iota) {
    auto pos = std::find(refl.begin(), refl.end(), e.reflection);
    if (pos == refl.end()) throw SchemaError("iota entry names a reflection without a sliced locus");
    if (e.component >= res.component_count[pos - refl.begin()])
      throw SchemaError("iota entry names a missing locus component");
    iota_table[{e.reflection, e.component}] = frac(e.phase);
  }

  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      std::vector<int> gens;
      std::vector<Rational> vals;
      for (std::size_t r = 0; r < refl.size(); ++r)
        if (on[r][k][c]) {
          gens.push_back(refl[r]);
          auto it = iota_table.find({refl[r], static_cast<std::size_t>(res.component[r][k][c])});
          vals.push_back(it == iota_table.end() ? Rational(0) : it->second);
        }
      Subgroup wp = g.generate(gens);
      const auto& wz = x.stabilizers[k][c];
      for (int v : wp)
        if (!std::binary_search(wz.begin(), wz.end(), v))
          throw InvariantViolation("malformed sliced locus: generated W'_z is not contained in W_z");
      res.wprime[k].push_back(wp);
      res.iota[k].push_back(detail::extend_iota(g, gamma, gens, vals,
                                                std::to_string(k) + "-cell " + std::to_string(c)));
    }

  // chambers
  auto key_of = [&](const RatVec& p) {
    ChamberKey key;
    for (const auto& f : sliced.families) {
      if (f.contains(p)) throw InvariantViolation("sliced family not a subcomplex: a top cell meets the locus");
      key.push_back(f.slab(f.value(p)));
    }
    return key;
  };
  auto shift_key = [&](ChamberKey key, const IntVec& lam, int sgn) {
    for (std::size_t i = 0; i < key.size(); ++i) key[i] += sgn * sliced.families[i].slab_shift(lat, lam);
    return key;
  };
  std::vector<std::vector<std::map<ChamberKey, RatVec>>> germs(nd);
  for (std::size_t k = 0; k < nd; ++k) germs[k].resize(x.count(k));
  for (std::size_t t = 0; t < x.count(x.dim); ++t) {
    const RatVec& pt = x.cells[x.dim][t].barycenter;
    ChamberKey kt = key_of(pt);
    for (const auto& f : detail::closure(x, x.dim, t)) {
      IntVec neg(f.shift);
      for (auto& v : neg) v = -v;
      germs[f.dim][f.cell].emplace(shift_key(kt, f.shift, -1), lat.shifted(pt, neg));
    }
  }

  EquivariantComplex& xt = res.Xt;
  xt.dim = x.dim;
  xt.geometric = false;
  xt.lattice = lat;
  xt.cells.resize(nd);
  res.projection.resize(nd);
  res.chamber.resize(nd);
  std::vector<std::map<std::pair<std::size_t, ChamberKey>, std::size_t>> index(nd);
  std::vector<std::vector<RatVec>> witness(nd);
  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      if (germs[k][c].empty()) throw InvariantViolation("cell without an adjacent chamber");
      std::size_t j = 0;
      for (const auto& [key, pt] : germs[k][c]) {
        index[k][{c, key}] = xt.cells[k].size();
        Cell cell = x.cells[k][c];
        cell.boundary.clear();
        cell.label = "cell " + std::to_string(c) + " chamber " + std::to_string(j++);
        xt.cells[k].push_back(std::move(cell));
        res.projection[k].push_back(c);
        res.chamber[k].push_back(key);
        witness[k].push_back(pt);
      }
    }
  for (std::size_t k = 1; k < nd; ++k)
    for (std::size_t z = 0; z < xt.count(k); ++z) {
      std::size_t c = res.projection[k][z];
      for (const auto& inc : x.cells[k][c].boundary) {
        auto it = index[k - 1].find({inc.face, shift_key(res.chamber[k][z], inc.shift, -1)});
        if (it == index[k - 1].end()) throw InvariantViolation("blow-up gluing lost a face");
        xt.cells[k][z].boundary.push_back({it->second, inc.shift, inc.sign});
      }
    }
  xt.group = x.group;
  xt.action.assign(nd, {});
  xt.stabilizers.assign(nd, {});
  for (std::size_t k = 0; k < nd; ++k) {
    xt.action[k].assign(g.order(), std::vector<CellImage>(xt.count(k)));
    for (int w = 0; w < g.order(); ++w)
      for (std::size_t z = 0; z < xt.count(k); ++z) {
        const auto& im = x.action[k][w][res.projection[k][z]];
        ChamberKey kw = shift_key(key_of(g.affine(w).apply(witness[k][z])), im.shift, -1);
        auto it = index[k].find({im.cell, kw});
        if (it == index[k].end()) throw InvariantViolation("blow-up action lost a cell");
        xt.action[k][w][z] = {it->second, im.shift, im.sign};
      }
    for (std::size_t z = 0; z < xt.count(k); ++z) {
      Subgroup s;
      for (int w = 0; w < g.order(); ++w)
        if (xt.action[k][w][z].cell == z) s.push_back(w);
      xt.stabilizers[k].push_back(s);
    }
  }
  for (std::size_t k = 2; k < nd; ++k)
    if (!(xt.boundary_matrix(k - 1) * xt.boundary_matrix(k)).is_zero())
      throw InvariantViolation("blow-up boundary of boundary is nonzero");
  return res;
}

struct InvariantCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

inline bool all_ok(const std::vector<InvariantCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.ok; });
}

// Structural checks on a blow-up; each reports the first offending cell.
inline std::vector<InvariantCheck> validate_blowup(const BlowupResult& b) {
  const EquivariantComplex& x = b.X;
  const EquivariantComplex& xt = b.Xt;
  const GroupData& g = *x.group;
  const std::size_t nd = x.dim + 1;
  auto where = [](std::size_t k, std::size_t c) {
    return std::to_string(k) + "-cell " + std::to_string(c);
  };
  auto contains = [](const Subgroup& s, int v) { return std::binary_search(s.begin(), s.end(), v); };
  std::vector<InvariantCheck> out;

  InvariantCheck eq{"projection commutes with the action", true, ""};
  for (std::size_t k = 0; k < nd && eq.ok; ++k)
    for (int w = 0; w < g.order() && eq.ok; ++w)
      for (std::size_t z = 0; z < xt.count(k) && eq.ok; ++z)
        if (b.projection[k][xt.action[k][w][z].cell] != x.action[k][w][b.projection[k][z]].cell) {
          eq.ok = false;
          eq.detail = "X~ " + where(k, z) + " under " + g.label(w);
        }
  out.push_back(eq);

  std::vector<std::vector<std::vector<std::size_t>>> fiber(nd);
  for (std::size_t k = 0; k < nd; ++k) {
    fiber[k].resize(x.count(k));
    for (std::size_t z = 0; z < xt.count(k); ++z) fiber[k][b.projection[k][z]].push_back(z);
  }

  InvariantCheck fs{"fiber size equals |W'_z|", true, ""};
  InvariantCheck st{"W'_z acts simply transitively on each fiber", true, ""};
  InvariantCheck sp{"W_z = W'_z ⋊ W_z~", true, ""};
  InvariantCheck triv{"W'_z meets every X~ stabilizer trivially", true, ""};
  for (std::size_t k = 0; k < nd; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      const auto& wp = b.wprime[k][c];
      const auto& wz = x.stabilizers[k][c];
      const auto& fib = fiber[k][c];
      if (fs.ok && fib.size() != wp.size()) {
        fs.ok = false;
        fs.detail = where(k, c) + ": fiber " + std::to_string(fib.size()) + ", |W'| " + std::to_string(wp.size());
      }
      if (st.ok && !fib.empty()) {
        std::set<std::size_t> hit;
        for (int v : wp) hit.insert(xt.action[k][v][fib[0]].cell);
        if (hit.size() != wp.size() || hit != std::set<std::size_t>(fib.begin(), fib.end())) {
          st.ok = false;
          st.detail = where(k, c);
        }
      }
      if (sp.ok && !g.is_normal(wp, wz)) {
        sp.ok = false;
        sp.detail = where(k, c) + ": W'_z not normal in W_z";
      }
      for (auto z : fib) {
        const auto& wzt = xt.stabilizers[k][z];
        for (int v : wzt)
          if (sp.ok && !contains(wz, v)) {
            sp.ok = false;
            sp.detail = "X~ " + where(k, z) + ": stabilizer not inside W_z";
          }
        std::size_t meet = 0;
        for (int v : wzt) meet += contains(wp, v);
        if (triv.ok && meet != 1) {
          triv.ok = false;
          triv.detail = "X~ " + where(k, z);
        }
        if (sp.ok && wzt.size() * wp.size() != wz.size()) {
          sp.ok = false;
          sp.detail = "X~ " + where(k, z) + ": |W'_z||W_z~| != |W_z|";
        }
      }
    }
  out.push_back(fs);
  out.push_back(st);
  out.push_back(sp);
  out.push_back(triv);

  InvariantCheck ob{"projection is a bijection on orbits", true, ""};
  for (std::size_t k = 0; k < nd && ob.ok; ++k) {
    auto lt = xt.orbit_labels(k), lx = x.orbit_labels(k);
    std::map<std::size_t, std::size_t> m;
    std::set<std::size_t> img;
    for (std::size_t z = 0; z < xt.count(k); ++z) {
      auto [it, fresh] = m.emplace(lt[z], lx[b.projection[k][z]]);
      if (!fresh && it->second != lx[b.projection[k][z]]) ob.ok = false;
      img.insert(lx[b.projection[k][z]]);
    }
    if (m.size() != x.orbit_count(k) || img.size() != x.orbit_count(k)) ob.ok = false;
    if (!ob.ok) ob.detail = "dimension " + std::to_string(k);
  }
  out.push_back(ob);

  InvariantCheck face{"W'_z = W_z ∩ W'_y and iota_z = iota_y on faces", true, ""};
  for (std::size_t k = 1; k < nd && face.ok; ++k)
    for (std::size_t c = 0; c < x.count(k) && face.ok; ++c)
      for (const auto& inc : x.cells[k][c].boundary) {
        const auto& wy = b.wprime[k - 1][inc.face];
        Subgroup meet;
        for (int v : x.stabilizers[k][c])
          if (contains(wy, v)) meet.push_back(v);
        bool ok = meet == b.wprime[k][c];
        for (int v : b.wprime[k][c])
          if (ok && frac(b.iota[k][c].at(v) - b.iota[k - 1][inc.face].at(v)) != 0) ok = false;
        if (!ok) {
          face.ok = false;
          face.detail = where(k, c) + " with face " + std::to_string(inc.face);
          break;
        }
      }
  out.push_back(face);

  InvariantCheck conj{"W'_{wz} = w W'_z w^-1 and the iota conjugation law", true, ""};
  const Cocycle& gm = b.gamma;
  for (std::size_t k = 0; k < nd && conj.ok; ++k)
    for (int w = 0; w < g.order() && conj.ok; ++w)
      for (std::size_t c = 0; c < x.count(k) && conj.ok; ++c) {
        std::size_t wc = x.action[k][w][c].cell;
        if (g.conjugate(w, b.wprime[k][c]) != b.wprime[k][wc]) {
          conj.ok = false;
          conj.detail = where(k, c) + " under " + g.label(w);
          break;
        }
        for (int v : b.wprime[k][c]) {
          Rational rhs = b.iota[k][c].at(v) + gm.phase(g.mul(w, v), g.inv(w)) + gm.phase(w, v) -
                         gm.phase(w, g.inv(w));
          if (frac(b.iota[k][wc].at(g.conj(w, v)) - rhs) != 0) {
            conj.ok = false;
            conj.detail = where(k, c) + " under " + g.label(w) + " at " + g.label(v);
            break;
          }
        }
      }
  out.push_back(conj);

  InvariantCheck cw{"X~ stabilizers preserve orientation", w_cw_defect(xt).empty(), w_cw_defect(xt)};
  out.push_back(cw);
  InvariantCheck chain{"action on X~ commutes with the boundary", equivariance_defect(xt).empty(),
                       equivariance_defect(xt)};
  out.push_back(chain);
  return out;
}

}  // namespace bredonk
