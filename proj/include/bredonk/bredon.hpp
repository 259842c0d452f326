#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bredonk/arrangement.hpp"
#include "bredonk/blowup.hpp"
#include "bredonk/characters.hpp"
#include "bredonk/exactla.hpp"

namespace bredonk {

enum class SystemKind { constant, twisted, lying_over };

inline std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::constant: return "constant";
    case SystemKind::twisted: return "twisted";
    case SystemKind::lying_over: return "lying-over";
  }
  return "?";
}

// Contravariant coefficient system on the cells of an equivariant complex.
// Cell bases are lists of irreducible indices of the stabilizer's table
// (a single entry for the constant system).
struct CoefficientSystem {
  SystemKind kind = SystemKind::constant;
  std::shared_ptr<const EquivariantComplex> complex;
  Cocycle gamma;
  std::vector<CharacterTable> tables;
  std::vector<std::vector<std::size_t>> table_of;  // [k][cell]
  std::vector<std::vector<std::vector<int>>> basis;  // [k][cell]

  std::size_t rank(std::size_t k, std::size_t c) const { return basis[k][c].size(); }

  std::size_t total_rank(std::size_t k) const {
    std::size_t r = 0;
    for (const auto& b : basis[k]) r += b.size();
    return r;
  }

  // M(face) -> M(cell) for a face of a k-cell.
  IntMatrix restriction(std::size_t k, std::size_t c, std::size_t face) const {
    if (kind == SystemKind::constant) return IntMatrix::identity(1);
    return sub_block(full_restriction(table_of[k - 1][face], table_of[k][c]), basis[k][c], basis[k - 1][face],
                     "restriction");
  }

  // All irreducibles of table `big` to all irreducibles of table `small`.
  const IntMatrix& full_restriction(std::size_t big, std::size_t small) const {
    auto key = std::make_pair(big, small);
    auto it = res_cache_.find(key);
    if (it == res_cache_.end()) it = res_cache_.emplace(key, restriction_matrix(tables[big], tables[small])).first;
    return it->second;
  }

  // M(cell) -> M(w cell), without the orientation sign.
  IntMatrix conjugation(std::size_t k, int w, std::size_t c) const {
    if (kind == SystemKind::constant) return IntMatrix::identity(1);
    std::size_t wc = complex->action[k][w][c].cell;
    auto key = std::make_tuple(w, table_of[k][c], table_of[k][wc]);
    auto it = conj_cache_.find(key);
    if (it == conj_cache_.end())
      it = conj_cache_
               .emplace(key, conjugation_matrix(*complex->group, w, tables[table_of[k][c]],
                                                tables[table_of[k][wc]], gamma))
               .first;
    return sub_block(it->second, basis[k][wc], basis[k][c], "conjugation");
  }

 private:
  mutable std::map<std::tuple<int, std::size_t, std::size_t>, IntMatrix> conj_cache_;
  mutable std::map<std::pair<std::size_t, std::size_t>, IntMatrix> res_cache_;

  // Rows/columns picked out of a map between full representation groups; the
  // chosen source basis must land in the chosen target basis.
  static IntMatrix sub_block(const IntMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols,
                             const char* what) {
    IntMatrix out(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Integer inside = 0, total = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) total += m(i, cols[j]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        out(i, j) = m(rows[i], cols[j]);
        inside += out(i, j);
      }
      if (inside != total)
        throw InvariantViolation(std::string(what) + " leaves the lying-over subsystem");
    }
    return out;
  }
};

// Bases and tables. For lying_over, `b` supplies W'_z and iota per X cell.
inline CoefficientSystem build_system(SystemKind kind, const EquivariantComplex& x, const Cocycle& gamma,
                                      const BlowupResult* b = nullptr, std::size_t max_order = 64) {
  if (!x.has_action()) throw std::invalid_argument("build_system: action not installed");
  const GroupData& g = *x.group;
  if (kind != SystemKind::constant) gamma.validate(g);
  if (kind == SystemKind::lying_over && b == nullptr)
    throw std::invalid_argument("build_system: lying-over needs the blow-up data");
  CoefficientSystem s;
  s.kind = kind;
  s.complex = std::make_shared<const EquivariantComplex>(x);
  s.gamma = kind == SystemKind::constant ? Cocycle::trivial(g.order()) : gamma;
  std::map<Subgroup, std::size_t> cache;
  s.table_of.resize(x.dim + 1);
  s.basis.resize(x.dim + 1);
  for (std::size_t k = 0; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      if (kind == SystemKind::constant) {
        s.table_of[k].push_back(0);
        s.basis[k].push_back({0});
        continue;
      }
      const Subgroup& h = x.stabilizers[k][c];
      auto it = cache.find(h);
      if (it == cache.end()) {
        it = cache.emplace(h, s.tables.size()).first;
        s.tables.push_back(subgroup_table(g, h, gamma, max_order));
      }
      s.table_of[k].push_back(it->second);
      const auto& t = s.tables[it->second];
      if (kind == SystemKind::twisted) {
        std::vector<int> all(t.size());
        std::iota(all.begin(), all.end(), 0);
        s.basis[k].push_back(all);
      } else {
        s.basis[k].push_back(lying_over_basis(g, t, b->wprime[k][c], b->iota[k][c], gamma));
      }
    }
  return s;
}

// Restriction between any pair of cells whose stabilizers are nested.
inline IntMatrix sub_restriction(const CoefficientSystem& s, std::size_t k, std::size_t c, std::size_t j,
                                 std::size_t f) {
  if (s.kind == SystemKind::constant) return IntMatrix::identity(1);
  const IntMatrix& full = s.full_restriction(s.table_of[j][f], s.table_of[k][c]);
  IntMatrix out(s.basis[k][c].size(), s.basis[j][f].size());
  for (std::size_t a = 0; a < out.rows(); ++a)
    for (std::size_t b = 0; b < out.cols(); ++b) out(a, b) = full(s.basis[k][c][a], s.basis[j][f][b]);
  return out;
}

// Functoriality: transitivity of restriction along face chains, conjugation
// is an action, and conjugation commutes with restriction.
inline std::string system_defect(const CoefficientSystem& s) {
  const EquivariantComplex& x = *s.complex;
  const GroupData& g = *x.group;
  for (std::size_t k = 2; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c)
      for (const auto& i1 : x.cells[k][c].boundary)
        for (const auto& i2 : x.cells[k - 1][i1.face].boundary) {
          IntMatrix direct = sub_restriction(s, k, c, k - 2, i2.face);
          if (s.restriction(k, c, i1.face) * s.restriction(k - 1, i1.face, i2.face) != direct)
            return "restriction is not transitive at " + std::to_string(k) + "-cell " + std::to_string(c);
        }
  for (std::size_t k = 0; k <= x.dim; ++k)
    for (std::size_t c = 0; c < x.count(k); ++c) {
      for (int u = 0; u < g.order(); ++u)
        for (int v = 0; v < g.order(); ++v) {
          std::size_t vc = x.action[k][v][c].cell;
          if (s.conjugation(k, u, vc) * s.conjugation(k, v, c) != s.conjugation(k, g.mul(u, v), c))
            return "conjugation is not an action at " + std::to_string(k) + "-cell " + std::to_string(c);
        }
      if (k == 0) continue;
      for (const auto& inc : x.cells[k][c].boundary)
        for (int w = 0; w < g.order(); ++w) {
          std::size_t wc = x.action[k][w][c].cell, wf = x.action[k - 1][w][inc.face].cell;
          if (s.conjugation(k, w, c) * s.restriction(k, c, inc.face) !=
              sub_restriction(s, k, wc, k - 1, wf) * s.conjugation(k - 1, w, inc.face))
            return "conjugation does not commute with restriction at " + std::to_string(k) + "-cell " +
                   std::to_string(c);
        }
    }
  return "";
}

struct InvariantComplex {
  std::vector<IntMatrix> full_coboundary;  // [k]: C^k -> C^{k+1}
  std::vector<IntMatrix> basis;            // [k]: invariant sublattice, columns
  std::vector<IntMatrix> differential;     // [k]: invariants k -> k+1

  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> r;
    for (const auto& b : basis) r.push_back(b.cols());
    return r;
  }
};

namespace detail {

inline std::vector<std::size_t> cochain_offsets(const CoefficientSystem& s, std::size_t k) {
  std::vector<std::size_t> off{0};
  for (const auto& b : s.basis[k]) off.push_back(off.back() + b.size());
  return off;
}

inline void put_block(IntMatrix& m, std::size_t r0, std::size_t c0, const IntMatrix& b, int sign) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) += sign * b(i, j);
}

}  // namespace detail

// Action of w on C^k: (w f)(w c) = sign * Conj_w f(c).
inline IntMatrix cochain_action(const CoefficientSystem& s, std::size_t k, int w) {
  const auto& x = *s.complex;
  auto off = detail::cochain_offsets(s, k);
  IntMatrix a(off.back(), off.back());
  for (std::size_t c = 0; c < x.count(k); ++c) {
    const auto& im = x.action[k][w][c];
    detail::put_block(a, off[im.cell], off[c], s.conjugation(k, w, c), im.sign);
  }
  return a;
}

inline IntMatrix full_coboundary(const CoefficientSystem& s, std::size_t k) {
  const auto& x = *s.complex;
  auto src = detail::cochain_offsets(s, k);
  if (k >= x.dim) return IntMatrix(0, src.back());
  auto dst = detail::cochain_offsets(s, k + 1);
  IntMatrix d(dst.back(), src.back());
  for (std::size_t c = 0; c < x.count(k + 1); ++c)
    for (const auto& inc : x.cells[k + 1][c].boundary)
      detail::put_block(d, dst[c], src[inc.face], s.restriction(k + 1, c, inc.face), inc.sign);
  return d;
}

inline InvariantComplex invariant_cochain_complex(const CoefficientSystem& s) {
  const auto& x = *s.complex;
  const GroupData& g = *x.group;
  InvariantComplex out;
  for (std::size_t k = 0; k <= x.dim; ++k) {
    out.full_coboundary.push_back(full_coboundary(s, k));
    std::size_t n = s.total_rank(k);
    std::vector<IntMatrix> parts;
    for (int w : g.generators()) parts.push_back(cochain_action(s, k, w) - IntMatrix::identity(n));
    out.basis.push_back(kernel_lattice(IntMatrix::vstack(parts, n)));
  }
  for (std::size_t k = 0; k <= x.dim; ++k) {
    if (k == x.dim) {
      out.differential.push_back(IntMatrix(0, out.basis[k].cols()));
      continue;
    }
    IntMatrix image = out.full_coboundary[k] * out.basis[k];
    try {
      out.differential.push_back(solve_in_lattice(out.basis[k + 1], image));
    } catch (const std::domain_error&) {
      throw InvariantViolation("coboundary does not preserve invariant cochains in degree " + std::to_string(k));
    }
  }
  for (std::size_t k = 0; k + 1 < x.dim; ++k)
    if (!(out.differential[k + 1] * out.differential[k]).is_zero())
      throw InvariantViolation("invariant differential squares to nonzero in degree " + std::to_string(k));
  return out;
}

inline std::vector<AbelianGroupInv> cohomology_of(const InvariantComplex& c) {
  std::vector<AbelianGroupInv> h;
  for (std::size_t k = 0; k < c.basis.size(); ++k) {
    IntMatrix in = k == 0 ? IntMatrix(c.basis[0].cols(), 0) : c.differential[k - 1];
    h.push_back(cochain_cohomology(in, c.differential[k]));
  }
  return h;
}

inline std::vector<AbelianGroupInv> bredon_cohomology(const CoefficientSystem& s) {
  return cohomology_of(invariant_cochain_complex(s));
}

}  // namespace bredonk
