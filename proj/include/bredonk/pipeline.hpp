#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bredonk/arrangement.hpp"
#include "bredonk/blowup.hpp"
#include "bredonk/bredon.hpp"
#include "bredonk/crossed.hpp"
#include "bredonk/ktheory.hpp"
#include "bredonk/scenario.hpp"

namespace bredonk {

struct RunOptions {
  bool blowup = true;
  bool x_side = true;
  bool full = false;
  std::size_t max_group_order = 64;

  static RunOptions from(const ScenarioOptions& o) {
    RunOptions r;
    r.blowup = o.systems != "x-side";
    r.x_side = o.systems != "blowup";
    r.full = o.check_invariants == "full";
    return r;
  }
};

struct SystemResult {
  std::string name;
  std::vector<std::size_t> cochain_ranks;
  std::vector<AbelianGroupInv> cohomology;
};

struct CrossedDiagnostic {
  std::string basepoint;
  std::size_t orbit_size = 0;
  std::size_t stabilizer_order = 0;
  std::size_t wprime_order = 0;
  std::size_t dual_points = 0;
  std::size_t center_dimension = 0;
  std::size_t ideal_rank = 0;
};

struct Report {
  std::string scenario;
  std::size_t dim = 0;
  int group_order = 0;
  int cocycle_modulus = 1;
  std::vector<std::size_t> cells_x, cells_blowup;
  std::optional<SystemResult> blowup, x_side;
  SystemResult constant;
  std::optional<CrossCheck> cross;
  std::vector<E2Entry> e2;
  KGroups k;
  std::vector<CrossedDiagnostic> crossed;
  std::vector<InvariantCheck> checks;
  std::string check_level = "fast";

  bool ok() const { return all_ok(checks); }
};

namespace detail {

inline std::vector<std::size_t> cell_counts(const EquivariantComplex& x) {
  std::vector<std::size_t> c;
  for (std::size_t k = 0; k <= x.dim; ++k) c.push_back(x.count(k));
  return c;
}

inline SystemResult run_system(const std::string& name, const CoefficientSystem& s) {
  auto ic = invariant_cochain_complex(s);
  return {name, ic.ranks(), cohomology_of(ic)};
}

inline void check(std::vector<InvariantCheck>& out, const std::string& name, const std::string& defect) {
  out.push_back({name, defect.empty(), defect});
}

// Crossed products over the vertex orbits of X, with the W' and iota data
// of the blow-up. Skipped above 64 basis elements.
inline void crossed_diagnostics(Report& r, const BlowupResult& b, const CoefficientSystem* lying, bool full,
                                std::size_t max_order) {
  const EquivariantComplex& x = b.X;
  const GroupData& g = *x.group;
  auto labels = x.orbit_labels(0);
  std::vector<int> done(x.orbit_count(0), 0);
  std::string assoc, inv, proj, ideal, dual, blocks, corner, rrank;
  for (std::size_t v = 0; v < x.count(0); ++v) {
    if (done[labels[v]]) continue;
    done[labels[v]] = 1;
    std::vector<int> pts;
    for (std::size_t u = 0; u < x.count(0); ++u)
      if (labels[u] == labels[v]) pts.push_back(static_cast<int>(u));
    if (pts.size() * g.order() > 64) continue;
    WSet o;
    std::vector<Subgroup> wp;
    std::vector<PhaseCharacter> io;
    for (int p : pts) {
      o.labels.push_back("v" + std::to_string(p));
      wp.push_back(b.wprime[0][p]);
      io.push_back(b.iota[0][p]);
    }
    o.act.assign(g.order(), std::vector<int>(pts.size()));
    for (int w = 0; w < g.order(); ++w)
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto it = std::find(pts.begin(), pts.end(), static_cast<int>(x.action[0][w][pts[i]].cell));
        o.act[w][i] = static_cast<int>(it - pts.begin());
      }
    auto a = build_crossed_product(x.group, o, b.gamma);
    auto d = orbit_dual(a, max_order);
    auto is = ideal_summand(a, wp, io, max_order);
    CrossedDiagnostic cd{o.labels[0], pts.size(), x.stabilizers[0][pts[0]].size(), wp[0].size(), d.size(),
                         center_dimension(a), is.k0_rank};
    r.crossed.push_back(cd);
    std::string where = " at " + cd.basepoint;
    if (cd.dual_points != cd.center_dimension && dual.empty()) dual = "dual count differs from centre dimension" + where;
    std::size_t sum = 0;
    for (const auto& p : d) sum += p.dimension * p.dimension;
    if (sum != a.dim() && blocks.empty()) blocks = "block dimensions do not sum to |O||W|" + where;
    if (corner_dimension(a, 0) != cd.stabilizer_order && corner.empty()) corner = "dim P_x A P_x != |W_x|" + where;
    if (!(is.idempotent && is.self_adjoint && is.central) && proj.empty())
      proj = "P is not a central self-adjoint idempotent" + where;
    if ((is.k0_rank != is.center_rank || is.trace != Rational(is.block_dimension)) && ideal.empty())
      ideal = "ideal rank or trace disagrees with the centre computation" + where;
    if (lying && lying->rank(0, pts[0]) != is.k0_rank && rrank.empty())
      rrank = "ideal rank differs from the R rank" + where;
    if (full) {
      if (assoc.empty()) assoc = associativity_defect(a);
      if (inv.empty()) inv = involution_defect(a);
    }
  }
  check(r.checks, "crossed products: dual count equals centre dimension", dual);
  check(r.checks, "crossed products: block dimensions sum to |O||W|", blocks);
  check(r.checks, "crossed products: P_x A P_x has dimension |W_x|", corner);
  check(r.checks, "crossed products: P is a central self-adjoint idempotent", proj);
  check(r.checks, "crossed products: ideal rank and trace agree with the centre", ideal);
  if (lying) check(r.checks, "crossed products: ideal rank equals the R rank at the basepoint", rrank);
  if (full) {
    check(r.checks, "crossed products: associative", assoc);
    check(r.checks, "crossed products: (ab)* = b*a*", inv);
  }
}

}  // namespace detail

inline Report run_scenario(const Scenario& s, const RunOptions& opt) {
  Report r;
  r.scenario = s.name;
  r.check_level = opt.full ? "full" : "fast";
  auto g = std::make_shared<const GroupData>(scenario_group(s, opt.max_group_order));
  Lattice lat = scenario_lattice(s);
  r.dim = lat.dim();
  r.group_order = g->order();
  Cocycle gamma = scenario_cocycle(s, *g);
  r.cocycle_modulus = gamma.modulus;
  SlicedLocusSpec spec = scenario_loci(s, *g);

  std::vector<HyperplaneFamily> fams;
  for (std::size_t i = 0; i < s.hyperplanes.size(); ++i)
    fams.push_back(scenario_family(lat, s.hyperplanes[i], "hyperplanes[" + std::to_string(i) + "]"));
  for (const auto& l : spec.loci) fams.push_back(l.family);
  EquivariantComplex x = equivariant_torus_complex(g, fams);
  detail::check(r.checks, "X stabilizers fix their cells pointwise", w_cw_defect(x));
  detail::check(r.checks, "W acts on X by chain maps", equivariance_defect(x));

  BlowupResult b = build_blowup(x, spec, gamma);
  r.cells_x = detail::cell_counts(b.X);
  r.cells_blowup = detail::cell_counts(b.Xt);
  for (const auto& c : validate_blowup(b)) r.checks.push_back({"blow-up: " + c.name, c.ok, c.detail});

  auto constant = build_system(SystemKind::constant, x, gamma);
  r.constant = detail::run_system("constant", constant);
  std::optional<CoefficientSystem> wsys, rsys;
  if (opt.blowup) {
    wsys = build_system(SystemKind::twisted, b.Xt, gamma, nullptr, opt.max_group_order);
    r.blowup = detail::run_system("blowup", *wsys);
  }
  if (opt.x_side) {
    rsys = build_system(SystemKind::lying_over, b.X, gamma, &b, opt.max_group_order);
    r.x_side = detail::run_system("x-side", *rsys);
  }
  if (r.blowup && r.x_side) {
    r.cross = cross_check(r.x_side->cohomology, r.blowup->cohomology);
    r.checks.push_back({"X-side and blow-up cohomology agree", r.cross->ok, r.cross->detail});
  }
  const auto& h = r.blowup ? r.blowup->cohomology : r.x_side->cohomology;
  r.e2 = e2_page(h);
  r.k = k_groups(h);

  std::string parity, torsion;
  for (const auto& e : r.e2)
    if ((((e.q + static_cast<int>(r.dim)) % 2) + 2) % 2 == 0) parity = "nonzero entry where q+n is even";
  for (const auto* sr : {r.blowup ? &*r.blowup : nullptr, r.x_side ? &*r.x_side : nullptr, &r.constant})
    if (sr && !sr->cohomology[0].torsion.empty()) torsion = sr->name + " H^0 has torsion";
  detail::check(r.checks, "E2 vanishes where q+n is even", parity);
  detail::check(r.checks, "H^0 is torsion-free", torsion);
  std::size_t total = 0;
  for (const auto& grp : h) total += grp.rank;
  detail::check(r.checks, "K free ranks add up to the Bredon ranks",
                r.k.rank0 + r.k.rank1 == total ? "" : "rank bookkeeping mismatch");
  if (r.k.exact)
    detail::check(r.checks, "exact K-groups agree with the rational ranks",
                  r.k.k0->rank == r.k.rank0 && r.k.k1->rank == r.k.rank1 ? "" : "rank mismatch");

  detail::crossed_diagnostics(r, b, rsys ? &*rsys : nullptr, opt.full, opt.max_group_order);

  if (opt.full) {
    std::string tables;
    for (const auto* sys : {wsys ? &*wsys : nullptr, rsys ? &*rsys : nullptr})
      if (sys)
        for (const auto& t : sys->tables)
          if (auto d = table_defect(t); !d.empty() && tables.empty()) tables = d;
    detail::check(r.checks, "stabilizer character tables are orthonormal", tables);
    detail::check(r.checks, "cocycle satisfies the 2-cocycle identity", gamma.defect(*g));
    detail::check(r.checks, "constant system is functorial", system_defect(constant));
    if (wsys) detail::check(r.checks, "twisted system on the blow-up is functorial", system_defect(*wsys));
    if (rsys) detail::check(r.checks, "lying-over system on X is functorial", system_defect(*rsys));
    if (r.dim <= 2) {
      auto bx = install_action(barycentric_subdivision(x), g);
      auto bb = build_blowup(bx, spec, gamma);
      std::string refine;
      if (r.blowup) {
        auto h2 = bredon_cohomology(build_system(SystemKind::twisted, bb.Xt, gamma, nullptr, opt.max_group_order));
        if (h2 != r.blowup->cohomology) refine = "blow-up cohomology changes under subdivision";
      }
      if (r.x_side && refine.empty()) {
        auto h2 = bredon_cohomology(build_system(SystemKind::lying_over, bb.X, gamma, &bb, opt.max_group_order));
        if (h2 != r.x_side->cohomology) refine = "X-side cohomology changes under subdivision";
      }
      detail::check(r.checks, "cohomology is unchanged under barycentric subdivision", refine);
    }
  }
  return r;
}

// ---------- rendering ----------

namespace detail {

inline std::string join_groups(const std::vector<AbelianGroupInv>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? ", " : "") + h[i].str();
  return "(" + s + ")";
}

template <class T>
std::string join_numbers(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline ojson system_json(const SystemResult& s) {
  ojson o;
  o["cochain_ranks"] = s.cochain_ranks;
  ojson h = ojson::array();
  for (const auto& g : s.cohomology) h.push_back(g.str());
  o["cohomology"] = h;
  return o;
}

}  // namespace detail

inline std::string render_json(const Report& r) {
  using detail::ojson;
  ojson o;
  o["scenario"] = r.scenario;
  o["dimension"] = r.dim;
  o["group_order"] = r.group_order;
  o["cocycle_modulus"] = r.cocycle_modulus;
  o["cells"]["X"] = r.cells_x;
  o["cells"]["X_blowup"] = r.cells_blowup;
  if (r.blowup) o["systems"]["blowup"] = detail::system_json(*r.blowup);
  if (r.x_side) o["systems"]["x_side"] = detail::system_json(*r.x_side);
  o["systems"]["constant"] = detail::system_json(r.constant);
  if (r.cross) o["cross_check"] = {{"ok", r.cross->ok}, {"detail", r.cross->detail}};
  else o["cross_check"] = "skipped";
  ojson e2 = ojson::array();
  for (const auto& e : r.e2) e2.push_back({{"p", e.p}, {"q", e.q}, {"group", e.group.str()}});
  o["e2"] = e2;
  ojson k;
  k["exact"] = r.k.exact;
  if (r.k.exact) {
    k["K0"] = r.k.k0->str();
    k["K1"] = r.k.k1->str();
  }
  k["rational_ranks"] = {r.k.rank0, r.k.rank1};
  if (!r.k.caveat.empty()) k["caveat"] = r.k.caveat;
  o["k_theory"] = k;
  ojson cp = ojson::array();
  for (const auto& c : r.crossed)
    cp.push_back({{"basepoint", c.basepoint},
                  {"orbit_size", c.orbit_size},
                  {"stabilizer_order", c.stabilizer_order},
                  {"wprime_order", c.wprime_order},
                  {"dual_points", c.dual_points},
                  {"center_dimension", c.center_dimension},
                  {"ideal_rank", c.ideal_rank}});
  o["crossed_products"] = cp;
  o["check_level"] = r.check_level;
  ojson ch = ojson::array();
  for (const auto& c : r.checks) {
    ojson e{{"name", c.name}, {"ok", c.ok}};
    if (!c.ok) e["detail"] = c.detail;
    ch.push_back(e);
  }
  o["checks"] = ch;
  return o.dump(2) + "\n";
}

inline std::string render_table(const Report& r) {
  std::ostringstream os;
  auto row = [&](const std::string& label, const std::string& value) {
    os << label << std::string(label.size() < 22 ? 22 - label.size() : 1, ' ') << value << "\n";
  };
  row("scenario", r.scenario);
  row("dimension", std::to_string(r.dim));
  row("|W|", std::to_string(r.group_order));
  if (r.cocycle_modulus != 1) row("cocycle modulus", std::to_string(r.cocycle_modulus));
  row("cells X", detail::join_numbers(r.cells_x));
  row("cells X~", detail::join_numbers(r.cells_blowup));
  if (r.blowup)
    row("H*(X~, W)", detail::join_groups(r.blowup->cohomology) + "  cochain ranks " +
                         detail::join_numbers(r.blowup->cochain_ranks));
  if (r.x_side)
    row("H*(X, R)", detail::join_groups(r.x_side->cohomology) + "  cochain ranks " +
                        detail::join_numbers(r.x_side->cochain_ranks));
  row("H*(X, Z) constant", detail::join_groups(r.constant.cohomology));
  row("cross-check", r.cross ? (r.cross->ok ? "ok" : "FAILED: " + r.cross->detail) : "skipped");
  std::string e2;
  for (const auto& e : r.e2)
    e2 += (e2.empty() ? "" : "  ") + std::string("E(") + std::to_string(e.p) + "," + std::to_string(e.q) + ")=" + e.group.str();
  row("E2 (nonzero)", e2.empty() ? "none" : e2);
  if (r.k.exact) {
    row("K0", r.k.k0->str());
    row("K1", r.k.k1->str());
  } else {
    row("K0, K1", "not determined integrally");
    row("caveat", r.k.caveat);
  }
  row("rational ranks", std::to_string(r.k.rank0) + ", " + std::to_string(r.k.rank1));
  for (const auto& c : r.crossed)
    row("crossed " + c.basepoint, "|O|=" + std::to_string(c.orbit_size) + " |W_x|=" + std::to_string(c.stabilizer_order) +
                                      " |W'_x|=" + std::to_string(c.wprime_order) + " dual=" + std::to_string(c.dual_points) +
                                      " ideal=" + std::to_string(c.ideal_rank));
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.ok;
  row("checks (" + r.check_level + ")", std::to_string(passed) + "/" + std::to_string(r.checks.size()) + " passed");
  for (const auto& c : r.checks)
    if (!c.ok) row("  FAILED", c.name + ": " + c.detail);
  return os.str();
}

}  // namespace bredonk
