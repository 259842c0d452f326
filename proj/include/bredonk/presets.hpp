#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bredonk/scenario.hpp"

namespace bredonk {

namespace presets {

inline GeneratorSpec gen(const std::string& name, IntMatrix linear, RatVec translation) {
  return {name, AffineTorusMap{std::move(linear), std::move(translation)}};
}

inline FamilySpec walls(IntVec normal, std::vector<Rational> offsets, Rational period) {
  return {std::move(normal), std::move(offsets), period};
}

inline LocusSpec locus(const std::string& word, FamilySpec f) { return {{word, std::nullopt}, std::move(f)}; }

inline Scenario plane(const std::string& name, const std::string& description) {
  Scenario s;
  s.name = name;
  s.description = description;
  s.lattice = IntMatrix{{2, 0}, {0, 2}};
  return s;
}

// W_M = <s, t> dihedral of order 8 on (R/2Z)^2; the sliced lines through 0 are
// the fixed lines of s, -s, t, -t.
inline Scenario sp4(int k) {
  static const char* text[] = {
      "",
      "W = W_M, all four reflection loci sliced",
      "W = W_M, loci of s and -s sliced",
      "W = {1, s}, locus of s sliced",
      "W = {±1, ±t}, locus of t sliced",
      "W = {±1, ±t}, nothing sliced",
      "W = {1, t}, locus of t sliced",
      "W = {1, t}, nothing sliced",
      "W trivial, nothing sliced",
  };
  Scenario s = plane("sp4-case" + std::to_string(k), std::string("rank-two minimal Levi: ") + text[k]);
  auto s_gen = gen("s", IntMatrix{{0, 1}, {1, 0}}, {0, 0});
  auto t_gen = gen("t", IntMatrix{{1, 0}, {0, -1}}, {0, 0});
  auto m_gen = gen("-1", IntMatrix{{-1, 0}, {0, -1}}, {0, 0});
  auto f_s = walls({1, -1}, {0}, 2), f_ms = walls({1, 1}, {0}, 2);
  auto f_t = walls({0, 1}, {0}, 2), f_mt = walls({1, 0}, {0}, 2);
  switch (k) {
    case 1:
      s.generators = {s_gen, t_gen};
      s.sliced_locus = {locus("s", f_s), locus("s*t*s*t*s", f_ms), locus("t", f_t), locus("s*t*s", f_mt)};
      break;
    case 2:
      s.generators = {s_gen, t_gen};
      s.sliced_locus = {locus("s", f_s), locus("s*t*s*t*s", f_ms)};
      break;
    case 3:
      s.generators = {s_gen};
      s.sliced_locus = {locus("s", f_s)};
      break;
    case 4:
      s.generators = {m_gen, t_gen};
      s.sliced_locus = {locus("t", f_t)};
      break;
    case 5: s.generators = {m_gen, t_gen}; break;
    case 6:
      s.generators = {t_gen};
      s.sliced_locus = {locus("t", f_t)};
      break;
    case 7: s.generators = {t_gen}; break;
    default: break;
  }
  return s;
}

// Circle R/6Z with W = D3 generated by x -> x+2 and x -> -x; r_k : x -> 2k - x.
inline Scenario dim1(char pattern) {
  Scenario s;
  s.name = std::string("dim1-case-") + pattern;
  s.lattice = IntMatrix{{6}};
  s.generators = {gen("a", IntMatrix{{1}}, {2}), gen("r", IntMatrix{{-1}}, {0})};
  auto pt = [](std::vector<Rational> offs) { return walls({1}, std::move(offs), 6); };
  switch (pattern) {
    case 'a': s.description = "dihedral W on a circle, nothing sliced"; break;
    case 'b':
      s.description = "dihedral W on a circle, the odd orbit sliced";
      s.sliced_locus = {locus("r", pt({3})), locus("a*r", pt({1})), locus("a*a*r", pt({5}))};
      break;
    default:
      s.description = "dihedral W on a circle, every reflection point sliced";
      s.sliced_locus = {locus("r", pt({0, 3})), locus("a*r", pt({1, 4})), locus("a*a*r", pt({2, 5}))};
      break;
  }
  return s;
}

inline Scenario dim1_free() {
  Scenario s;
  s.name = "dim1-free";
  s.description = "order-three rotation of a circle, free";
  s.lattice = IntMatrix{{6}};
  s.generators = {gen("a", IntMatrix{{1}}, {2})};
  return s;
}

inline Scenario klein_bottle() {
  Scenario s = plane("klein-bottle", "glide reflection on a torus; the quotient is a Klein bottle");
  s.generators = {gen("g", IntMatrix{{1, 0}, {0, -1}}, {1, 0})};
  return s;
}

inline Scenario discrete_series(int k) {
  Scenario s = plane("discrete-series-" + std::to_string(k), "free rotation of order " + std::to_string(k) +
                                                                  " along one circle factor");
  Rational step(2, k);
  step.canonicalize();
  s.generators = {gen("u", IntMatrix{{1, 0}, {0, 1}}, {step, 0})};
  return s;
}

// {±1, ±t} with gamma((a,b),(c,d)) = (-1)^{bc}, where (a,b) names (-1)^a t^b.
inline Scenario twisted_klein_four() {
  Scenario s = plane("twisted-klein-four", "{±1, ±t} on a torus with a nontrivial 2-cocycle");
  s.generators = {gen("-1", IntMatrix{{-1, 0}, {0, -1}}, {0, 0}), gen("t", IntMatrix{{1, 0}, {0, -1}}, {0, 0})};
  s.cocycle.modulus = 2;
  for (const char* a : {"t", "-1*t"})
    for (const char* b : {"-1", "-1*t"}) s.cocycle.entries.push_back({{a, std::nullopt}, {b, std::nullopt}, 1});
  return s;
}

}  // namespace presets

struct PresetInfo {
  std::string name;
  std::function<Scenario()> make;
};

inline const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = [] {
    std::vector<PresetInfo> c;
    for (int k = 1; k <= 8; ++k) c.push_back({"sp4-case" + std::to_string(k), [k] { return presets::sp4(k); }});
    for (char p : {'a', 'b', 'c'}) c.push_back({std::string("dim1-case-") + p, [p] { return presets::dim1(p); }});
    c.push_back({"dim1-free", presets::dim1_free});
    c.push_back({"klein-bottle", presets::klein_bottle});
    for (int k = 1; k <= 3; ++k)
      c.push_back({"discrete-series-" + std::to_string(k), [k] { return presets::discrete_series(k); }});
    c.push_back({"twisted-klein-four", presets::twisted_klein_four});
    return c;
  }();
  return catalog;
}

inline Scenario preset(const std::string& name) {
  for (const auto& p : preset_catalog())
    if (p.name == name) return p.make();
  throw SchemaError("unknown preset '" + name + "' (see list-presets)");
}

}  // namespace bredonk
