#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bredonk/arrangement.hpp"
#include "bredonk/blowup.hpp"
#include "bredonk/errors.hpp"
#include "bredonk/groups.hpp"

namespace bredonk {

// A group element named either by a word in the generator names ("s*t",
// "1" for the identity) or by its affine map.
struct ElementRef {
  std::string word;
  std::optional<AffineTorusMap> map;

  bool operator==(const ElementRef& o) const {
    if (word != o.word || map.has_value() != o.map.has_value()) return false;
    return !map || (map->linear == o.map->linear && map->translation == o.map->translation);
  }
};

struct GeneratorSpec {
  std::string name;
  AffineTorusMap map;
  bool operator==(const GeneratorSpec& o) const {
    return name == o.name && map.linear == o.map.linear && map.translation == o.map.translation;
  }
};

struct CocycleEntry {
  ElementRef a, b;
  long exponent = 0;
  bool operator==(const CocycleEntry& o) const = default;
};

struct CocycleSpec {
  int modulus = 1;
  std::vector<CocycleEntry> entries;  // omitted pairs have exponent 0
  bool operator==(const CocycleSpec& o) const = default;
};

struct FamilySpec {
  IntVec normal;
  std::vector<Rational> offsets;
  std::optional<Rational> period;
  bool operator==(const FamilySpec& o) const = default;
};

struct LocusSpec {
  ElementRef reflection;
  FamilySpec family;
  bool operator==(const LocusSpec& o) const = default;
};

struct IotaSpec {
  ElementRef reflection;
  std::size_t component = 0;
  Rational phase;
  bool operator==(const IotaSpec& o) const = default;
};

struct ScenarioOptions {
  std::string systems = "both";        // blowup | x-side | both
  std::string check_invariants = "fast";  // fast | full
  bool operator==(const ScenarioOptions& o) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  IntMatrix lattice;  // columns are basis vectors
  std::vector<GeneratorSpec> generators;
  CocycleSpec cocycle;
  std::vector<FamilySpec> hyperplanes;  // extra walls for the cell structure
  std::vector<LocusSpec> sliced_locus;
  std::vector<IotaSpec> iota;
  ScenarioOptions options;

  bool operator==(const Scenario& o) const {
    return name == o.name && description == o.description && lattice == o.lattice &&
           generators == o.generators && cocycle == o.cocycle && hyperplanes == o.hyperplanes &&
           sliced_locus == o.sliced_locus && iota == o.iota && options == o.options;
  }
};

namespace detail {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] inline void schema_fail(const std::string& field, const std::string& what) {
  throw SchemaError("field '" + field + "': " + what);
}

inline const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline Rational read_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string())
    if (auto q = parse_rational(j.get<std::string>())) return *q;
  schema_fail(path, "expected an integer or a \"p/q\" string");
}

inline Integer read_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    auto q = parse_rational(j.get<std::string>());
    if (q && q->get_den() == 1) return q->get_num();
  }
  schema_fail(path, "expected an integer");
}

inline IntVec read_int_vector(const json& j, const std::string& path, std::optional<std::size_t> len = {}) {
  if (!j.is_array()) schema_fail(path, "expected an array of integers");
  if (len && j.size() != *len) schema_fail(path, "expected length " + std::to_string(*len));
  IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_integer(j[i], join(path, i)));
  return v;
}

inline RatVec read_rat_vector(const json& j, const std::string& path, std::size_t len) {
  if (!j.is_array() || j.size() != len) schema_fail(path, "expected an array of " + std::to_string(len) + " rationals");
  RatVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_rational(j[i], join(path, i)));
  return v;
}

// Rows of the JSON become rows of the matrix.
inline IntMatrix read_square(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n) schema_fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " integer matrix");
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = read_int_vector(j[i], join(path, i), n);
    for (std::size_t c = 0; c < n; ++c) m(i, c) = row[c];
  }
  return m;
}

inline AffineTorusMap read_map(const json& j, const std::string& path, std::size_t n) {
  AffineTorusMap m;
  m.linear = read_square(need(j, "linear", path), join(path, "linear"), n);
  m.translation = j.contains("translation") ? read_rat_vector(j["translation"], join(path, "translation"), n)
                                            : RatVec(n, Rational(0));
  return m;
}

inline ElementRef read_ref(const json& j, const std::string& path, std::size_t n) {
  if (j.is_string()) {
    if (j.get<std::string>().empty()) schema_fail(path, "empty element word");
    return {j.get<std::string>(), std::nullopt};
  }
  if (j.is_object()) return {"", read_map(j, path, n)};
  schema_fail(path, "expected a word string or an object with \"linear\" and \"translation\"");
}

inline FamilySpec read_family(const json& j, const std::string& path, std::size_t n) {
  FamilySpec f;
  f.normal = read_int_vector(need(j, "normal", path), join(path, "normal"), n);
  const json& offs = need(j, "offsets", path);
  if (!offs.is_array() || offs.empty()) schema_fail(join(path, "offsets"), "expected a nonempty array of rationals");
  for (std::size_t i = 0; i < offs.size(); ++i) f.offsets.push_back(read_rational(offs[i], join(join(path, "offsets"), i)));
  if (j.contains("period")) f.period = read_rational(j["period"], join(path, "period"));
  return f;
}

inline void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema_fail(path.empty() ? "(root)" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) schema_fail(join(path, it.key()), "unknown field");
  }
}

inline ojson write_rational(const Rational& q) { return q.get_str(); }

inline ojson write_int_vector(const IntVec& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

inline ojson write_matrix(const IntMatrix& m) {
  ojson a = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(write_int_vector(m.row(i)));
  return a;
}

inline ojson write_map(const AffineTorusMap& m) {
  ojson o;
  o["linear"] = write_matrix(m.linear);
  ojson t = ojson::array();
  for (const auto& q : m.translation) t.push_back(write_rational(q));
  o["translation"] = t;
  return o;
}

inline ojson write_ref(const ElementRef& r) { return r.map ? write_map(*r.map) : ojson(r.word); }

inline ojson write_family(const FamilySpec& f) {
  ojson o;
  o["normal"] = write_int_vector(f.normal);
  ojson offs = ojson::array();
  for (const auto& q : f.offsets) offs.push_back(write_rational(q));
  o["offsets"] = offs;
  if (f.period) o["period"] = write_rational(*f.period);
  return o;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) schema_fail("(root)", "expected an object");
  expect_keys(j, "", {"name", "description", "lattice", "generators", "cocycle", "hyperplanes", "sliced_locus", "iota",
                      "options"});
  Scenario s;
  const json& name = need(j, "name", "");
  if (!name.is_string() || name.get<std::string>().empty()) schema_fail("name", "expected a nonempty string");
  s.name = name.get<std::string>();
  if (j.contains("description")) {
    if (!j["description"].is_string()) schema_fail("description", "expected a string");
    s.description = j["description"].get<std::string>();
  }
  const json& lat = need(j, "lattice", "");
  if (!lat.is_array() || lat.empty()) schema_fail("lattice", "expected a nonempty list of basis vectors");
  const std::size_t n = lat.size();
  if (n > 3) throw UnsupportedDimension("field 'lattice': dimension " + std::to_string(n) + " exceeds 3");
  s.lattice = IntMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = read_int_vector(lat[i], join("lattice", i), n);
    for (std::size_t r = 0; r < n; ++r) s.lattice(r, i) = v[r];
  }
  if (determinant(to_rational(s.lattice)) == 0) schema_fail("lattice", "basis vectors are linearly dependent");

  if (j.contains("generators")) {
    const json& gens = j["generators"];
    if (!gens.is_array()) schema_fail("generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::string p = join("generators", i);
      expect_keys(gens[i], p, {"name", "linear", "translation"});
      const json& nm = need(gens[i], "name", p);
      if (!nm.is_string()) schema_fail(join(p, "name"), "expected a string");
      std::string gname = nm.get<std::string>();
      if (gname.empty() || gname == "1" || gname.find('*') != std::string::npos)
        schema_fail(join(p, "name"), "generator names must be nonempty, not \"1\", and free of '*'");
      for (const auto& g : s.generators)
        if (g.name == gname) schema_fail(join(p, "name"), "duplicate generator name");
      s.generators.push_back({gname, read_map(gens[i], p, n)});
    }
  }
  if (j.contains("cocycle")) {
    const json& c = j["cocycle"];
    expect_keys(c, "cocycle", {"modulus", "entries"});
    const json& m = need(c, "modulus", "cocycle");
    if (!m.is_number_integer() || m.get<long>() < 1 || m.get<long>() > 64)
      schema_fail("cocycle.modulus", "expected an integer in 1..64");
    s.cocycle.modulus = m.get<int>();
    if (c.contains("entries")) {
      if (!c["entries"].is_array()) schema_fail("cocycle.entries", "expected an array");
      for (std::size_t i = 0; i < c["entries"].size(); ++i) {
        const json& e = c["entries"][i];
        std::string p = join("cocycle.entries", i);
        expect_keys(e, p, {"a", "b", "exponent"});
        CocycleEntry ce;
        ce.a = read_ref(need(e, "a", p), join(p, "a"), n);
        ce.b = read_ref(need(e, "b", p), join(p, "b"), n);
        const json& ex = need(e, "exponent", p);
        if (!ex.is_number_integer()) schema_fail(join(p, "exponent"), "expected an integer");
        ce.exponent = ex.get<long>();
        s.cocycle.entries.push_back(ce);
      }
    }
  }
  if (j.contains("hyperplanes")) {
    if (!j["hyperplanes"].is_array()) schema_fail("hyperplanes", "expected an array");
    for (std::size_t i = 0; i < j["hyperplanes"].size(); ++i) {
      std::string p = join("hyperplanes", i);
      expect_keys(j["hyperplanes"][i], p, {"normal", "offsets", "period"});
      s.hyperplanes.push_back(read_family(j["hyperplanes"][i], p, n));
    }
  }
  if (j.contains("sliced_locus")) {
    if (!j["sliced_locus"].is_array()) schema_fail("sliced_locus", "expected an array");
    for (std::size_t i = 0; i < j["sliced_locus"].size(); ++i) {
      const json& e = j["sliced_locus"][i];
      std::string p = join("sliced_locus", i);
      expect_keys(e, p, {"reflection", "normal", "offsets", "period"});
      s.sliced_locus.push_back({read_ref(need(e, "reflection", p), join(p, "reflection"), n), read_family(e, p, n)});
    }
  }
  if (j.contains("iota")) {
    if (!j["iota"].is_array()) schema_fail("iota", "expected an array");
    for (std::size_t i = 0; i < j["iota"].size(); ++i) {
      const json& e = j["iota"][i];
      std::string p = join("iota", i);
      expect_keys(e, p, {"reflection", "component", "phase"});
      IotaSpec io;
      io.reflection = read_ref(need(e, "reflection", p), join(p, "reflection"), n);
      const json& comp = need(e, "component", p);
      if (!comp.is_number_integer() || comp.get<long>() < 0) schema_fail(join(p, "component"), "expected a nonnegative integer");
      io.component = comp.get<std::size_t>();
      io.phase = read_rational(need(e, "phase", p), join(p, "phase"));
      s.iota.push_back(io);
    }
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    expect_keys(o, "options", {"systems", "check_invariants"});
    if (o.contains("systems")) {
      if (!o["systems"].is_string()) schema_fail("options.systems", "expected a string");
      s.options.systems = o["systems"].get<std::string>();
      if (s.options.systems != "blowup" && s.options.systems != "x-side" && s.options.systems != "both")
        schema_fail("options.systems", "expected blowup, x-side or both");
    }
    if (o.contains("check_invariants")) {
      if (!o["check_invariants"].is_string()) schema_fail("options.check_invariants", "expected a string");
      s.options.check_invariants = o["check_invariants"].get<std::string>();
      if (s.options.check_invariants != "fast" && s.options.check_invariants != "full")
        schema_fail("options.check_invariants", "expected fast or full");
    }
  }
  return s;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  using namespace detail;
  ojson o;
  o["name"] = s.name;
  if (!s.description.empty()) o["description"] = s.description;
  ojson lat = ojson::array();
  for (std::size_t c = 0; c < s.lattice.cols(); ++c) lat.push_back(write_int_vector(s.lattice.column(c)));
  o["lattice"] = lat;
  ojson gens = ojson::array();
  for (const auto& g : s.generators) {
    ojson e;
    e["name"] = g.name;
    auto m = write_map(g.map);
    e["linear"] = m["linear"];
    e["translation"] = m["translation"];
    gens.push_back(e);
  }
  o["generators"] = gens;
  if (s.cocycle.modulus != 1 || !s.cocycle.entries.empty()) {
    ojson c;
    c["modulus"] = s.cocycle.modulus;
    ojson es = ojson::array();
    for (const auto& e : s.cocycle.entries) {
      ojson x;
      x["a"] = write_ref(e.a);
      x["b"] = write_ref(e.b);
      x["exponent"] = e.exponent;
      es.push_back(x);
    }
    c["entries"] = es;
    o["cocycle"] = c;
  }
  if (!s.hyperplanes.empty()) {
    ojson hs = ojson::array();
    for (const auto& f : s.hyperplanes) hs.push_back(write_family(f));
    o["hyperplanes"] = hs;
  }
  if (!s.sliced_locus.empty()) {
    ojson ls = ojson::array();
    for (const auto& l : s.sliced_locus) {
      ojson e;
      e["reflection"] = write_ref(l.reflection);
      ojson fam = write_family(l.family);
      for (auto& [k, v] : fam.items()) e[k] = v;
      ls.push_back(e);
    }
    o["sliced_locus"] = ls;
  }
  if (!s.iota.empty()) {
    ojson is = ojson::array();
    for (const auto& i : s.iota) {
      ojson e;
      e["reflection"] = write_ref(i.reflection);
      e["component"] = i.component;
      e["phase"] = write_rational(i.phase);
      is.push_back(e);
    }
    o["iota"] = is;
  }
  ojson opt;
  opt["systems"] = s.options.systems;
  opt["check_invariants"] = s.options.check_invariants;
  o["options"] = opt;
  return o;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

// ---------- resolution against the closed group ----------

inline int resolve_element(const GroupData& g, const std::vector<GeneratorSpec>& gens, const ElementRef& r,
                           const std::string& field) {
  if (r.map) {
    if (auto e = find_element(g, *r.map)) return *e;
    throw SchemaError("field '" + field + "': affine map is not an element of the closed group");
  }
  if (r.word == "1") return 0;
  int acc = 0;
  std::stringstream ss(r.word);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    auto it = std::find_if(gens.begin(), gens.end(), [&](const GeneratorSpec& x) { return x.name == tok; });
    if (it == gens.end()) throw SchemaError("field '" + field + "': unknown generator '" + tok + "'");
    acc = g.mul(acc, *find_element(g, it->map));
  }
  return acc;
}

inline std::vector<std::string> generator_names(const Scenario& s) {
  std::vector<std::string> out;
  for (const auto& g : s.generators) out.push_back(g.name);
  return out;
}

inline Lattice scenario_lattice(const Scenario& s) { return Lattice(s.lattice); }

inline GroupData scenario_group(const Scenario& s, std::size_t bound) {
  Lattice lat = scenario_lattice(s);
  std::vector<AffineTorusMap> maps;
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    const auto& m = s.generators[i].map;
    if (!lat.preserved_by(m.linear))
      throw SchemaError("field 'generators[" + std::to_string(i) + "].linear': does not preserve the lattice");
    if (abs(determinant(to_rational(m.linear))) != 1)
      throw SchemaError("field 'generators[" + std::to_string(i) + "].linear': not invertible over Z");
    maps.push_back(m);
  }
  return close_affine_group(lat, maps, generator_names(s), bound);
}

inline Cocycle scenario_cocycle(const Scenario& s, const GroupData& g) {
  Cocycle c = Cocycle::trivial(g.order());
  c.modulus = s.cocycle.modulus;
  for (std::size_t i = 0; i < s.cocycle.entries.size(); ++i) {
    const auto& e = s.cocycle.entries[i];
    std::string p = "cocycle.entries[" + std::to_string(i) + "]";
    int a = resolve_element(g, s.generators, e.a, p + ".a"), b = resolve_element(g, s.generators, e.b, p + ".b");
    c.set(a, b, static_cast<int>(((e.exponent % c.modulus) + c.modulus) % c.modulus));
  }
  if (auto d = c.defect(g); !d.empty()) throw SchemaError("field 'cocycle': " + d);
  return c;
}

inline HyperplaneFamily scenario_family(const Lattice& lat, const FamilySpec& f, const std::string& field) {
  RatVec normal;
  for (const auto& v : f.normal) normal.push_back(Rational(v));
  bool zero = true;
  for (const auto& v : f.normal) zero = zero && v == 0;
  if (zero) throw SchemaError("field '" + field + ".normal': zero normal vector");
  try {
    return HyperplaneFamily::make(lat, normal, f.offsets, f.period);
  } catch (const SchemaError& e) {
    throw SchemaError("field '" + field + "': " + e.what());
  }
}

inline SlicedLocusSpec scenario_loci(const Scenario& s, const GroupData& g) {
  SlicedLocusSpec out;
  Lattice lat = scenario_lattice(s);
  for (std::size_t i = 0; i < s.sliced_locus.size(); ++i) {
    std::string p = "sliced_locus[" + std::to_string(i) + "]";
    int r = resolve_element(g, s.generators, s.sliced_locus[i].reflection, p + ".reflection");
    if (r == 0 || g.power(r, 2) != 0) throw SchemaError("field '" + p + ".reflection': not an element of order 2");
    out.loci.push_back({r, scenario_family(lat, s.sliced_locus[i].family, p)});
  }
  for (std::size_t i = 0; i < s.iota.size(); ++i) {
    std::string p = "iota[" + std::to_string(i) + "]";
    out.iota.push_back({resolve_element(g, s.generators, s.iota[i].reflection, p + ".reflection"), s.iota[i].component,
                        s.iota[i].phase});
  }
  return out;
}

}  // namespace bredonk
