#include "corral/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "corral/bcotangent.hpp"
#include "corral/binomial.hpp"
#include "corral/document.hpp"
#include "corral/faces.hpp"
#include "corral/gcorners.hpp"
#include "corral/monoid.hpp"
#include "corral/transverse.hpp"
#include "json.hpp"

namespace corral {

using nlohmann::json;

namespace {

struct Settings {
  RankTolerance rank;
  PointTolerance point;
  std::size_t bound = ClassifyOptions{}.rewrite_budget;
  std::size_t hilbert_cap = HilbertOptions{}.cap;

  [[nodiscard]] auto classify_options() const -> ClassifyOptions {
    ClassifyOptions o;
    o.rewrite_budget = bound;
    o.hilbert.cap = hilbert_cap;
    return o;
  }
  [[nodiscard]] auto hilbert() const -> HilbertOptions { return HilbertOptions{hilbert_cap}; }
};

// A command's structured outcome; `status` is "ok" or "unknown".
struct Outcome {
  json results = json::array();
  std::vector<std::string> warnings;
  bool unknown = false;
};

auto ints(const IntVec& v) -> json {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

auto str(Tri t) -> json { return to_string(t); }

auto pick(const std::vector<std::string>& labels, const std::vector<std::size_t>& idx) -> json {
  json a = json::array();
  for (auto i : idx) a.push_back(labels.at(i));
  return a;
}

auto monoid_json(const AffineMonoid& m) -> json {
  json torsion = json::array();
  for (const auto& t : m.ambient.torsion) torsion.push_back(t.get_si());
  json gens = json::array();
  for (std::size_t i = 0; i < m.gens.size(); ++i)
    gens.push_back(json{{"name", i < m.labels.size() ? m.labels[i] : "g" + std::to_string(i + 1)},
                        {"vector", ints(m.gens[i])}});
  return {{"lattice", m.ambient.free_rank}, {"torsion", torsion}, {"gens", gens}};
}

// Monoid-like documents: presentations, affine monoids and local models.
struct MonoidInput {
  std::string name;
  std::optional<MonoidPresentation> presentation;
  AffineMonoid monoid;
};

auto monoid_inputs(const std::vector<Document>& docs) -> std::vector<MonoidInput> {
  std::vector<MonoidInput> out;
  for (const auto& d : docs) {
    if (const auto* p = std::get_if<NamedPresentation>(&d.payload)) {
      p->presentation.validate();
      out.push_back({p->name, p->presentation, integralize(p->presentation)});
    } else if (const auto* m = std::get_if<NamedModel>(&d.payload)) {
      auto pres = m->presentation();
      pres.validate();
      out.push_back({m->name, pres, integralize(pres)});
    } else if (const auto* a = std::get_if<NamedAffine>(&d.payload)) {
      a->monoid.validate();
      out.push_back({a->name, std::nullopt, a->monoid});
    }
  }
  if (out.empty()) throw DomainError("no_input", "no monoid, affine or model document in the input");
  return out;
}

auto classification(const MonoidInput& in, const Settings& s) -> MonoidClassification {
  return in.presentation ? classify(*in.presentation, s.classify_options()) : classify(in.monoid, s.classify_options());
}

void note_unknown(Outcome& o, Tri t, const std::string& what) {
  if (t != Tri::unknown) return;
  o.unknown = true;
  o.warnings.push_back(what + " is unknown within the search bound");
}

auto monoid_props(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (const auto& in : monoid_inputs(docs)) {
    auto c = classification(in, s);
    json r{{"name", in.name},        {"rank", c.rank},
           {"integral", str(c.integral)}, {"sharp", str(c.sharp)},
           {"torsion_free", str(c.torsion_free)}, {"saturated", str(c.saturated)},
           {"weakly_toric", str(c.weakly_toric)}, {"toric", str(c.toric)},
           {"simplicial", str(c.simplicial)}, {"free", str(c.free)}};
    for (auto [t, n] : {std::pair{c.integral, "integral"}, {c.weakly_toric, "weakly toric"}, {c.toric, "toric"}})
      note_unknown(o, t, in.name + ": " + n);
    o.results.push_back(r);
  }
  return o;
}

auto monoid_reflect(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (const auto& in : monoid_inputs(docs)) {
    json r{{"name", in.name}};
    if (in.presentation) {
      auto g = groupify(*in.presentation);
      json torsion = json::array();
      for (const auto& t : g.group.torsion) torsion.push_back(t.get_si());
      r["groupification"] = {{"lattice", g.group.free_rank}, {"torsion", torsion}};
      auto integral = presentation_integral(*in.presentation, WordProblemOptions{s.bound});
      r["integral"] = str(integral);
      note_unknown(o, integral, in.name + ": integrality");
    }
    r["integralization"] = monoid_json(in.monoid);
    auto tf = torsion_free_quotient(in.monoid);
    r["torsion_free_quotient"] = monoid_json(tf);
    r["saturation"] = monoid_json(saturate(tf, s.hilbert()));
    o.results.push_back(r);
  }
  return o;
}

auto monoid_primes(const std::vector<Document>& docs, const Settings&) -> Outcome {
  Outcome o;
  for (const auto& in : monoid_inputs(docs)) {
    json list = json::array();
    for (const auto& p : primes(in.monoid, true))
      list.push_back(json{{"generators", pick(in.monoid.labels, p.generators)},
                          {"includes_zero", p.includes_zero},
                          {"face_rank", p.complement.rank}});
    o.results.push_back(json{{"name", in.name},
                             {"primes", list},
                             {"dimension", monoid_dimension(in.monoid, false)},
                             {"dimension_with_zero", monoid_dimension(in.monoid, true)}});
  }
  return o;
}

auto model_corners(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (const auto& in : monoid_inputs(docs)) {
    const auto wt = classification(in, s).weakly_toric;
    if (wt == Tri::no) throw DomainError("not_weakly_toric", in.name + " is not weakly toric");
    if (wt == Tri::unknown) throw BoundExceeded(in.name + ": weak toricity is unknown within the search bound");
    auto model = build_local_model(in.monoid);
    auto dec = corner_decomposition(model);
    json strata = json::array();
    for (const auto& st : dec.strata) {
      auto fc = classify(st.fiber, s.classify_options());
      note_unknown(o, fc.free, in.name + ": freeness of a fibre");
      strata.push_back(json{{"prime", pick(in.monoid.labels, st.prime.generators)},
                            {"codim", st.codim},
                            {"fiber_rank", st.fiber.rank()},
                            {"fiber_free", str(fc.free)}});
    }
    json relations = json::array();
    for (const auto& [u, v] : model.relations) relations.push_back(json{{"lhs", ints(u)}, {"rhs", ints(v)}});
    o.results.push_back(json{{"name", in.name},
                             {"dim", model.dim},
                             {"free_rank", model.free_rank},
                             {"relations", relations},
                             {"grading", dec.grading},
                             {"strata", strata}});
  }
  return o;
}

auto germ_pairs(const std::vector<Document>& docs) -> std::vector<const GermPairDoc*> {
  std::vector<const GermPairDoc*> out;
  for (const auto& d : docs)
    if (const auto* g = std::get_if<GermPairDoc>(&d.payload)) out.push_back(g);
  if (out.empty()) throw DomainError("no_input", "no germpair document in the input");
  return out;
}

auto germ_check(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (const auto* doc : germ_pairs(docs)) {
    auto [g, h] = doc->germs();
    g.validate();
    h.validate();
    const bool b = b_transverse(g, h);
    auto c = c_transverse(g, h, s.hilbert());
    json r{{"name", doc->name}, {"b_transverse", b}, {"c_transverse", c.ok}};
    r["c_failure"] = c.ok ? json(nullptr) : json(to_string(c.failure));
    o.results.push_back(r);
  }
  return o;
}

auto germ_product(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (const auto* doc : germ_pairs(docs)) {
    auto [g, h] = doc->germs();
    g.validate();
    h.validate();
    auto fp = fibre_product_germ(g, h, s.hilbert());
    auto grading = corner_grading_check(g, h, s.hilbert());
    json rows = json::array();
    for (const auto& row : grading.rows)
      rows.push_back(json{{"i", row.i}, {"j", row.j}, {"k", row.k}, {"l", row.l}});
    json kb = json::array();
    for (const auto& v : fp.k_basis) kb.push_back(ints(v));
    o.results.push_back(json{{"name", doc->name},
                             {"dim_w", fp.dim_w},
                             {"w", monoid_json(fp.w)},
                             {"k_basis", kb},
                             {"grading_rows", rows},
                             {"law_holds", grading.law_holds},
                             {"w_counts", grading.w_counts},
                             {"pair_counts", grading.pair_counts},
                             {"bijective", grading.bijective}});
    if (!grading.law_holds) o.warnings.push_back(doc->name + ": the grading law fails on some row");
  }
  return o;
}

// Each point is read against the closest ring (or morphisms) declared before it.
template <class T>
auto preceding(const std::vector<Document>& docs, std::size_t upto, std::size_t count) -> std::vector<const T*> {
  std::vector<const T*> out;
  for (std::size_t i = upto; i-- > 0 && out.size() < count;)
    if (const auto* t = std::get_if<T>(&docs[i].payload)) out.insert(out.begin(), t);
  return out;
}

auto points(const std::vector<Document>& docs) -> std::vector<std::size_t> {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (std::holds_alternative<PointDoc>(docs[i].payload)) out.push_back(i);
  if (out.empty()) throw DomainError("no_input", "no point document in the input");
  return out;
}

auto rank_json(const RankInfo& r) -> json {
  return {{"rank", r.rank}, {"rank_strict", r.rank_strict}, {"stable", r.stable()}, {"singular_values", r.singular_values}};
}

void note_stable(Outcome& o, bool stable, const std::string& where) {
  if (stable) return;
  o.unknown = true;
  o.warnings.push_back(where + ": ranks differ between the main and strict tolerances");
}

auto bcot_fibre(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (auto i : points(docs)) {
    const auto& pd = std::get<PointDoc>(docs[i].payload);
    auto rings = preceding<CRingPresentation>(docs, i, 1);
    if (rings.empty()) throw DomainError("no_input", "point " + pd.name + " follows no cring");
    const auto& c = *rings[0];
    c.validate();
    auto f = bcotangent_fibre(c, pd.resolve(c.real, c.interior), s.rank, s.point);
    o.results.push_back(
        json{{"ring", c.name}, {"point", pd.name}, {"generators", f.labels}, {"fibre_dim", f.fibre_dim}, {"relations", rank_json(f.rank)}});
    note_stable(o, f.rank.stable(), c.name + " at " + pd.name);
  }
  return o;
}

auto bcot_pushout(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (auto i : points(docs)) {
    const auto& pd = std::get<PointDoc>(docs[i].payload);
    auto ms = preceding<CRingMorphism>(docs, i, 2);
    if (ms.size() < 2) throw DomainError("no_input", "point " + pd.name + " needs two morphisms before it");
    const auto& alpha = *ms[0];
    const auto& beta = *ms[1];
    auto f = pushout(alpha, beta);
    auto r = pushout_sequence_check(alpha, beta, pd.resolve(f.real, f.interior), s.rank, s.point);
    o.results.push_back(json{{"alpha", alpha.name},
                             {"beta", beta.name},
                             {"point", pd.name},
                             {"generators", f.labels()},
                             {"dim_c", r.dim_c},
                             {"dim_d", r.dim_d},
                             {"dim_e", r.dim_e},
                             {"dim_f", r.dim_f},
                             {"first_rank", r.first_rank},
                             {"second_rank", r.second_rank},
                             {"well_defined", r.well_defined},
                             {"composition_zero", r.composition_zero},
                             {"middle_exact", r.middle_exact},
                             {"right_exact", r.right_exact},
                             {"exact", r.exact()},
                             {"stable", r.stable}});
    note_stable(o, r.stable, alpha.name + ", " + beta.name + " at " + pd.name);
  }
  return o;
}

auto bcot_corner_seq(const std::vector<Document>& docs, const Settings& s) -> Outcome {
  Outcome o;
  for (auto i : points(docs)) {
    const auto& pd = std::get<PointDoc>(docs[i].payload);
    auto rings = preceding<CRingPresentation>(docs, i, 1);
    if (rings.empty()) throw DomainError("no_input", "point " + pd.name + " follows no cring");
    const auto& c = *rings[0];
    c.validate();
    auto p = pd.resolve(c.real, c.interior);
    std::vector<std::size_t> prime;
    for (std::size_t k = 0; k < p.y.size(); ++k)
      if (std::abs(p.y[k]) <= s.point.absolute) prime.push_back(k);
    CornerSequenceOptions opts{s.rank, s.point, true};
    auto r = corner_sequence_check(c, prime, p, opts);
    o.results.push_back(json{{"ring", c.name},
                             {"point", pd.name},
                             {"prime", pick(c.interior, prime)},
                             {"toric", str(r.toric)},
                             {"dim_d", r.dim_d},
                             {"dim_c", r.dim_c},
                             {"dim_corner", r.dim_corner},
                             {"pi_rank", r.pi_rank},
                             {"i_rank", r.i_rank},
                             {"well_defined", r.well_defined},
                             {"composition_zero", r.composition_zero},
                             {"left_exact", r.left_exact},
                             {"middle_exact", r.middle_exact},
                             {"right_exact", r.right_exact},
                             {"exact", r.exact()},
                             {"stable", r.stable}});
    note_unknown(o, r.toric, c.name + ": toricity");
    note_stable(o, r.stable, c.name + " at " + pd.name);
  }
  return o;
}

// ---------------------------------------------------------------- human form

struct Style {
  bool color = false;
  [[nodiscard]] auto yn(const json& v) const -> std::string {
    std::string s = v.is_boolean() ? (v.get<bool>() ? "yes" : "no") : v.get<std::string>();
    if (!color) return s;
    const char* code = s == "yes" ? "32" : s == "no" ? "31" : "33";
    return std::string("\033[") + code + "m" + s + "\033[0m";
  }
};

auto num(double v) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

auto names(const json& a) -> std::string {
  if (a.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i].get<std::string>();
  return s + "}";
}

auto vec(const json& a) -> std::string {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i].dump();
  return s + ")";
}

auto render_monoid(const json& m) -> std::string {
  std::ostringstream os;
  os << "lattice " << m["lattice"].get<std::size_t>();
  if (!m["torsion"].empty()) {
    os << " torsion";
    for (const auto& t : m["torsion"]) os << " " << t.dump();
  }
  os << "; gens";
  if (m["gens"].empty()) os << " none";
  for (const auto& g : m["gens"]) os << " " << g["name"].get<std::string>() << vec(g["vector"]);
  return os.str();
}

auto grading_line(const json& g) -> std::string {
  std::string s;
  for (std::size_t k = 0; k < g.size(); ++k) s += (k ? " C" : "C") + std::to_string(k) + ":" + g[k].dump();
  return s;
}

auto render(const std::string& command, const json& r, const Style& st) -> std::string {
  std::ostringstream os;
  if (command == "monoid props") {
    os << r["name"].get<std::string>() << ": rank " << r["rank"].dump() << "; integral: " << st.yn(r["integral"])
       << "; sharp: " << st.yn(r["sharp"]) << "; torsion-free: " << st.yn(r["torsion_free"])
       << "; saturated: " << st.yn(r["saturated"]) << "\n  weakly toric: " << st.yn(r["weakly_toric"])
       << "; toric: " << st.yn(r["toric"]) << "; simplicial: " << st.yn(r["simplicial"])
       << "; free: " << st.yn(r["free"]) << "\n";
  } else if (command == "monoid reflect") {
    os << r["name"].get<std::string>() << ":\n";
    if (r.contains("groupification")) {
      const auto& g = r["groupification"];
      os << "  groupification: Z^" << g["lattice"].dump();
      for (const auto& t : g["torsion"]) os << " + Z/" << t.dump();
      os << "\n  integral: " << st.yn(r["integral"]) << "\n";
    }
    os << "  integralization: " << render_monoid(r["integralization"]) << "\n";
    os << "  torsion-free quotient: " << render_monoid(r["torsion_free_quotient"]) << "\n";
    os << "  saturation: " << render_monoid(r["saturation"]) << "\n";
  } else if (command == "monoid primes") {
    os << r["name"].get<std::string>() << ": " << r["primes"].size() << " primes with zero; dimension "
       << r["dimension"].dump() << ", with zero " << r["dimension_with_zero"].dump() << "\n";
    for (const auto& p : r["primes"])
      os << "  " << names(p["generators"]) << (p["includes_zero"].get<bool>() ? " + 0" : "") << "  face rank "
         << p["face_rank"].dump() << "\n";
  } else if (command == "model corners") {
    os << r["name"].get<std::string>() << ": dim " << r["dim"].dump() << " (free " << r["free_rank"].dump()
       << ")\n  grading: " << grading_line(r["grading"]) << "\n";
    for (const auto& s : r["strata"])
      os << "  C" << s["codim"].dump() << " " << names(s["prime"]) << ": fibre rank " << s["fiber_rank"].dump()
         << ", free: " << st.yn(s["fiber_free"]) << "\n";
  } else if (command == "germ check") {
    os << r["name"].get<std::string>() << ": b-transverse: " << st.yn(r["b_transverse"])
       << "; c-transverse: " << st.yn(r["c_transverse"]);
    if (!r["c_failure"].is_null()) os << " (" << r["c_failure"].get<std::string>() << ")";
    os << "\n";
  } else if (command == "germ product") {
    os << r["name"].get<std::string>() << ": dim W = " << r["dim_w"].dump() << "\n  W: " << render_monoid(r["w"])
       << "\n  W corners: " << grading_line(r["w_counts"]) << "\n  stratum pairs: " << grading_line(r["pair_counts"])
       << "\n  i+l = j+k on every row: " << st.yn(r["law_holds"]) << "; bijective: " << st.yn(r["bijective"])
       << "\n";
  } else if (command == "bcot fibre") {
    const auto& rel = r["relations"];
    os << r["ring"].get<std::string>() << " at " << r["point"].get<std::string>() << ": fibre dim "
       << r["fibre_dim"].dump() << " (generators " << r["generators"].size() << ", relation rank "
       << rel["rank"].dump() << ", strict " << rel["rank_strict"].dump() << ")\n  singular values:";
    if (rel["singular_values"].empty()) os << " none";
    for (const auto& v : rel["singular_values"]) os << " " << num(v.get<double>());
    os << "\n";
  } else if (command == "bcot pushout") {
    os << r["alpha"].get<std::string>() << ", " << r["beta"].get<std::string>() << " at "
       << r["point"].get<std::string>() << ": dims C " << r["dim_c"].dump() << ", D+E " << r["dim_d"].dump() << "+"
       << r["dim_e"].dump() << ", F " << r["dim_f"].dump() << "; ranks " << r["first_rank"].dump() << ", "
       << r["second_rank"].dump() << "\n  well defined: " << st.yn(r["well_defined"])
       << "; composition zero: " << st.yn(r["composition_zero"]) << "; middle exact: " << st.yn(r["middle_exact"])
       << "; right exact: " << st.yn(r["right_exact"]) << "; exact: " << st.yn(r["exact"])
       << "; stable: " << st.yn(r["stable"]) << "\n";
  } else if (command == "bcot corner-seq") {
    os << r["ring"].get<std::string>() << " at " << r["point"].get<std::string>() << ", prime "
       << names(r["prime"]) << ": toric: " << st.yn(r["toric"]) << "\n  0 -> " << r["dim_d"].dump() << " -> "
       << r["dim_c"].dump() << " -> " << r["dim_corner"].dump() << " -> 0; ranks " << r["pi_rank"].dump() << ", "
       << r["i_rank"].dump() << "\n  well defined: " << st.yn(r["well_defined"])
       << "; composition zero: " << st.yn(r["composition_zero"]) << "; left exact: " << st.yn(r["left_exact"])
       << "; middle exact: " << st.yn(r["middle_exact"]) << "; right exact: " << st.yn(r["right_exact"])
       << "; exact: " << st.yn(r["exact"]) << "; stable: " << st.yn(r["stable"]) << "\n";
  }
  return os.str();
}

auto header(const json& report) -> std::string {
  const auto& t = report["tolerances"];
  return "# corral " + report["command"].get<std::string>() + " (rank tol " + num(t["rank"].get<double>()) +
         ", strict " + num(t["strict"].get<double>()) + ", point " + num(t["point"].get<double>()) + ", bound " +
         report["bound"].dump() + ")\n";
}

// ---------------------------------------------------------------- driver

using Handler = std::function<Outcome(const std::vector<Document>&, const Settings&)>;

auto handlers() -> const std::map<std::string, std::map<std::string, Handler>>& {
  static const std::map<std::string, std::map<std::string, Handler>> table{
      {"monoid", {{"props", monoid_props}, {"reflect", monoid_reflect}, {"primes", monoid_primes}}},
      {"model", {{"corners", model_corners}}},
      {"germ", {{"check", germ_check}, {"product", germ_product}}},
      {"bcot", {{"fibre", bcot_fibre}, {"pushout", bcot_pushout}, {"corner-seq", bcot_corner_seq}}},
  };
  return table;
}

auto parse_double(const std::string& s) -> double {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v > 0)) throw CLI::ValidationError("--tol", "expected a positive number, got " + s);
  return v;
}

// --tol x sets the rank tolerance; --tol rank=x, strict=x or point=x set one.
void apply_tolerance(Settings& s, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    s.rank.rank = parse_double(spec);
    return;
  }
  const auto key = spec.substr(0, eq);
  const double v = parse_double(spec.substr(eq + 1));
  if (key == "rank")
    s.rank.rank = v;
  else if (key == "strict")
    s.rank.strict = v;
  else if (key == "point")
    s.point.absolute = s.point.relative = v;
  else
    throw CLI::ValidationError("--tol", "unknown tolerance " + key + " (use rank, strict or point)");
}

auto read_file(const std::string& path) -> std::string {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("files", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Failure {
  int status;
  std::string code, message;
};

}  // namespace

auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int {
  CLI::App app{"Monoids, corners, transversality and b-cotangent fibres", "corral"};
  app.require_subcommand(1);
  bool as_json = false;
  std::vector<std::string> tols, files;
  std::optional<std::size_t> bound;
  std::string group, command;

  for (const auto& [g, cmds] : handlers()) {
    auto* sub = app.add_subcommand(g, g + " commands");
    sub->require_subcommand(1);
    for (const auto& [c, h] : cmds) {
      auto* leaf = sub->add_subcommand(c);
      leaf->add_option("files", files, "input documents (text or JSON)")->required();
      leaf->add_flag("--json", as_json, "emit the canonical JSON report");
      leaf->add_option("--tol", tols, "tolerance: x (rank), or rank=x, strict=x, point=x");
      leaf->add_option("--bound", bound, "search budget for rewriting and Hilbert bases");
      leaf->callback([&, g = g, c = c] {
        group = g;
        command = c;
      });
    }
  }

  Settings settings;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    for (const auto& t : tols) apply_tolerance(settings, t);
    if (bound) {
      if (*bound == 0) throw CLI::ValidationError("--bound", "must be positive");
      settings.bound = *bound;
      settings.hilbert_cap = *bound;
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Error& e) {
    err << "corral: " << e.what() << "\n";
    return 2;
  }

  const std::string full = group + " " + command;
  json report{{"command", full},
              {"files", files},
              {"bound", settings.bound},
              {"tolerances",
               {{"rank", settings.rank.rank}, {"strict", settings.rank.strict}, {"point", settings.point.absolute}}}};

  std::optional<Failure> failure;
  Outcome outcome;
  try {
    std::vector<Document> docs;
    for (const auto& f : files) {
      try {
        auto more = parse_any(read_file(f));
        docs.insert(docs.end(), more.begin(), more.end());
      } catch (const ParseError& e) {
        std::string where = f;
        if (e.line) where += ":" + std::to_string(e.line) + ":" + std::to_string(e.column);
        throw ParseError(where + ": " + e.what(), e.line, e.column);
      } catch (const DomainError& e) {
        throw ParseError(f + ": " + e.what(), 0, 0);
      }
    }
    outcome = handlers().at(group).at(command)(docs, settings);
  } catch (const CLI::Error& e) {
    failure = Failure{2, "usage", e.what()};
  } catch (const ParseError& e) {
    failure = Failure{2, "parse_error", e.what()};
  } catch (const DomainError& e) {
    failure = Failure{1, e.code, e.what()};
  } catch (const BoundExceeded& e) {
    failure = Failure{3, "bound_exceeded", e.what()};
  } catch (const HilbertBoundExceeded& e) {
    failure = Failure{3, "bound_exceeded", e.what()};
  } catch (const std::invalid_argument& e) {
    // Malformed but parseable input, e.g. affine generators that miss part of the group.
    failure = Failure{1, "invalid_input", e.what()};
  } catch (const std::exception& e) {
    failure = Failure{1, "internal_error", e.what()};
  }

  const char* color_env = std::getenv("CORRAL_COLOR");
  const Style style{color_env != nullptr && std::string(color_env) == "1"};

  int status = 0;
  if (failure) {
    status = failure->status;
    report["status"] = failure->status == 3 ? "unknown" : "error";
    report["error"] = {{"code", failure->code}, {"message", failure->message}};
    report["results"] = json::array();
    report["warnings"] = json::array();
  } else {
    status = outcome.unknown ? 3 : 0;
    report["status"] = outcome.unknown ? "unknown" : "ok";
    report["results"] = outcome.results;
    report["warnings"] = outcome.warnings;
  }
  report["exit_status"] = status;

  if (as_json) {
    out << report.dump(2) << "\n";
    return status;
  }
  if (failure) {
    err << "corral: " << failure->code << ": " << failure->message << "\n";
    return status;
  }
  out << header(report);
  for (const auto& r : report["results"]) out << render(full, r, style);
  for (const auto& w : report["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  if (outcome.unknown) out << "status: unknown\n";
  return status;
}

}  // namespace corral
