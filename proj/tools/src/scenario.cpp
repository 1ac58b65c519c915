#include "scenario.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "cotlab/error.hpp"
#include "cotlab/homalg.hpp"
#include "cotlab/hovey.hpp"
#include "cotlab/quiverlift.hpp"

#ifndef COTLAB_VERSION
#define COTLAB_VERSION "0.0.0"
#endif

namespace cotlab::cli {

using bqa::AlgebraPtr;
using cotorsion::CotorsionPair;
using cotorsion::Side;
using cotorsion::Verdict;
using hovey::HoveyTriple;
using universe::ObjectClass;
using universe::Perp;
using universe::Universe;
using universe::UniversePtr;

std::string tool_version() { return COTLAB_VERSION; }

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "algebra",       "universe",       "class",         "ext-agreement", "cotorsion-pair", "extendable",
      "dimension-coherence", "dimension-inequalities", "hovey-verify", "sstype", "cor-identity",
      "hovey-lift",    "tower",          "gkr-hypotheses", "quiver-pair",   "phi-identity",
      "quiver-lift"};
  return names;
}

Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw MalformedInput("cannot read " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& p, const Json& j) {
  std::ofstream out(p);
  if (!out) throw MalformedInput("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

namespace {

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string summary;
  Json result = Json::object();
};

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Side parse_side(const Json& check, const char* fallback) {
  const std::string s = check.value("side", std::string(fallback));
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw MalformedInput("side must be \"left\" or \"right\", got \"" + s + "\"");
}

std::string side_name(Side s) { return s == Side::left ? "left" : "right"; }

std::size_t min_cap(const AlgebraPtr& alg) {
  std::size_t cap = 1;
  for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
    cap = std::max(cap, homalg::indecomposable_projective(alg, v).total_dim());
    cap = std::max(cap, homalg::indecomposable_injective(alg, v).total_dim());
  }
  return cap;
}

std::size_t count_if_tri(const hovey::ConditionsResult& r, universe::Tri t) {
  std::size_t n = 0;
  for (universe::Tri c : r.cond) n += c == t;
  return n;
}

class Runner {
 public:
  Runner(const Json& sc, const RunOptions& opts) : sc_(sc), opts_(opts) {}

  RunOutcome run() {
    if (!sc_.is_object()) throw MalformedInput("scenario must be a JSON object");
    if (sc_.value("schema", std::string()) != kScenarioSchema) {
      throw MalformedInput(std::string("scenario schema must be \"") + kScenarioSchema + "\"");
    }
    load_universes();
    validate();
    for (const auto& [name, def] : defs("classes").items()) (void)klass(name);
    for (const auto& [name, def] : defs("triples").items()) triple_classes(name);

    RunOutcome out;
    Json checks = Json::array();
    Verdict overall = Verdict::pass;
    const Json& list = sc_.at("checks");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Json& c = list[i];
      const std::string kind = c.at("check").get<std::string>();
      const std::string name = c.value("name", kind + "#" + std::to_string(i));
      Outcome o;
      std::string reason;
      try {
        o = dispatch(kind, c);
      } catch (const PreconditionError& e) {
        o.verdict = Verdict::inconclusive;
        reason = std::string("precondition: ") + e.what();
      } catch (const CapExceeded& e) {
        o.verdict = Verdict::inconclusive;
        reason = std::string("cap exceeded: ") + e.what();
      } catch (const UndecidedDecomposition& e) {
        o.verdict = Verdict::inconclusive;
        reason = std::string("undecided: ") + e.what();
      }
      Json entry{{"name", name}, {"check", kind}, {"universe", universe_of_check(c)},
                 {"verdict", cotorsion::to_string(o.verdict)}};
      if (!reason.empty()) entry["reason"] = reason;
      entry["summary"] = reason.empty() ? o.summary : reason;
      entry["result"] = std::move(o.result);
      out.summary.push_back(cotorsion::to_string(o.verdict) + "  " + name + "  " +
                            entry["summary"].get<std::string>());
      checks.push_back(std::move(entry));
      overall = cotorsion::combine(overall, o.verdict);
    }

    Json report;
    report["schema"] = kReportSchema;
    report["tool"] = Json{{"name", "cotlab"}, {"version", tool_version()}};
    if (opts_.timestamp) report["timestamp"] = timestamp_now();
    report["scenario"] = sc_;
    report["universes"] = universes_json();
    report["checks"] = std::move(checks);
    report["verdict"] = cotorsion::to_string(overall);
    out.exit_code = overall == Verdict::pass ? 0 : overall == Verdict::fail ? 1 : 2;
    report["exit_code"] = out.exit_code;
    out.report = std::move(report);
    return out;
  }

 private:
  struct UniverseEntry {
    Json def;
    AlgebraPtr alg;
    UniversePtr u;
    std::shared_ptr<quiverlift::RepSetting> rep;
    std::string value;
  };

  struct TripleEntry {
    std::optional<HoveyTriple> t;
    std::size_t left_upto = 0;
    std::size_t right_upto = 0;
  };

  const Json& defs(const char* key) const {
    static const Json empty = Json::object();
    if (!sc_.contains(key)) return empty;
    if (!sc_.at(key).is_object()) throw MalformedInput(std::string("\"") + key + "\" must be an object");
    return sc_.at(key);
  }

  std::filesystem::path resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : opts_.base_dir / path;
  }

  // ---------------------------------------------------------------------
  // Universes, classes and triples
  // ---------------------------------------------------------------------

  void load_universes() {
    const Json& us = defs("universes");
    if (us.empty()) throw MalformedInput("scenario declares no universes");
    for (const auto& [id, def] : us.items()) {
      if (!def.is_object()) throw MalformedInput("universe '" + id + "' must be an object");
      if (!def.contains("shape")) load_value_universe(id, def);
    }
    for (const auto& [id, def] : us.items()) {
      if (!def.contains("shape")) continue;
      UniverseEntry e;
      e.def = def;
      e.value = def.value("value", std::string());
      auto it = universes_.find(e.value);
      if (it == universes_.end() || it->second.rep) {
        throw MalformedInput("representation universe '" + id + "' needs \"value\" naming a value universe");
      }
      try {
        e.rep = std::make_shared<quiverlift::RepSetting>(quiverlift::ShapeQuiver::from_json(def.at("shape")),
                                                         it->second.alg);
      } catch (const PreconditionError& err) {
        throw MalformedInput("representation universe '" + id + "': " + err.what());
      }
      e.alg = e.rep->tensor_algebra();
      universes_.emplace(id, std::move(e));
    }
  }

  void load_value_universe(const std::string& id, const Json& def) {
    UniverseEntry e;
    e.def = def;
    if (def.contains("universe_file")) {
      const Json j = read_json_file(resolve_path(def.at("universe_file").get<std::string>()));
      e.alg = bqa::parse_algebra(j.at("algebra"));
      e.u = Universe::from_json(e.alg, j);
    } else if (def.contains("algebra")) {
      e.alg = bqa::parse_algebra(def.at("algebra"));
    } else if (def.contains("algebra_file")) {
      e.alg = bqa::parse_algebra(read_json_file(resolve_path(def.at("algebra_file").get<std::string>())));
    } else {
      throw MalformedInput("universe '" + id + "' needs \"algebra\", \"algebra_file\" or \"universe_file\"");
    }
    universes_.emplace(id, std::move(e));
  }

  UniverseEntry& entry(const std::string& id) {
    auto it = universes_.find(id);
    if (it == universes_.end()) throw MalformedInput("unknown universe '" + id + "'");
    return it->second;
  }

  const UniversePtr& universe(const std::string& id) {
    UniverseEntry& e = entry(id);
    if (e.u) return e.u;
    std::size_t cap;
    if (e.rep) {
      cap = opts_.rep_max_dim.value_or(e.def.value("max_dim", quiverlift::kDefaultRepCap));
    } else {
      cap = opts_.max_dim.value_or(e.def.value("max_dim", std::size_t{0}));
    }
    if (cap == 0) cap = min_cap(e.alg);
    try {
      universe::EnumerateOptions eo;
      eo.cache_dir = opts_.cache_dir;
      e.u = Universe::enumerate(e.alg, cap, eo);
    } catch (const PreconditionError& ex) {
      throw MalformedInput("universe '" + id + "': " + ex.what());
    }
    return e.u;
  }

  ObjectClass predicate(const std::string& u, const std::string& p, std::set<std::string>& visiting) {
    const UniversePtr& up = universe(u);
    if (p == "all") return ObjectClass::all(up);
    if (p == "none") return ObjectClass::none(up);
    if (p == "projectives") return ObjectClass::projectives(up);
    if (p == "injectives") return ObjectClass::injectives(up);
    auto after = [&](const std::string& prefix) -> std::optional<std::string> {
      if (p.rfind(prefix, 0) == 0) return p.substr(prefix.size());
      return std::nullopt;
    };
    if (auto rest = after("members:")) {
      std::vector<std::string> names;
      std::stringstream ss(*rest);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) names.push_back(item);
      }
      return members(u, names);
    }
    if (auto rest = after("ext-orthogonal-of:")) return universe::orthogonal(reference(u, *rest, visiting), Perp::right);
    if (auto rest = after("left-ext-orthogonal-of:")) {
      return universe::orthogonal(reference(u, *rest, visiting), Perp::left);
    }
    throw MalformedInput("unknown class predicate '" + p + "'");
  }

  // A class name defined in the scenario, or a predicate over universe u.
  ObjectClass reference(const std::string& u, const std::string& ref, std::set<std::string>& visiting) {
    if (defs("classes").contains(ref)) {
      ObjectClass c = klass(ref, visiting);
      if (c.universe() != universe(u)) throw MalformedInput("class '" + ref + "' lives over another universe");
      return c;
    }
    return predicate(u, ref, visiting);
  }

  ObjectClass members(const std::string& u, const std::vector<std::string>& names) {
    const UniversePtr& up = universe(u);
    std::vector<std::size_t> idx;
    for (const std::string& n : names) {
      std::optional<std::size_t> i = up->index_of_id(n);
      for (std::size_t k = 0; !i && k < up->size(); ++k) {
        if (up->label(k) == n) i = k;
      }
      if (!i) throw MalformedInput("universe '" + u + "' has no member '" + n + "'");
      idx.push_back(*i);
    }
    return ObjectClass::of(up, idx);
  }

  ObjectClass klass(const std::string& name) {
    std::set<std::string> visiting;
    return klass(name, visiting);
  }

  ObjectClass klass(const std::string& name, std::set<std::string>& visiting) {
    if (auto it = classes_.find(name); it != classes_.end()) return it->second;
    const Json& cs = defs("classes");
    if (!cs.contains(name)) throw MalformedInput("unknown class '" + name + "'");
    if (!visiting.insert(name).second) throw MalformedInput("class '" + name + "' is defined in terms of itself");
    const Json& def = cs.at(name);
    const std::string u = def.at("universe").get<std::string>();
    entry(u);
    ObjectClass c;
    if (def.contains("predicate")) {
      c = predicate(u, def.at("predicate").get<std::string>(), visiting);
    } else if (def.contains("members")) {
      c = members(u, def.at("members").get<std::vector<std::string>>());
    } else if (def.contains("intersection") || def.contains("union")) {
      const bool meet = def.contains("intersection");
      const auto parts = def.at(meet ? "intersection" : "union").get<std::vector<std::string>>();
      c = meet ? ObjectClass::all(universe(u)) : ObjectClass::none(universe(u));
      for (const std::string& p : parts) {
        const ObjectClass o = reference(u, p, visiting);
        c = meet ? (c & o) : (c | o);
      }
    } else if (def.contains("lift")) {
      UniverseEntry& e = entry(u);
      if (!e.rep) throw MalformedInput("class '" + name + "' lifts into a universe without a shape");
      const ObjectClass of = reference(e.value, def.at("of").get<std::string>(), visiting);
      const std::string kind = def.at("lift").get<std::string>();
      quiverlift::LiftKind k;
      if (kind == "phi") {
        k = quiverlift::LiftKind::phi;
      } else if (kind == "psi") {
        k = quiverlift::LiftKind::psi;
      } else if (kind == "pointwise") {
        k = quiverlift::LiftKind::pointwise;
      } else {
        throw MalformedInput("lift must be phi, psi or pointwise");
      }
      c = quiverlift::class_lift(*e.rep, of, universe(u), k);
    } else {
      throw MalformedInput("class '" + name + "' needs predicate, members, intersection, union or lift");
    }
    visiting.erase(name);
    classes_.emplace(name, c);
    return c;
  }

  std::string class_universe(const std::string& name) const {
    const Json& cs = defs("classes");
    if (!cs.contains(name)) throw MalformedInput("unknown class '" + name + "'");
    return cs.at(name).at("universe").get<std::string>();
  }

  std::array<ObjectClass, 3> triple_classes(const std::string& name) {
    const Json& ts = defs("triples");
    if (!ts.contains(name)) throw MalformedInput("unknown triple '" + name + "'");
    const Json& d = ts.at(name);
    std::array<ObjectClass, 3> out{klass(d.at("c").get<std::string>()), klass(d.at("w").get<std::string>()),
                                   klass(d.at("f").get<std::string>())};
    if (out[0].universe() != out[1].universe() || out[0].universe() != out[2].universe()) {
      throw MalformedInput("triple '" + name + "' mixes universes");
    }
    return out;
  }

  std::string triple_universe(const std::string& name) const {
    const Json& ts = defs("triples");
    if (!ts.contains(name)) throw MalformedInput("unknown triple '" + name + "'");
    return class_universe(ts.at(name).at("c").get<std::string>());
  }

  hovey::VerifyOptions verify_options(const Json& c) const {
    hovey::VerifyOptions o;
    o.budget = budget(c);
    o.conflation_count = c.value("conflations", o.conflation_count);
    return o;
  }

  std::size_t budget(const Json& c) const { return opts_.budget.value_or(c.value("budget", std::size_t{0})); }

  std::size_t n_max(const Json& c, std::size_t fallback) const {
    return opts_.n_max.value_or(c.value("n_max", fallback));
  }

  const HoveyTriple& verified(const std::string& name) {
    TripleEntry& e = triples_[name];
    if (!e.t) {
      const auto cls = triple_classes(name);
      e.t = hovey::verify_triple(cls[0], cls[1], cls[2], hovey::VerifyOptions{budget(Json::object())});
    }
    return *e.t;
  }

  const HoveyTriple& extended(const std::string& name, Side side, std::size_t n) {
    verified(name);
    TripleEntry& e = triples_[name];
    std::size_t& upto = side == Side::left ? e.left_upto : e.right_upto;
    if (n > upto) {
      e.t = hovey::certify_extendable(*e.t, n, side, budget(Json::object()));
      upto = n;
    }
    return *e.t;
  }

  CotorsionPair certified_pair(const Json& c) {
    return cotorsion::certify(cotorsion::make_pair(klass(c.at("x").get<std::string>()), klass(c.at("y").get<std::string>())),
                              budget(c));
  }

  // ---------------------------------------------------------------------
  // Validation
  // ---------------------------------------------------------------------

  std::string universe_of_check(const Json& c) const {
    const std::string kind = c.at("check").get<std::string>();
    if (c.contains("universe")) return c.at("universe").get<std::string>();
    if (c.contains("class")) return class_universe(c.at("class").get<std::string>());
    if (c.contains("x")) return class_universe(c.at("x").get<std::string>());
    if (c.contains("triple")) return triple_universe(c.at("triple").get<std::string>());
    if (c.contains("triples") && c.at("triples").is_array() && !c.at("triples").empty()) {
      return triple_universe(c.at("triples")[0].get<std::string>());
    }
    throw MalformedInput("check '" + kind + "' does not name a universe, class pair or triple");
  }

  void need_string(const Json& c, const char* key, const std::string& kind) const {
    if (!c.contains(key) || !c.at(key).is_string()) {
      throw MalformedInput("check '" + kind + "' needs a string \"" + key + "\"");
    }
  }

  void validate() {
    if (!sc_.contains("checks") || !sc_.at("checks").is_array()) throw MalformedInput("scenario needs a \"checks\" array");
    const auto& names = check_names();
    for (const Json& c : sc_.at("checks")) {
      if (!c.is_object() || !c.contains("check") || !c.at("check").is_string()) {
        throw MalformedInput("every check needs a \"check\" name");
      }
      const std::string kind = c.at("check").get<std::string>();
      if (std::find(names.begin(), names.end(), kind) == names.end()) {
        throw MalformedInput("unknown check '" + kind + "'");
      }
      if (c.contains("side")) parse_side(c, "left");
      const bool quiver = kind == "quiver-pair" || kind == "phi-identity" || kind == "quiver-lift";
      if (kind == "algebra" || kind == "universe" || kind == "ext-agreement" || quiver) {
        need_string(c, "universe", kind);
        entry(c.at("universe").get<std::string>());
        if (quiver && !entry(c.at("universe").get<std::string>()).rep) {
          throw MalformedInput("check '" + kind + "' needs a representation universe");
        }
      }
      if (kind == "class") {
        need_string(c, "class", kind);
        class_universe(c.at("class").get<std::string>());
      }
      const bool pair = kind == "cotorsion-pair" || kind == "extendable" || kind == "dimension-coherence" ||
                        kind == "dimension-inequalities" || kind == "quiver-pair" || kind == "phi-identity";
      if (pair) {
        need_string(c, "x", kind);
        need_string(c, "y", kind);
        if (class_universe(c.at("x").get<std::string>()) != class_universe(c.at("y").get<std::string>())) {
          throw MalformedInput("check '" + kind + "': x and y live over different universes");
        }
      }
      const bool triple = kind == "hovey-verify" || kind == "sstype" || kind == "cor-identity" ||
                          kind == "hovey-lift" || kind == "tower" || kind == "quiver-lift";
      if (triple) {
        need_string(c, "triple", kind);
        triple_universe(c.at("triple").get<std::string>());
      }
      if (kind == "gkr-hypotheses") {
        if (!c.contains("triples") || !c.at("triples").is_array() || c.at("triples").size() != 3) {
          throw MalformedInput("check 'gkr-hypotheses' needs three \"triples\"");
        }
        for (const Json& t : c.at("triples")) triple_universe(t.get<std::string>());
      }
      if (quiver) {
        const std::string value = entry(c.at("universe").get<std::string>()).value;
        const std::string vu = triple ? triple_universe(c.at("triple").get<std::string>())
                                      : class_universe(c.at("x").get<std::string>());
        if (vu != value) throw MalformedInput("check '" + kind + "': value classes live over another universe");
      }
    }
  }

  // ---------------------------------------------------------------------
  // Checks
  // ---------------------------------------------------------------------

  Outcome dispatch(const std::string& kind, const Json& c) {
    if (kind == "algebra") return check_algebra(c);
    if (kind == "universe") return check_universe(c);
    if (kind == "class") return check_class(c);
    if (kind == "ext-agreement") return check_ext_agreement(c);
    if (kind == "cotorsion-pair") return check_cotorsion_pair(c);
    if (kind == "extendable") return check_extendable(c);
    if (kind == "dimension-coherence") return check_coherence(c);
    if (kind == "dimension-inequalities") return check_inequalities(c);
    if (kind == "hovey-verify") return check_hovey_verify(c);
    if (kind == "sstype") return check_sstype(c);
    if (kind == "cor-identity") return check_cor_identity(c);
    if (kind == "hovey-lift") return check_hovey_lift(c);
    if (kind == "tower") return check_tower(c);
    if (kind == "gkr-hypotheses") return check_gkr(c);
    if (kind == "quiver-pair") return check_quiver_pair(c);
    if (kind == "phi-identity") return check_phi_identity(c);
    return check_quiver_lift(c);
  }

  Outcome check_algebra(const Json& c) {
    const AlgebraPtr& a = entry(c.at("universe").get<std::string>()).alg;
    Outcome o;
    o.result = Json{{"field", a->field().p()},
                    {"vertices", a->num_vertices()},
                    {"arrows", a->num_arrows()},
                    {"relations", a->quiver().relations.size()},
                    {"dimension", a->dim()},
                    {"nilpotency_index", a->nilpotency_index()}};
    o.summary = "admissible, dimension " + std::to_string(a->dim()) + " over F_" + std::to_string(a->field().p());
    return o;
  }

  Outcome check_universe(const Json& c) {
    const UniversePtr& u = universe(c.at("universe").get<std::string>());
    Outcome o;
    o.result = Json{{"size", u->size()}, {"fingerprint", u->fingerprint()}};
    o.summary = std::to_string(u->size()) + " indecomposables up to dimension " + std::to_string(u->max_dim());
    if (c.contains("expect_size")) {
      const std::size_t want = c.at("expect_size").get<std::size_t>();
      o.result["expect_size"] = want;
      if (want != u->size()) {
        o.verdict = Verdict::fail;
        o.summary += ", expected " + std::to_string(want);
      }
    }
    return o;
  }

  Outcome check_class(const Json& c) {
    const ObjectClass k = klass(c.at("class").get<std::string>());
    const auto& u = *k.universe();
    Outcome o;
    Json ms = Json::array();
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (k.contains(i)) ms.push_back(Json{{"id", u.id(i)}, {"label", u.label(i)}});
    }
    o.summary = k.to_string() + " has " + std::to_string(ms.size()) + " of " + std::to_string(u.size()) +
                " indecomposables";
    o.result = Json{{"members", std::move(ms)}};
    return o;
  }

  Outcome check_ext_agreement(const Json& c) {
    const UniversePtr& u = universe(c.at("universe").get<std::string>());
    const std::size_t max_deg = c.value("max_degree", std::size_t{3});
    homalg::Resolver& r = u->resolver();
    Outcome o;
    Json mismatches = Json::array(), witnesses = Json::array();
    std::size_t compared = 0;
    for (std::size_t i = 0; i < u->size(); ++i) {
      for (std::size_t j = 0; j < u->size(); ++j) {
        for (std::size_t d = 1; d <= max_deg; ++d) {
          ++compared;
          const std::size_t a = r.ext_dim(u->indec(i), u->indec(j), d);
          const std::size_t b = r.ext_dim_injective(u->indec(i), u->indec(j), d);
          if (a == b) continue;
          o.verdict = Verdict::fail;
          mismatches.push_back(Json{{"m", u->id(i)}, {"n", u->id(j)}, {"degree", d}, {"projective", a}, {"injective", b}});
          witnesses.push_back(cotorsion::to_json(cotorsion::ext_witness(u->indec(i), u->indec(j), d, b)));
        }
      }
    }
    o.result = Json{{"compared", compared}, {"max_degree", max_deg}, {"mismatches", std::move(mismatches)},
                    {"witnesses", std::move(witnesses)}};
    o.summary = std::to_string(compared) + " Ext dimensions compared, " +
                std::to_string(o.result["mismatches"].size()) + " mismatches";
    return o;
  }

  Outcome check_cotorsion_pair(const Json& c) {
    CotorsionPair p = cotorsion::make_pair(klass(c.at("x").get<std::string>()), klass(c.at("y").get<std::string>()));
    Outcome o;
    const cotorsion::CheckResult pr = cotorsion::check_pair(p);
    o.result["pair"] = pr.to_json();
    o.verdict = pr.verdict;
    o.summary = pr.message;
    if (pr.verdict != Verdict::pass) return o;
    p.flags.is_pair = true;
    const cotorsion::CompletenessResult cr = cotorsion::check_complete(p, budget(c));
    o.result["complete"] = cr.to_json(p);
    o.verdict = cotorsion::combine(o.verdict, cr.verdict);
    const cotorsion::HereditaryResult hr = cotorsion::check_hereditary(p);
    o.result["hereditary"] = hr.to_json();
    o.summary = std::string("cotorsion pair, completeness ") + cotorsion::to_string(cr.verdict) + ", " +
                (hr.verdict == Verdict::pass ? "hereditary" : "not hereditary");
    return o;
  }

  Outcome check_extendable(const Json& c) {
    const CotorsionPair p = certified_pair(c);
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const cotorsion::ExtendabilityResult r = cotorsion::check_extendable(p, n, side, budget(c));
    Outcome o;
    o.verdict = r.verdict;
    o.result = r.to_json();
    o.summary = side_name(side) + " extendability up to n = " + std::to_string(n) + ": " +
                cotorsion::to_string(r.verdict);
    return o;
  }

  Outcome check_coherence(const Json& c) {
    const CotorsionPair p = certified_pair(c);
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const auto& u = *p.universe();
    Outcome o;
    Json rows = Json::array();
    std::size_t sequences = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const cotorsion::CoherenceResult r = cotorsion::check_dimension_coherence(p, u.indec(i), side, n);
      Verdict v = r.verdict;
      if (r.dim.is_finite() && r.dim.value <= n && !r.sequence) v = cotorsion::combine(v, Verdict::inconclusive);
      sequences += r.sequence.has_value();
      Json j = r.to_json();
      j["member"] = u.id(i);
      j["label"] = u.label(i);
      j["verdict"] = cotorsion::to_string(v);
      rows.push_back(std::move(j));
      o.verdict = cotorsion::combine(o.verdict, v);
    }
    o.result = Json{{"side", side_name(side)}, {"n_max", n}, {"members", std::move(rows)}};
    o.summary = std::to_string(u.size()) + " members, " + std::to_string(sequences) + " witness sequences, " +
                cotorsion::to_string(o.verdict);
    return o;
  }

  Outcome check_inequalities(const Json& c) {
    const CotorsionPair p = certified_pair(c);
    const Side side = parse_side(c, "left");
    const auto& u = *p.universe();
    const auto confs = homalg::generate_conflations(u.resolver(), u.indecs(), c.value("count", std::size_t{200}),
                                                    c.value("seed", 5u));
    Outcome o;
    Json violations = Json::array();
    std::size_t undecided = 0;
    for (const homalg::Conflation& k : confs) {
      const cotorsion::InequalityResult r = cotorsion::check_dimension_inequalities(k, p, side);
      if (r.verdict == Verdict::inconclusive) ++undecided;
      if (r.verdict != Verdict::fail) continue;
      Json j = r.to_json();
      j["conflation"] = cotorsion::to_json(cotorsion::conflation_witness(k, {}));
      violations.push_back(std::move(j));
    }
    if (!violations.empty()) {
      o.verdict = Verdict::fail;
    } else if (undecided) {
      o.verdict = Verdict::inconclusive;
    }
    o.result = Json{{"side", side_name(side)}, {"conflations", confs.size()}, {"undecided", undecided},
                    {"violations", std::move(violations)}};
    o.summary = std::to_string(confs.size()) + " conflations, " + std::to_string(o.result["violations"].size()) +
                " violations, " + std::to_string(undecided) + " undecided";
    return o;
  }

  Outcome check_hovey_verify(const Json& c) {
    const HoveyTriple& t = verified(c.at("triple").get<std::string>());
    Outcome o;
    o.verdict = t.report->verdict;
    o.result = t.report->to_json(t.cw_f, t.c_wf);
    o.result["classes"] = t.classes_json();
    o.result["hereditary"] = t.hereditary();
    o.summary = t.to_string() + (t.verified() ? " is a Hovey triple" : " is not verified") +
                (t.hereditary() ? ", hereditary" : "");
    return o;
  }

  Outcome check_sstype(const Json& c) {
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const HoveyTriple& t = extended(c.at("triple").get<std::string>(), side, n);
    const auto& u = *t.c.universe();
    Outcome o;
    Json rows = Json::array();
    std::size_t disagree = 0, unknown = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        const hovey::ConditionsResult r = hovey::check_sstype(t, u.indec(i), k, side);
        if (!r.agree()) ++disagree;
        unknown += count_if_tri(r, universe::Tri::unknown);
        Json j = r.to_json();
        j["member"] = u.id(i);
        j["label"] = u.label(i);
        rows.push_back(std::move(j));
      }
    }
    if (disagree) o.verdict = Verdict::fail;
    o.result = Json{{"side", side_name(side)}, {"n_max", n}, {"disagreements", disagree}, {"unknown", unknown},
                    {"rows", std::move(rows)}};
    o.summary = std::to_string(disagree) + " disagreements, " + std::to_string(unknown) +
                " undecided conditions over n <= " + std::to_string(n);
    return o;
  }

  Outcome check_cor_identity(const Json& c) {
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const HoveyTriple& t = extended(c.at("triple").get<std::string>(), side, n);
    Outcome o;
    Json rows = Json::array();
    for (std::size_t k = 0; k <= n; ++k) {
      const hovey::IdentityResult r = hovey::check_cor_identity(t, k, side);
      o.verdict = cotorsion::combine(o.verdict, r.verdict);
      Json j = r.to_json();
      j["n"] = k;
      rows.push_back(std::move(j));
      if (r.verdict != Verdict::pass && o.summary.empty()) o.summary = "n = " + std::to_string(k) + ": " + r.message;
    }
    o.result = Json{{"side", side_name(side)}, {"rows", std::move(rows)}};
    if (o.summary.empty()) o.summary = "holds for n <= " + std::to_string(n);
    return o;
  }

  Outcome check_hovey_lift(const Json& c) {
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const HoveyTriple& t = extended(c.at("triple").get<std::string>(), side, n);
    Outcome o;
    Json rows = Json::array();
    for (std::size_t k = 0; k <= n; ++k) {
      const hovey::LiftResult r = hovey::lift_triple(t, k, side, verify_options(c));
      o.verdict = cotorsion::combine(o.verdict, r.verdict);
      Json j = r.to_json();
      j["n"] = k;
      j["lifted"] = r.lifted.to_string();
      rows.push_back(std::move(j));
      if (r.verdict != Verdict::pass && o.summary.empty()) {
        o.summary = "n = " + std::to_string(k) + ": " + cotorsion::to_string(r.verdict) + " for " + r.lifted.to_string();
      }
    }
    o.result = Json{{"side", side_name(side)}, {"rows", std::move(rows)}};
    if (o.summary.empty()) o.summary = "lifted triples verify for n <= " + std::to_string(n);
    return o;
  }

  Outcome check_tower(const Json& c) {
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 3);
    const HoveyTriple& t = extended(c.at("triple").get<std::string>(), side, n);
    const auto& u = *t.c.universe();
    const hovey::FrobeniusCore base = hovey::frobenius_core(t);
    const bool has_expect = c.contains("expect_stable");
    const std::size_t expect = has_expect ? c.at("expect_stable").get<std::size_t>() : 0;
    Outcome o;
    o.verdict = base.verdict;
    Json rows = Json::array();
    std::vector<std::string> counts;
    for (std::size_t k = 0; k <= n; ++k) {
      const hovey::LiftResult l = hovey::lift_triple(t, k, side, verify_options(c));
      Json j{{"n", k}, {"lifted", l.lifted.to_string()}};
      if (!l.lifted.verified() || !l.lifted.hereditary()) {
        o.verdict = cotorsion::combine(o.verdict, Verdict::inconclusive);
        j["verdict"] = "inconclusive";
        rows.push_back(std::move(j));
        counts.push_back("?");
        continue;
      }
      const hovey::FrobeniusCore core = hovey::frobenius_core(l.lifted);
      const hovey::StableComparison cmp = hovey::stable_compare(base, core);
      Verdict v = cotorsion::combine(core.verdict, cmp.verdict);
      if (has_expect && core.stable_classes.size() != expect) v = Verdict::fail;
      o.verdict = cotorsion::combine(o.verdict, v);
      j["verdict"] = cotorsion::to_string(v);
      j["stable_classes"] = core.stable_classes.size();
      j["core"] = core.to_json();
      j["comparison"] = cmp.to_json(u);
      rows.push_back(std::move(j));
      counts.push_back(std::to_string(core.stable_classes.size()));
    }
    o.result = Json{{"side", side_name(side)}, {"base", base.to_json()}, {"levels", std::move(rows)}};
    if (has_expect) o.result["expect_stable"] = expect;
    std::string joined;
    for (const auto& s : counts) joined += (joined.empty() ? "" : ", ") + s;
    o.summary = "stable classes per level: " + joined;
    return o;
  }

  Outcome check_gkr(const Json& c) {
    const auto& ts = c.at("triples");
    const hovey::HypothesisResult r = hovey::check_gkr_hypotheses(
        verified(ts[0].get<std::string>()), verified(ts[1].get<std::string>()), verified(ts[2].get<std::string>()));
    Outcome o;
    o.verdict = r.verdict;
    o.result = r.to_json();
    o.summary = r.message;
    return o;
  }

  Outcome check_quiver_pair(const Json& c) {
    UniverseEntry& e = entry(c.at("universe").get<std::string>());
    const CotorsionPair p = certified_pair(c);
    const Side side = parse_side(c, "left");
    const quiverlift::RepPairResult r = quiverlift::check_rep_pair(*e.rep, p, universe(c.at("universe").get<std::string>()), side);
    Outcome o;
    o.verdict = r.verdict;
    o.result = r.to_json();
    o.summary = (side == Side::left ? "(Phi(X), Rep(Q, Y)) = (" : "(Rep(Q, X), Psi(Y)) = (") + r.pair.x.to_string() +
                ", " + r.pair.y.to_string() + "): " + cotorsion::to_string(r.verdict);
    return o;
  }

  Outcome check_phi_identity(const Json& c) {
    const std::string uid = c.at("universe").get<std::string>();
    UniverseEntry& e = entry(uid);
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 2);
    CotorsionPair p = certified_pair(c);
    if (p.certified() && n > 0) p = cotorsion::with_extendability(p, cotorsion::check_extendable(p, n, side, budget(c)), side);
    Outcome o;
    Json rows = Json::array();
    for (std::size_t k = 0; k <= n; ++k) {
      const hovey::IdentityResult r = quiverlift::check_phi_dimension_identity(*e.rep, p, universe(uid), k, side);
      o.verdict = cotorsion::combine(o.verdict, r.verdict);
      Json j = r.to_json();
      j["n"] = k;
      if (r.lhs.universe() && r.rhs.universe()) j["lhs_subset_rhs"] = r.lhs.subset_of(r.rhs);
      rows.push_back(std::move(j));
      if (r.verdict != Verdict::pass && o.summary.empty()) o.summary = "n = " + std::to_string(k) + ": " + r.message;
    }
    o.result = Json{{"side", side_name(side)}, {"rows", std::move(rows)}};
    if (o.summary.empty()) o.summary = "holds for n <= " + std::to_string(n);
    return o;
  }

  Outcome check_quiver_lift(const Json& c) {
    const std::string uid = c.at("universe").get<std::string>();
    UniverseEntry& e = entry(uid);
    const Side side = parse_side(c, "left");
    const std::size_t n = n_max(c, 2);
    const HoveyTriple& t = extended(c.at("triple").get<std::string>(), side, n);
    Outcome o;
    Json rows = Json::array();
    for (std::size_t k = 0; k <= n; ++k) {
      const quiverlift::RepLiftResult r = quiverlift::lift_rep_triple(*e.rep, t, universe(uid), k, side, verify_options(c));
      o.verdict = cotorsion::combine(o.verdict, r.verdict);
      Json j = r.to_json();
      j["n"] = k;
      rows.push_back(std::move(j));
      if (r.verdict != Verdict::pass && o.summary.empty()) {
        std::string why = !r.problems.empty() ? r.problems.front()
                          : r.c.verdict != Verdict::pass ? r.c.message
                          : r.w.verdict != Verdict::pass ? r.w.message
                          : r.f.verdict != Verdict::pass ? r.f.message
                                                          : "stable comparison " + cotorsion::to_string(r.tower.verdict);
        o.summary = "n = " + std::to_string(k) + ": " + why;
      }
    }
    o.result = Json{{"side", side_name(side)}, {"rows", std::move(rows)}};
    if (o.summary.empty()) o.summary = "both routes agree for n <= " + std::to_string(n);
    return o;
  }

  Json universes_json() {
    Json out = Json::object();
    for (auto& [id, e] : universes_) {
      Json j{{"algebra", bqa::algebra_to_json(*e.alg)}};
      if (e.rep) {
        j["shape"] = e.rep->shape().to_json();
        j["value"] = e.value;
      }
      if (e.u) {
        j["max_dim"] = e.u->max_dim();
        j["size"] = e.u->size();
        j["fingerprint"] = e.u->fingerprint();
        Json ms = Json::array();
        for (std::size_t i = 0; i < e.u->size(); ++i) {
          ms.push_back(Json{{"id", e.u->id(i)}, {"label", e.u->label(i)}, {"dims", e.u->indec(i).dims()}});
        }
        j["members"] = std::move(ms);
      }
      out[id] = std::move(j);
    }
    return out;
  }

  const Json& sc_;
  RunOptions opts_;
  std::map<std::string, UniverseEntry> universes_;
  std::map<std::string, ObjectClass> classes_;
  std::map<std::string, TripleEntry> triples_;
};

}  // namespace

RunOutcome run_scenario(const Json& scenario, const RunOptions& opts) {
  try {
    return Runner(scenario, opts).run();
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("malformed scenario: ") + e.what());
  }
}

}  // namespace cotlab::cli
