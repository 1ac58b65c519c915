#include "witness.hpp"

#include <functional>
#include <set>
#include <stdexcept>

#include "cotlab/error.hpp"
#include "cotlab/homalg.hpp"
#include "cotlab/linfield.hpp"

namespace cotlab::cli {

using bqa::AlgebraPtr;
using bqa::Module;
using bqa::ModuleMap;

namespace {

const std::set<std::string> kKinds = {"ext",      "orthogonal_gap", "conflation",
                                      "sequence", "thickness",      "class_difference"};

struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Rejected(what);
}

std::vector<Module> module_list(const AlgebraPtr& alg, const Json& j) {
  std::vector<Module> out;
  for (const Json& m : j) out.push_back(bqa::parse_module(alg, m));
  return out;
}

ModuleMap checked_map(const Module& dom, const Module& cod, const Json& j, const std::string& name) {
  ModuleMap f = bqa::parse_map(dom, cod, j);
  require(bqa::is_module_map(dom, cod, f), name + " is not a module map");
  return f;
}

std::size_t ext(const Module& m, const Module& n, std::size_t deg) { return homalg::ext_dim_injective(m, n, deg); }

// Every indecomposable summand of m is isomorphic to a listed module.
bool in_additive_closure(const Module& m, const std::vector<Module>& list) {
  for (const homalg::Summand& s : homalg::decompose(m)) {
    bool found = false;
    for (const Module& l : list) {
      if (l.dims() == s.module.dims() && bqa::isomorphism_of_indecomposables(s.module, l)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void check_claims(const AlgebraPtr& alg, const Json& claims, const std::function<const Module&(const std::string&)>& term) {
  for (const Json& c : claims) {
    const std::string name = c.at("term").get<std::string>();
    const Module& t = term(name);
    const std::string dir = c.at("direction").get<std::string>();
    require(dir == "from" || dir == "into", "claim direction must be from or into");
    const std::size_t deg = c.at("degree").get<std::size_t>();
    const bool expect_zero = c.at("expect_zero").get<bool>();
    bool any = false;
    for (const Module& z : module_list(alg, c.at("against"))) {
      const std::size_t e = dir == "from" ? ext(t, z, deg) : ext(z, t, deg);
      if (e != 0) {
        any = true;
        if (expect_zero) {
          throw Rejected("claim on " + name + ": Ext^" + std::to_string(deg) + " is " + std::to_string(e) +
                         ", expected 0");
        }
      }
    }
    if (!expect_zero) require(any, "claim on " + name + ": Ext^" + std::to_string(deg) + " vanishes everywhere");
  }
}

std::size_t span_rank(const std::vector<ModuleMap>& maps, const bqa::PrimeField& f) {
  if (maps.empty()) return 0;
  linfield::Mat acc = bqa::flatten(maps[0], f);
  for (std::size_t i = 1; i < maps.size(); ++i) acc = linfield::hstack(acc, bqa::flatten(maps[i], f));
  return linfield::rank(acc);
}

struct ParsedConflation {
  Module left, mid, right;
  ModuleMap incl, proj;
};

ParsedConflation parse_conflation(const AlgebraPtr& alg, const Json& w) {
  ParsedConflation c{bqa::parse_module(alg, w.at("left")), bqa::parse_module(alg, w.at("mid")),
                     bqa::parse_module(alg, w.at("right")), {}, {}};
  c.incl = checked_map(c.left, c.mid, w.at("incl"), "incl");
  c.proj = checked_map(c.mid, c.right, w.at("proj"), "proj");
  require(bqa::is_injective(c.incl), "incl is not injective");
  require(bqa::is_surjective(c.proj), "proj is not surjective");
  require(bqa::is_zero_map(bqa::compose(c.proj, c.incl)), "proj after incl is not zero");
  require(c.mid.total_dim() == c.left.total_dim() + c.right.total_dim(), "dimensions do not add up");
  return c;
}

void verify_ext(const AlgebraPtr& alg, const Json& w) {
  const Module m = bqa::parse_module(alg, w.at("m"));
  const Module n = bqa::parse_module(alg, w.at("n"));
  const std::size_t deg = w.at("degree").get<std::size_t>();
  const std::size_t e = ext(m, n, deg);
  require(e == w.at("dim").get<std::size_t>(), "Ext^" + std::to_string(deg) + " recomputes to " + std::to_string(e));
}

void verify_gap(const AlgebraPtr& alg, const Json& w) {
  const Module m = bqa::parse_module(alg, w.at("module"));
  const std::string side = w.at("side").get<std::string>();
  require(side == "left" || side == "right", "side must be left or right");
  require(homalg::is_indecomposable(m), "module is not indecomposable");
  for (const Module& z : module_list(alg, w.at("orthogonal_to"))) {
    const std::size_t e = side == "right" ? ext(z, m, 1) : ext(m, z, 1);
    require(e == 0, "module is not orthogonal to a listed member");
  }
  require(!in_additive_closure(m, module_list(alg, w.at("excluded_from"))), "module lies in the excluded class");
}

void verify_conflation(const AlgebraPtr& alg, const Json& w) {
  const ParsedConflation c = parse_conflation(alg, w);
  check_claims(alg, w.value("claims", Json::array()), [&](const std::string& t) -> const Module& {
    if (t == "left") return c.left;
    if (t == "mid") return c.mid;
    if (t == "right") return c.right;
    throw Rejected("unknown claim term " + t);
  });
  if (!w.contains("hom_onto")) return;
  const Json& h = w.at("hom_onto");
  const std::string map = h.at("map").get<std::string>();
  for (const Module& z : module_list(alg, h.at("against"))) {
    if (map == "restriction") {
      std::vector<ModuleMap> images;
      for (const ModuleMap& g : bqa::hom_space(c.mid, z)) images.push_back(bqa::compose(g, c.incl));
      require(span_rank(images, alg->field()) == bqa::hom_dim(c.left, z), "Hom(mid, Y) -> Hom(left, Y) is not onto");
    } else if (map == "extension") {
      std::vector<ModuleMap> images;
      for (const ModuleMap& g : bqa::hom_space(z, c.mid)) images.push_back(bqa::compose(c.proj, g));
      require(span_rank(images, alg->field()) == bqa::hom_dim(z, c.right), "Hom(X, mid) -> Hom(X, right) is not onto");
    } else {
      throw Rejected("unknown hom_onto map " + map);
    }
  }
}

void verify_sequence(const AlgebraPtr& alg, const Json& w) {
  const std::vector<Module> terms = module_list(alg, w.at("terms"));
  const Json& jm = w.at("maps");
  require(terms.size() >= 2 && jm.size() + 1 == terms.size(), "sequence needs k + 1 terms and k maps");
  std::vector<ModuleMap> maps;
  for (std::size_t i = 0; i < jm.size(); ++i) {
    maps.push_back(checked_map(terms[i], terms[i + 1], jm[i], "map " + std::to_string(i)));
  }
  require(bqa::is_injective(maps.front()), "first map is not injective");
  require(bqa::is_surjective(maps.back()), "last map is not surjective");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
    require(bqa::is_zero_map(bqa::compose(maps[i + 1], maps[i])), "composite at t" + std::to_string(i + 1) + " is not zero");
    const auto [k, inc] = bqa::kernel(terms[i + 1], terms[i + 2], maps[i + 1]);
    std::size_t img = 0;
    for (const auto& b : maps[i].blocks) img += linfield::rank(b);
    require(k.total_dim() == img, "not exact at t" + std::to_string(i + 1));
  }
  check_claims(alg, w.value("claims", Json::array()), [&](const std::string& t) -> const Module& {
    require(t.size() > 1 && t[0] == 't', "unknown claim term " + t);
    const std::size_t i = std::stoul(t.substr(1));
    require(i < terms.size(), "claim term out of range");
    return terms[i];
  });
}

void verify_thickness(const AlgebraPtr& alg, const Json& w) {
  const ParsedConflation c = parse_conflation(alg, w);
  const std::vector<Module> cls = module_list(alg, w.at("class"));
  const std::string out = w.at("outside").get<std::string>();
  const bool in[3] = {in_additive_closure(c.left, cls), in_additive_closure(c.mid, cls),
                      in_additive_closure(c.right, cls)};
  const char* names[3] = {"left", "mid", "right"};
  for (int i = 0; i < 3; ++i) {
    if (out == names[i]) {
      require(!in[i], std::string("the ") + names[i] + " term lies in the class");
    } else {
      require(in[i], std::string("the ") + names[i] + " term is not in the class");
    }
  }
  require(out == "left" || out == "mid" || out == "right", "outside must name a term");
}

void verify_difference(const AlgebraPtr& alg, const Json& w) {
  const Module m = bqa::parse_module(alg, w.at("module"));
  const bool l = in_additive_closure(m, module_list(alg, w.at("lhs")));
  const bool r = in_additive_closure(m, module_list(alg, w.at("rhs")));
  require(l == w.at("in_lhs").get<bool>(), "membership in lhs is not as stated");
  require(r == w.at("in_rhs").get<bool>(), "membership in rhs is not as stated");
  require(l != r, "the module does not separate the classes");
}

void walk(const AlgebraPtr& alg, const Json& j, const std::string& where, BatchCheck& out) {
  if (is_witness(j)) {
    ++out.checked;
    const WitnessCheck c = verify_witness(alg, j);
    if (!c.ok) out.failures.push_back(where + ": " + c.kind + ": " + c.message);
    return;
  }
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) walk(alg, it.value(), where + "/" + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) walk(alg, j[i], where + "/" + std::to_string(i), out);
  }
}

void merge(BatchCheck& into, const BatchCheck& from) {
  into.checked += from.checked;
  into.failures.insert(into.failures.end(), from.failures.begin(), from.failures.end());
}

}  // namespace

bool is_witness(const Json& j) {
  return j.is_object() && j.contains("kind") && j["kind"].is_string() && kKinds.count(j["kind"].get<std::string>());
}

WitnessCheck verify_witness(const AlgebraPtr& alg, const Json& w) {
  WitnessCheck r;
  r.kind = w.is_object() ? w.value("kind", std::string()) : std::string();
  try {
    if (r.kind == "ext") {
      verify_ext(alg, w);
    } else if (r.kind == "orthogonal_gap") {
      verify_gap(alg, w);
    } else if (r.kind == "conflation") {
      verify_conflation(alg, w);
    } else if (r.kind == "sequence") {
      verify_sequence(alg, w);
    } else if (r.kind == "thickness") {
      verify_thickness(alg, w);
    } else if (r.kind == "class_difference") {
      verify_difference(alg, w);
    } else {
      throw Rejected("unknown witness kind '" + r.kind + "'");
    }
  } catch (const Rejected& e) {
    r.ok = false;
    r.message = e.what();
  } catch (const Error& e) {
    r.ok = false;
    r.message = e.what();
  } catch (const Json::exception& e) {
    r.ok = false;
    r.message = std::string("malformed witness: ") + e.what();
  } catch (const std::logic_error& e) {
    r.ok = false;
    r.message = std::string("malformed witness: ") + e.what();
  }
  if (r.ok) r.message = "ok";
  return r;
}

BatchCheck verify_all(const AlgebraPtr& alg, const Json& j) {
  BatchCheck out;
  walk(alg, j, "", out);
  return out;
}

BatchCheck verify_document(const Json& doc) {
  if (!doc.is_object()) throw MalformedInput("witness document must be a JSON object");
  BatchCheck out;
  if (doc.value("schema", std::string()) == "cotlab-report/1") {
    const Json& us = doc.at("universes");
    for (const Json& c : doc.at("checks")) {
      const std::string u = c.value("universe", std::string());
      if (!us.contains(u)) throw MalformedInput("check '" + c.value("name", std::string()) + "' names an unknown universe");
      const AlgebraPtr alg = bqa::parse_algebra(us.at(u).at("algebra"));
      BatchCheck b;
      walk(alg, c.value("result", Json::object()), c.value("name", std::string()), b);
      merge(out, b);
    }
    return out;
  }
  if (!doc.contains("algebra")) throw MalformedInput("witness document needs an \"algebra\"");
  const AlgebraPtr alg = bqa::parse_algebra(doc.at("algebra"));
  Json list = Json::array();
  if (doc.contains("witness")) list.push_back(doc.at("witness"));
  if (doc.contains("witnesses")) {
    for (const Json& w : doc.at("witnesses")) list.push_back(w);
  }
  if (!doc.contains("witness") && !doc.contains("witnesses")) {
    throw MalformedInput("witness document needs \"witness\" or \"witnesses\"");
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    ++out.checked;
    const WitnessCheck c = verify_witness(alg, list[i]);
    if (!c.ok) out.failures.push_back("witness " + std::to_string(i) + ": " + c.kind + ": " + c.message);
  }
  return out;
}

}  // namespace cotlab::cli
