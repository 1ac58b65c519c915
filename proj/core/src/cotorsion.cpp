#include "cotlab/cotorsion.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "cotlab/error.hpp"

namespace cotlab::cotorsion {

using bqa::Elem;
using homalg::Resolver;
using universe::Perp;
using universe::Tri;

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// Caps keeping candidate constructions at desk scale.
constexpr std::size_t kUniversalDimCap = 48;
constexpr std::size_t kSearchMapsPerMidterm = 4096;
constexpr std::size_t kSearchMapsPerTarget = 40000;

std::optional<std::size_t> exact_index(const universe::Universe& u, const Module& m) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.indec(i) == m) return i;
  }
  return std::nullopt;
}

std::size_t ext_between(const universe::Universe& u, const Module& m, const Module& n, std::size_t deg) {
  auto i = exact_index(u, m);
  auto j = exact_index(u, n);
  if (i && j) return u.ext(*i, *j, deg);
  return u.resolver().ext_dim(m, n, deg);
}

std::vector<Module> members(const ObjectClass& c) {
  std::vector<Module> out;
  for (std::size_t i : c.indices()) out.push_back(c.universe()->indec(i));
  return out;
}

Json modules_json(const std::vector<Module>& ms) {
  Json arr = Json::array();
  for (const Module& m : ms) arr.push_back(bqa::module_to_json(m));
  return arr;
}

Json conflation_json(const Conflation& c) {
  return Json{{"left", bqa::module_to_json(c.left)},
              {"mid", bqa::module_to_json(c.mid)},
              {"right", bqa::module_to_json(c.right)},
              {"incl", bqa::map_to_json(c.left, c.incl)},
              {"proj", bqa::map_to_json(c.mid, c.proj)}};
}

Json claim_json(const ExtClaim& cl) {
  return Json{{"term", cl.term},
              {"direction", cl.direction},
              {"degree", cl.degree},
              {"against", modules_json(cl.against)},
              {"expect_zero", cl.expect_zero}};
}

Json witness_json(const Witness& w) {
  Json j{{"kind", w.kind}};
  for (auto it = w.data.begin(); it != w.data.end(); ++it) j[it.key()] = it.value();
  return j;
}

Json witnesses_json(const std::vector<Witness>& ws) {
  Json arr = Json::array();
  for (const Witness& w : ws) arr.push_back(witness_json(w));
  return arr;
}

Witness gap_witness(const Module& n, Perp side, const ObjectClass& orth_to, const ObjectClass& excluded) {
  return {"orthogonal_gap",
          Json{{"module", bqa::module_to_json(n)},
               {"side", side == Perp::right ? "right" : "left"},
               {"orthogonal_to", modules_json(members(orth_to))},
               {"excluded_from", modules_json(members(excluded))}}};
}

Conflation identity_conflation(const Module& m, bool precover) {
  const Module z = Module::zero(m.algebra_ptr());
  if (precover) return {z, m, m, bqa::zero_map(z, m), bqa::identity_map(m)};
  return {m, m, z, bqa::identity_map(m), bqa::zero_map(m, z)};
}

Conflation cover_conflation(Resolver& r, const Module& m) {
  const Resolver::Step& s = r.cover_step(m);
  return {s.next, s.approx.object, m, s.next_map, s.approx.map};
}

Conflation envelope_conflation(Resolver& r, const Module& m) {
  const Resolver::Step& s = r.envelope_step(m);
  return {m, s.approx.object, s.next, s.approx.map, s.next_map};
}

bool precover_ok(const CotorsionPair& p, const Conflation& c) { return p.in_x(c.mid) && p.in_y(c.left); }
bool preenvelope_ok(const CotorsionPair& p, const Conflation& c) { return p.in_y(c.mid) && p.in_x(c.right); }

std::optional<Conflation> universal_precover(const CotorsionPair& p, const Module& m) {
  const auto& u = *p.universe();
  std::vector<Module> parts;
  std::vector<ModuleMap> maps;
  std::size_t total = 0;
  for (std::size_t i : p.x.indices()) {
    for (ModuleMap& f : bqa::hom_space(u.indec(i), m)) {
      parts.push_back(u.indec(i));
      maps.push_back(std::move(f));
      total += u.indec(i).total_dim();
      if (total > kUniversalDimCap) return std::nullopt;
    }
  }
  if (parts.empty()) return std::nullopt;
  bqa::DirectSum ds = bqa::direct_sum(parts);
  ModuleMap phi = bqa::row_map(maps);
  if (!bqa::is_surjective(phi)) return std::nullopt;
  auto [k, inc] = bqa::kernel(ds.sum, m, phi);
  return Conflation{std::move(k), std::move(ds.sum), m, std::move(inc), std::move(phi)};
}

std::optional<Conflation> universal_preenvelope(const CotorsionPair& p, const Module& m) {
  const auto& u = *p.universe();
  std::vector<Module> parts;
  std::vector<ModuleMap> maps;
  std::size_t total = 0;
  for (std::size_t j : p.y.indices()) {
    for (ModuleMap& f : bqa::hom_space(m, u.indec(j))) {
      parts.push_back(u.indec(j));
      maps.push_back(std::move(f));
      total += u.indec(j).total_dim();
      if (total > kUniversalDimCap) return std::nullopt;
    }
  }
  if (parts.empty()) return std::nullopt;
  bqa::DirectSum ds = bqa::direct_sum(parts);
  ModuleMap psi = bqa::column_map(maps);
  if (!bqa::is_injective(psi)) return std::nullopt;
  bqa::Quotient q = bqa::cokernel(m, ds.sum, psi);
  return Conflation{m, std::move(ds.sum), std::move(q.module), std::move(psi), std::move(q.projection)};
}

// Nondecreasing index tuples of length 1..4 whose total dimension lies in
// [lo, hi] and which dominate `need` vertexwise.
void midterm_tuples(const universe::Universe& u, const std::vector<std::size_t>& pool,
                    const std::vector<std::size_t>& need, std::size_t lo, std::size_t hi,
                    const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> cur;
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t total) {
    if (!cur.empty() && total >= lo) {
      std::vector<std::size_t> dims(need.size(), 0);
      for (std::size_t i : cur) {
        for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += u.indec(i).dim(v);
      }
      bool dominates = true;
      for (std::size_t v = 0; v < dims.size(); ++v) dominates = dominates && dims[v] >= need[v];
      if (dominates && visit(cur)) return true;
    }
    if (cur.size() == 4) return false;
    for (std::size_t k = start; k < pool.size(); ++k) {
      const std::size_t d = u.indec(pool[k]).total_dim();
      if (total + d > hi) continue;
      cur.push_back(pool[k]);
      if (rec(k, total + d)) return true;
      cur.pop_back();
    }
    return false;
  };
  rec(0, 0);
}

// Coefficient vectors for a Hom basis of size h: all nonzero ones when
// p^h <= cap, otherwise `cap` random ones from a fixed seed.
template <class F>
bool for_each_combination(unsigned p, std::size_t h, std::size_t cap, std::mt19937& rng, F&& f) {
  double count = 1;
  for (std::size_t i = 0; i < h; ++i) count *= p;
  std::vector<Elem> c(h, 0);
  if (count <= static_cast<double>(cap)) {
    while (true) {
      std::size_t i = 0;
      while (i < h && c[i] == p - 1) c[i++] = 0;
      if (i == h) return false;
      ++c[i];
      if (f(c)) return true;
    }
  }
  std::uniform_int_distribution<unsigned> pick(0, p - 1);
  for (std::size_t t = 0; t < cap; ++t) {
    for (Elem& e : c) e = static_cast<Elem>(pick(rng));
    if (f(c)) return true;
  }
  return false;
}

std::size_t effective_budget(const universe::Universe& u, const std::vector<std::size_t>& pool, const Module& m,
                             std::size_t budget) {
  if (budget) return std::max(budget, m.total_dim());
  std::size_t largest = 0;
  for (std::size_t i : pool) largest = std::max(largest, u.indec(i).total_dim());
  return std::max(3 * m.total_dim(), m.total_dim() + largest);
}

struct Found {
  std::string method;
  Conflation conflation;
};

std::optional<Found> precover_direct(const CotorsionPair& p, const Module& m) {
  Resolver& r = p.universe()->resolver();
  if (p.in_x(m)) return Found{"identity", identity_conflation(m, true)};
  Conflation cov = cover_conflation(r, m);
  if (precover_ok(p, cov)) return Found{"projective-cover", std::move(cov)};
  if (auto c = universal_precover(p, m); c && precover_ok(p, *c)) return Found{"universal", std::move(*c)};
  return std::nullopt;
}

std::optional<Found> preenvelope_direct(const CotorsionPair& p, const Module& m) {
  Resolver& r = p.universe()->resolver();
  if (p.in_y(m)) return Found{"identity", identity_conflation(m, false)};
  Conflation env = envelope_conflation(r, m);
  if (preenvelope_ok(p, env)) return Found{"injective-envelope", std::move(env)};
  if (auto c = universal_preenvelope(p, m); c && preenvelope_ok(p, *c)) return Found{"universal", std::move(*c)};
  return std::nullopt;
}

ApproximationWitness make_witness(const CotorsionPair& p, const Module& m, Direction d, Found f) {
  ApproximationWitness w;
  w.target = exact_index(*p.universe(), m).value_or(std::numeric_limits<std::size_t>::max());
  w.direction = d;
  w.method = std::move(f.method);
  w.conflation = std::move(f.conflation);
  return w;
}

std::vector<ExtClaim> precover_claims(const CotorsionPair& p) {
  return {{"mid", "from", 1, members(p.y), true}, {"left", "into", 1, members(p.x), true}};
}

std::vector<ExtClaim> preenvelope_claims(const CotorsionPair& p) {
  return {{"mid", "into", 1, members(p.x), true}, {"right", "from", 1, members(p.y), true}};
}

void require_pair(const CotorsionPair& p) {
  if (p.flags.is_pair.has_value() ? !*p.flags.is_pair : check_pair(p).verdict != Verdict::pass) {
    throw PreconditionError("the classes do not form a cotorsion pair over the universe");
  }
}

void require_certified(const CotorsionPair& p) {
  if (!p.certified()) {
    throw PreconditionError("the pair is not certified complete and hereditary; run certify first");
  }
}

std::optional<std::size_t> value_of(const Dim& d) {
  if (d.is_finite()) return d.value;
  if (d.is_infinite()) return kInf;
  return std::nullopt;
}

std::size_t plus_one(std::size_t v) { return v == kInf ? kInf : v + 1; }
std::size_t minus_one_floor(std::size_t v) { return v == kInf ? kInf : (v == 0 ? 0 : v - 1); }
std::string show(std::size_t v) { return v == kInf ? "inf" : std::to_string(v); }

}  // namespace

// ---------------------------------------------------------------------------
// Basic types
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

Json to_json(const Witness& w) { return witness_json(w); }
Json to_json(const std::vector<Witness>& ws) { return witnesses_json(ws); }

Witness ext_witness(const Module& m, const Module& n, std::size_t degree, std::size_t dim) {
  return {"ext", Json{{"m", bqa::module_to_json(m)}, {"n", bqa::module_to_json(n)}, {"degree", degree}, {"dim", dim}}};
}

Witness conflation_witness(const Conflation& c, const std::vector<ExtClaim>& claims) {
  Json j = conflation_json(c);
  Json arr = Json::array();
  for (const ExtClaim& cl : claims) arr.push_back(claim_json(cl));
  j["claims"] = std::move(arr);
  return {"conflation", std::move(j)};
}

bool CotorsionPair::in_x(const Module& m) const {
  if (m.is_zero()) return true;
  const auto& u = *universe();
  for (std::size_t j : y.indices()) {
    if (ext_between(u, m, u.indec(j), 1) != 0) return false;
  }
  return true;
}

bool CotorsionPair::in_y(const Module& m) const {
  if (m.is_zero()) return true;
  const auto& u = *universe();
  for (std::size_t i : x.indices()) {
    if (ext_between(u, u.indec(i), m, 1) != 0) return false;
  }
  return true;
}

bool CotorsionPair::certified() const {
  return flags.is_pair.value_or(false) && flags.complete == Verdict::pass && flags.hereditary.value_or(false);
}

CotorsionPair make_pair(const ObjectClass& x, const ObjectClass& y) {
  if (x.universe() != y.universe()) throw IncompatibleInput("pair classes live over different universes");
  return {x, y, {}};
}

Json CheckResult::to_json() const {
  return Json{{"verdict", to_string(verdict)}, {"message", message}, {"witnesses", witnesses_json(witnesses)}};
}

// ---------------------------------------------------------------------------
// Pair and completeness
// ---------------------------------------------------------------------------

CheckResult check_pair(const CotorsionPair& p) {
  const auto& u = *p.universe();
  CheckResult r;
  for (std::size_t i : p.x.indices()) {
    for (std::size_t j : p.y.indices()) {
      const std::size_t e = u.ext(i, j, 1);
      if (e == 0) continue;
      r.verdict = Verdict::fail;
      r.message = "Ext^1(" + u.label(i) + ", " + u.label(j) + ") = " + std::to_string(e) + " with " + u.label(i) +
                  " in x and " + u.label(j) + " in y";
      r.witnesses.push_back(ext_witness(u.indec(i), u.indec(j), 1, e));
      return r;
    }
  }
  const ObjectClass right = universe::orthogonal(p.x, Perp::right);
  for (std::size_t j : right.indices()) {
    if (p.y.contains(j)) continue;
    r.verdict = Verdict::fail;
    r.message = u.label(j) + " lies in x^perp but not in y";
    r.witnesses.push_back(gap_witness(u.indec(j), Perp::right, p.x, p.y));
    return r;
  }
  const ObjectClass left = universe::orthogonal(p.y, Perp::left);
  for (std::size_t i : left.indices()) {
    if (p.x.contains(i)) continue;
    r.verdict = Verdict::fail;
    r.message = u.label(i) + " lies in ^perp y but not in x";
    r.witnesses.push_back(gap_witness(u.indec(i), Perp::left, p.y, p.x));
    return r;
  }
  r.message = "x^perp = y and ^perp y = x over the universe";
  return r;
}

std::optional<ApproximationWitness> special_precover(const CotorsionPair& p, const Module& m, std::size_t budget) {
  if (auto f = precover_direct(p, m)) return make_witness(p, m, Direction::precover, std::move(*f));
  Resolver& r = p.universe()->resolver();
  const Conflation cov = cover_conflation(r, m);
  if (auto pre = preenvelope_direct(p, cov.left)) {
    auto po = homalg::pushout_conflation(cov, pre->conflation.mid, pre->conflation.incl);
    if (precover_ok(p, po.conflation)) {
      return make_witness(p, m, Direction::precover, {"constructive", std::move(po.conflation)});
    }
  }
  if (auto c = search_deflation(p.universe(), p.x.indices(), m, budget,
                                [&](const Conflation& k) { return p.in_y(k.left); })) return make_witness(p, m, Direction::precover, {"search", std::move(*c)});
  return std::nullopt;
}

std::optional<ApproximationWitness> special_preenvelope(const CotorsionPair& p, const Module& m, std::size_t budget) {
  if (auto f = preenvelope_direct(p, m)) return make_witness(p, m, Direction::preenvelope, std::move(*f));
  Resolver& r = p.universe()->resolver();
  const Conflation env = envelope_conflation(r, m);
  if (auto pre = precover_direct(p, env.right)) {
    auto pb = homalg::pullback_conflation(env, pre->conflation.mid, pre->conflation.proj);
    if (preenvelope_ok(p, pb.conflation)) {
      return make_witness(p, m, Direction::preenvelope, {"constructive", std::move(pb.conflation)});
    }
  }
  if (auto c = search_inflation(p.universe(), p.y.indices(), m, budget,
                                [&](const Conflation& k) { return p.in_x(k.right); })) {
    return make_witness(p, m, Direction::preenvelope, {"search", std::move(*c)});
  }
  return std::nullopt;
}

std::optional<Conflation> search_deflation(const UniversePtr& up, const std::vector<std::size_t>& pool_in,
                                           const Module& m, std::size_t budget,
                                           const std::function<bool(const Conflation&)>& accept) {
  const auto& u = *up;
  std::vector<std::size_t> pool;
  for (std::size_t i : pool_in) {
    if (bqa::hom_dim(u.indec(i), m) > 0) pool.push_back(i);
  }
  std::mt19937 rng(0x5eed);
  std::size_t tried = 0;
  std::optional<Conflation> found;
  midterm_tuples(u, pool, m.dims(), m.total_dim(), effective_budget(u, pool, m, budget), [&](const std::vector<std::size_t>& t) {
    std::vector<Module> parts;
    for (std::size_t i : t) parts.push_back(u.indec(i));
    bqa::DirectSum ds = bqa::direct_sum(parts);
    auto basis = bqa::hom_space(ds.sum, m);
    if (basis.empty()) return false;
    return for_each_combination(m.field().p(), basis.size(), kSearchMapsPerMidterm, rng, [&](const std::vector<Elem>& c) {
      if (++tried > kSearchMapsPerTarget) return true;
      ModuleMap f = bqa::linear_combination(ds.sum, m, basis, c);
      if (!bqa::is_surjective(f)) return false;
      auto [k, inc] = bqa::kernel(ds.sum, m, f);
      Conflation conf{std::move(k), ds.sum, m, std::move(inc), std::move(f)};
      if (!accept(conf)) return false;
      found = std::move(conf);
      return true;
    });
  });
  return found;
}

std::optional<Conflation> search_inflation(const UniversePtr& up, const std::vector<std::size_t>& pool_in,
                                           const Module& m, std::size_t budget,
                                           const std::function<bool(const Conflation&)>& accept) {
  const auto& u = *up;
  std::vector<std::size_t> pool;
  for (std::size_t j : pool_in) {
    if (bqa::hom_dim(m, u.indec(j)) > 0) pool.push_back(j);
  }
  std::mt19937 rng(0x5eed);
  std::size_t tried = 0;
  std::optional<Conflation> found;
  midterm_tuples(u, pool, m.dims(), m.total_dim(), effective_budget(u, pool, m, budget), [&](const std::vector<std::size_t>& t) {
    std::vector<Module> parts;
    for (std::size_t j : t) parts.push_back(u.indec(j));
    bqa::DirectSum ds = bqa::direct_sum(parts);
    auto basis = bqa::hom_space(m, ds.sum);
    if (basis.empty()) return false;
    return for_each_combination(m.field().p(), basis.size(), kSearchMapsPerMidterm, rng, [&](const std::vector<Elem>& c) {
      if (++tried > kSearchMapsPerTarget) return true;
      ModuleMap f = bqa::linear_combination(m, ds.sum, basis, c);
      if (!bqa::is_injective(f)) return false;
      bqa::Quotient q = bqa::cokernel(m, ds.sum, f);
      Conflation conf{m, ds.sum, std::move(q.module), std::move(f), std::move(q.projection)};
      if (!accept(conf)) return false;
      found = std::move(conf);
      return true;
    });
  });
  return found;
}

CompletenessResult check_complete(const CotorsionPair& p, std::size_t budget) {
  require_pair(p);
  const auto& u = *p.universe();
  CompletenessResult r;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (auto w = special_precover(p, u.indec(i), budget)) {
      w->target = i;
      r.witnesses.push_back(std::move(*w));
    } else {
      r.missing_precover.push_back(i);
    }
    if (auto w = special_preenvelope(p, u.indec(i), budget)) {
      w->target = i;
      r.witnesses.push_back(std::move(*w));
    } else {
      r.missing_preenvelope.push_back(i);
    }
  }
  if (!r.missing_precover.empty() || !r.missing_preenvelope.empty()) r.verdict = Verdict::inconclusive;
  return r;
}

Json CompletenessResult::to_json(const CotorsionPair& p) const {
  const auto& u = *p.universe();
  Json ws = Json::array();
  for (const ApproximationWitness& w : witnesses) {
    const bool pre = w.direction == Direction::precover;
    Witness wit = conflation_witness(w.conflation, pre ? precover_claims(p) : preenvelope_claims(p));
    Json j = witness_json(wit);
    j["target"] = u.id(w.target);
    j["direction"] = pre ? "precover" : "preenvelope";
    j["method"] = w.method;
    ws.push_back(std::move(j));
  }
  auto ids = [&](const std::vector<std::size_t>& v) {
    Json a = Json::array();
    for (std::size_t i : v) a.push_back(u.id(i));
    return a;
  };
  return Json{{"verdict", to_string(verdict)},
              {"missing_precover", ids(missing_precover)},
              {"missing_preenvelope", ids(missing_preenvelope)},
              {"witnesses", std::move(ws)}};
}

// ---------------------------------------------------------------------------
// Heredity
// ---------------------------------------------------------------------------

Json HereditaryResult::to_json() const {
  return Json{{"verdict", to_string(verdict)},
              {"ext_vanishing", ext_vanishing},
              {"closure", closure},
              {"conflations_checked", conflations_checked},
              {"message", message},
              {"witnesses", witnesses_json(witnesses)}};
}

HereditaryResult check_hereditary(const CotorsionPair& p, std::size_t conflation_count, unsigned seed) {
  require_pair(p);
  const auto& u = *p.universe();
  HereditaryResult r;
  for (std::size_t d = 1; d <= 3 && r.ext_vanishing; ++d) {
    for (std::size_t i : p.x.indices()) {
      for (std::size_t j : p.y.indices()) {
        const std::size_t e = u.ext(i, j, d);
        if (e == 0) continue;
        r.ext_vanishing = false;
        r.message = "Ext^" + std::to_string(d) + "(" + u.label(i) + ", " + u.label(j) + ") = " + std::to_string(e);
        r.witnesses.push_back(ext_witness(u.indec(i), u.indec(j), d, e));
        break;
      }
      if (!r.ext_vanishing) break;
    }
  }
  const auto confs = homalg::generate_conflations(u.resolver(), u.indecs(), conflation_count, seed);
  for (const Conflation& c : confs) {
    ++r.conflations_checked;
    const bool xa = p.in_x(c.left), xb = p.in_x(c.mid), xc = p.in_x(c.right);
    if (xb && xc && !xa) {
      r.closure = false;
      r.witnesses.push_back(conflation_witness(c, {{"mid", "from", 1, members(p.y), true},
                                                   {"right", "from", 1, members(p.y), true},
                                                   {"left", "from", 1, members(p.y), false}}));
      if (r.message.empty()) r.message = "x is not closed under kernels of deflations";
      break;
    }
    const bool ya = p.in_y(c.left), yb = p.in_y(c.mid), yc = p.in_y(c.right);
    if (ya && yb && !yc) {
      r.closure = false;
      r.witnesses.push_back(conflation_witness(c, {{"left", "into", 1, members(p.x), true},
                                                   {"mid", "into", 1, members(p.x), true},
                                                   {"right", "into", 1, members(p.x), false}}));
      if (r.message.empty()) r.message = "y is not closed under cokernels of inflations";
      break;
    }
  }
  r.verdict = verdict_of(r.ext_vanishing && r.closure);
  if (r.verdict == Verdict::pass) r.message = "Ext^1..3(x, y) = 0 and both closure properties hold";
  return r;
}

CotorsionPair certify(CotorsionPair p, std::size_t budget) {
  const bool pair = check_pair(p).verdict == Verdict::pass;
  p.flags.is_pair = pair;
  if (!pair) return p;
  p.flags.complete = check_complete(p, budget).verdict;
  p.flags.hereditary = check_hereditary(p).verdict == Verdict::pass;
  return p;
}

// ---------------------------------------------------------------------------
// Relative dimensions
// ---------------------------------------------------------------------------

Dim rel_dim(const CotorsionPair& p, const Module& m, Side side, std::size_t cap) {
  require_certified(p);
  const auto& u = *p.universe();
  for (std::size_t n = 0; n <= cap; ++n) {
    bool vanish = true;
    if (side == Side::left) {
      for (std::size_t j : p.y.indices()) vanish = vanish && ext_between(u, m, u.indec(j), n + 1) == 0;
    } else {
      for (std::size_t i : p.x.indices()) vanish = vanish && ext_between(u, u.indec(i), m, n + 1) == 0;
    }
    if (vanish) return Dim::finite(n);
  }
  std::vector<Module> terms{m};
  for (std::size_t i = 0; i <= cap; ++i) {
    auto w = side == Side::left ? special_precover(p, terms.back()) : special_preenvelope(p, terms.back());
    if (!w) break;
    Module next = side == Side::left ? w->conflation.left : w->conflation.right;
    if (side == Side::left ? p.in_x(next) : p.in_y(next)) break;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      bool iso = false;
      try {
        iso = homalg::same_iso_class(terms[j], next);
      } catch (const UndecidedDecomposition&) {
        iso = false;
      }
      if (iso) return Dim::infinite(j, terms.size());
    }
    terms.push_back(std::move(next));
  }
  return Dim::at_least(cap + 1);
}

ObjectClass lift_class(const CotorsionPair& p, std::size_t n, Side side) {
  const auto& u = p.universe();
  const std::size_t cap = std::max(homalg::kSyzygyCap, n);
  std::vector<bool> mem(u->size(), false);
  for (std::size_t i = 0; i < u->size(); ++i) {
    const Dim d = rel_dim(p, u->indec(i), side, cap);
    mem[i] = d.is_finite() && d.value <= n;
  }
  return {u, std::move(mem)};
}

CotorsionPair lifted_pair(const CotorsionPair& p, std::size_t n, Side side) {
  if (side == Side::left) {
    ObjectClass xn = lift_class(p, n, side);
    return make_pair(xn, universe::orthogonal(xn, Perp::right));
  }
  ObjectClass yn = lift_class(p, n, side);
  return make_pair(universe::orthogonal(yn, Perp::left), yn);
}

bool CoherenceRow::agree() const {
  return (!witness_sequence || *witness_sequence == dim_at_most) &&
         (!syzygy_in_class || *syzygy_in_class == dim_at_most) && ext_vanishing == dim_at_most;
}

Json CoherenceResult::to_json() const {
  Json rs = Json::array();
  auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };
  for (const CoherenceRow& row : rows) {
    rs.push_back(Json{{"k", row.k},
                      {"dim_at_most", row.dim_at_most},
                      {"witness_sequence", opt(row.witness_sequence)},
                      {"syzygy_in_class", opt(row.syzygy_in_class)},
                      {"ext_vanishing", row.ext_vanishing}});
  }
  Json j{{"verdict", to_string(verdict)}, {"dim", dim.to_string()}, {"rows", std::move(rs)}};
  j["witnesses"] = sequence ? witnesses_json({*sequence}) : Json::array();
  return j;
}

CoherenceResult check_dimension_coherence(const CotorsionPair& p, const Module& m, Side side, std::size_t max_n) {
  require_certified(p);
  const auto& u = *p.universe();
  Resolver& res = u.resolver();
  CoherenceResult r;
  r.dim = rel_dim(p, m, side);
  const bool left = side == Side::left;
  auto in_class = [&](const Module& k) { return left ? p.in_x(k) : p.in_y(k); };

  // Special resolution (left) or coresolution (right) by class members.
  std::vector<Conflation> steps;
  std::vector<Module> ends{m};
  for (std::size_t k = 0; k < max_n; ++k) {
    auto w = left ? special_precover(p, ends.back()) : special_preenvelope(p, ends.back());
    if (!w) break;
    ends.push_back(left ? w->conflation.left : w->conflation.right);
    steps.push_back(std::move(w->conflation));
  }

  for (std::size_t k = 0; k <= max_n; ++k) {
    CoherenceRow row;
    row.k = k;
    row.dim_at_most = r.dim.is_finite() && r.dim.value <= k;
    if (k < ends.size()) row.witness_sequence = in_class(ends[k]);
    const Module syz = left ? res.syzygy(m, k) : res.cosyzygy(m, k);
    const ObjectClass& cls = left ? p.x : p.y;
    const Tri t = cls.contains_module(syz);
    row.syzygy_in_class = t == Tri::unknown ? in_class(syz) : t == Tri::yes;
    bool vanish = true;
    for (std::size_t i = 1; i <= 3 && vanish; ++i) {
      if (left) {
        for (std::size_t j : p.y.indices()) vanish = vanish && ext_between(u, m, u.indec(j), k + i) == 0;
      } else {
        for (std::size_t x : p.x.indices()) vanish = vanish && ext_between(u, u.indec(x), m, k + i) == 0;
      }
    }
    row.ext_vanishing = vanish;
    if (!row.agree()) r.verdict = Verdict::fail;
    if (!r.sequence && row.witness_sequence.value_or(false)) {
      // Terms X_k >-> X_{k-1} -> ... -> X_0 ->> m (left), or the dual.
      Json terms = Json::array(), maps = Json::array(), claims = Json::array();
      std::vector<Module> against = members(left ? p.y : p.x);
      auto add_claim = [&](std::size_t idx) {
        ExtClaim cl{"t" + std::to_string(idx), left ? "from" : "into", 1, against, true};
        claims.push_back(claim_json(cl));
      };
      if (left) {
        std::vector<Module> ts;
        std::vector<ModuleMap> ms;
        if (k == 0) {
          ts = {m, m};
          ms = {bqa::identity_map(m)};
        } else {
          ts.push_back(ends[k]);
          for (std::size_t i = k; i-- > 0;) ts.push_back(steps[i].mid);
          ts.push_back(m);
          ms.push_back(steps[k - 1].incl);
          for (std::size_t i = k - 1; i >= 1; --i) ms.push_back(bqa::compose(steps[i - 1].incl, steps[i].proj));
          ms.push_back(steps[0].proj);
        }
        for (std::size_t i = 0; i < ts.size(); ++i) terms.push_back(bqa::module_to_json(ts[i]));
        for (std::size_t i = 0; i < ms.size(); ++i) maps.push_back(bqa::map_to_json(ts[i], ms[i]));
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) add_claim(i);
      } else {
        std::vector<Module> ts;
        std::vector<ModuleMap> ms;
        if (k == 0) {
          ts = {m, m};
          ms = {bqa::identity_map(m)};
        } else {
          ts.push_back(m);
          for (std::size_t i = 0; i < k; ++i) ts.push_back(steps[i].mid);
          ts.push_back(ends[k]);
          ms.push_back(steps[0].incl);
          for (std::size_t i = 1; i < k; ++i) ms.push_back(bqa::compose(steps[i].incl, steps[i - 1].proj));
          ms.push_back(steps[k - 1].proj);
        }
        for (std::size_t i = 0; i < ts.size(); ++i) terms.push_back(bqa::module_to_json(ts[i]));
        for (std::size_t i = 0; i < ms.size(); ++i) maps.push_back(bqa::map_to_json(ts[i], ms[i]));
        for (std::size_t i = 1; i < ts.size(); ++i) add_claim(i);
      }
      r.sequence = Witness{"sequence", Json{{"terms", std::move(terms)}, {"maps", std::move(maps)}, {"claims", std::move(claims)}}};
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Json InequalityResult::to_json() const {
  return Json{{"verdict", to_string(verdict)},
              {"dims", {a.to_string(), b.to_string(), c.to_string()}},
              {"violations", violations}};
}

InequalityResult check_dimension_inequalities(const Conflation& c, const CotorsionPair& p, Side side) {
  InequalityResult r;
  r.a = rel_dim(p, c.left, side);
  r.b = rel_dim(p, c.mid, side);
  r.c = rel_dim(p, c.right, side);
  auto va = value_of(r.a), vb = value_of(r.b), vc = value_of(r.c);
  if (!va || !vb || !vc) {
    r.verdict = Verdict::inconclusive;
    return r;
  }
  // Left side talks about (A, B, C); the right side is the same statement
  // for (C, B, A).
  const std::size_t a = side == Side::left ? *va : *vc;
  const std::size_t b = *vb;
  const std::size_t cc = side == Side::left ? *vc : *va;
  auto check = [&](const std::string& name, std::size_t lhs, std::size_t rhs, bool want_eq) {
    if (lhs > rhs) r.violations.push_back(name + ": " + show(lhs) + " > " + show(rhs));
    if (want_eq && lhs != rhs) r.violations.push_back(name + " equality: " + show(lhs) + " != " + show(rhs));
  };
  check("(1)", a, std::max(b, minus_one_floor(cc)), b != cc);
  check("(2)", b, std::max(a, cc), cc != plus_one(a));
  check("(3)", cc, std::max(b, plus_one(a)), b != a);
  r.verdict = verdict_of(r.violations.empty());
  return r;
}

// ---------------------------------------------------------------------------
// Extendability
// ---------------------------------------------------------------------------

Verdict ExtendabilityRow::verdict() const { return combine(pair, combine(complete, hereditary)); }

Json ExtendabilityResult::to_json() const {
  Json rs = Json::array();
  for (const ExtendabilityRow& row : rows) {
    rs.push_back(Json{{"n", row.n},
                      {"x", row.x.to_string()},
                      {"y", row.y.to_string()},
                      {"pair", to_string(row.pair)},
                      {"complete", to_string(row.complete)},
                      {"hereditary", to_string(row.hereditary)},
                      {"verdict", to_string(row.verdict())}});
  }
  return Json{{"verdict", to_string(verdict)}, {"rows", std::move(rs)}, {"witnesses", witnesses_json(witnesses)}};
}

ExtendabilityResult check_extendable(const CotorsionPair& p, std::size_t n_max, Side side, std::size_t budget) {
  require_certified(p);
  ExtendabilityResult r;
  for (std::size_t n = 0; n <= n_max; ++n) {
    CotorsionPair q = lifted_pair(p, n, side);
    ExtendabilityRow row;
    row.n = n;
    row.x = q.x;
    row.y = q.y;
    CheckResult pc = check_pair(q);
    row.pair = pc.verdict;
    for (Witness& w : pc.witnesses) r.witnesses.push_back(std::move(w));
    if (row.pair == Verdict::pass) {
      q.flags.is_pair = true;
      row.complete = check_complete(q, budget).verdict;
      HereditaryResult h = check_hereditary(q);
      row.hereditary = h.verdict;
      for (Witness& w : h.witnesses) r.witnesses.push_back(std::move(w));
    } else {
      row.complete = Verdict::inconclusive;
      row.hereditary = Verdict::inconclusive;
    }
    r.verdict = combine(r.verdict, row.verdict());
    r.rows.push_back(std::move(row));
  }
  return r;
}

CotorsionPair with_extendability(CotorsionPair p, const ExtendabilityResult& r, Side side) {
  if (r.verdict != Verdict::pass || r.rows.empty()) return p;
  (side == Side::left ? p.flags.left_extendable_upto : p.flags.right_extendable_upto) = r.rows.back().n;
  return p;
}

}  // namespace cotlab::cotorsion
