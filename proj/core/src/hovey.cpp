#include "cotlab/hovey.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "cotlab/error.hpp"

namespace cotlab::hovey {

using bqa::Module;
using bqa::ModuleMap;
using cotorsion::combine;
using cotorsion::conflation_witness;
using cotorsion::ExtClaim;
using cotorsion::special_precover;
using cotorsion::special_preenvelope;
using cotorsion::verdict_of;
using homalg::Dim;
using universe::Perp;

namespace {

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

std::string tri_string(Tri t) {
  switch (t) {
    case Tri::yes:
      return "yes";
    case Tri::no:
      return "no";
    case Tri::unknown:
      return "unknown";
  }
  return "?";
}

Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }

std::string side_string(Side s) { return s == Side::left ? "left" : "right"; }

std::size_t ext_of(const universe::Universe& u, const Module& m, const Module& n, std::size_t deg) {
  std::optional<std::size_t> i, j;
  for (std::size_t k = 0; k < u.size() && !(i && j); ++k) {
    if (!i && u.indec(k) == m) i = k;
    if (!j && u.indec(k) == n) j = k;
  }
  if (i && j) return u.ext(*i, *j, deg);
  return u.resolver().ext_dim(m, n, deg);
}

bool dim_at_most(const CotorsionPair& p, const Module& m, std::size_t n, Side side) {
  const Dim d = cotorsion::rel_dim(p, m, side, std::max(homalg::kSyzygyCap, n));
  return d.is_finite() && d.value <= n;
}

std::size_t span_rank(const std::vector<ModuleMap>& maps, const bqa::PrimeField& f) {
  if (maps.empty()) return 0;
  bqa::Mat acc = bqa::flatten(maps.front(), f);
  for (std::size_t i = 1; i < maps.size(); ++i) acc = linfield::hstack(acc, bqa::flatten(maps[i], f));
  return linfield::rank(acc);
}

// Hom(G, Y) -> Hom(K, Y), f |-> f . incl, is onto for every Y.
bool restriction_onto(const Conflation& c, const std::vector<Module>& ys) {
  for (const Module& y : ys) {
    std::vector<ModuleMap> imgs;
    for (const ModuleMap& f : bqa::hom_space(c.mid, y)) imgs.push_back(bqa::compose(f, c.incl));
    if (span_rank(imgs, y.field()) != bqa::hom_dim(c.left, y)) return false;
  }
  return true;
}

// Hom(X, G) -> Hom(X, C), f |-> proj . f, is onto for every X.
bool extension_onto(const Conflation& c, const std::vector<Module>& xs) {
  for (const Module& x : xs) {
    std::vector<ModuleMap> imgs;
    for (const ModuleMap& f : bqa::hom_space(x, c.mid)) imgs.push_back(bqa::compose(c.proj, f));
    if (span_rank(imgs, x.field()) != bqa::hom_dim(x, c.right)) return false;
  }
  return true;
}

Json conflation_data(const Conflation& c) {
  return Json{{"left", bqa::module_to_json(c.left)},
              {"mid", bqa::module_to_json(c.mid)},
              {"right", bqa::module_to_json(c.right)},
              {"incl", bqa::map_to_json(c.left, c.incl)},
              {"proj", bqa::map_to_json(c.mid, c.proj)}};
}

Witness difference_witness(const Module& m, const ObjectClass& lhs, const ObjectClass& rhs, bool in_lhs) {
  return {"class_difference",
          Json{{"module", bqa::module_to_json(m)},
               {"lhs", modules_json(members(lhs))},
               {"rhs", modules_json(members(rhs))},
               {"in_lhs", in_lhs},
               {"in_rhs", !in_lhs}}};
}

void require_hereditary_triple(const HoveyTriple& t) {
  if (!t.verified() || !t.hereditary()) {
    throw PreconditionError("the triple is not verified as a hereditary Hovey triple");
  }
}

void require_extendable(const HoveyTriple& t, std::size_t n, Side side) {
  if (n == 0) return;
  const auto& upto = side == Side::left ? t.cw_f.flags.left_extendable_upto : t.c_wf.flags.right_extendable_upto;
  if (!upto || *upto < n) {
    throw PreconditionError(side == Side::left
                                ? "(C n W, F) is not certified left extendable up to n = " + std::to_string(n)
                                : "(C, W n F) is not certified right extendable up to n = " + std::to_string(n));
  }
}

// M >-> L ->> N with N in C built by the pushout recipe; L is meant to lie
// in (C n W)_n and is checked by the caller.
std::optional<Conflation> left_envelope(const HoveyTriple& t, const Module& m, std::size_t n) {
  if (n == 0) {
    auto w = special_preenvelope(t.c_wf, m);
    if (!w) return std::nullopt;
    return std::move(w->conflation);
  }
  auto pre = special_precover(t.c_wf, m);
  if (!pre) return std::nullopt;
  const Conflation& kc = pre->conflation;
  auto rec = left_envelope(t, kc.left, n - 1);
  if (!rec) return std::nullopt;
  homalg::PushoutConflation po = homalg::pushout_conflation(kc, rec->mid, rec->incl);
  auto top = left_envelope(t, po.conflation.mid, 0);
  if (!top) return std::nullopt;
  return homalg::pushout_conflation(*top, m, po.conflation.proj).conflation;
}

// N >-> L ->> M with N in F, the dual recipe through pullbacks.
std::optional<Conflation> right_cover(const HoveyTriple& t, const Module& m, std::size_t n) {
  if (n == 0) {
    auto w = special_precover(t.cw_f, m);
    if (!w) return std::nullopt;
    return std::move(w->conflation);
  }
  auto pre = special_preenvelope(t.cw_f, m);
  if (!pre) return std::nullopt;
  const Conflation& fc = pre->conflation;
  auto rec = right_cover(t, fc.right, n - 1);
  if (!rec) return std::nullopt;
  homalg::PullbackConflation pb = homalg::pullback_conflation(fc, rec->mid, rec->proj);
  auto bot = right_cover(t, pb.conflation.mid, 0);
  if (!bot) return std::nullopt;
  return homalg::pullback_conflation(*bot, m, pb.conflation.incl).conflation;
}

Witness onto_witness(const Conflation& c, const std::vector<ExtClaim>& claims, const std::string& kind,
                     const std::vector<Module>& against) {
  Witness w = conflation_witness(c, claims);
  w.data["hom_onto"] = Json{{"map", kind}, {"against", modules_json(against)}};
  return w;
}

ConditionsResult sstype_left(const HoveyTriple& t, const Module& m, std::size_t n) {
  const auto& up = t.c.universe();
  const auto& u = *up;
  ConditionsResult r;
  r.n = n;
  r.side = Side::left;
  const ObjectClass z = cotorsion::lift_class(t.cw_f, n, Side::left);
  const ObjectClass z_orth = universe::orthogonal(z, Perp::right);
  const auto wf = members(t.c_wf.y);
  const auto f = members(t.f);
  const auto ys = members(z_orth);

  const Dim d = cotorsion::rel_dim(t.c_wf, m, Side::left, std::max(homalg::kSyzygyCap, n));
  r.cond[0] = tri_of(d.is_finite() && d.value <= n);
  r.note = "C-dimension " + d.to_string();

  const Module zero = Module::zero(m.algebra_ptr());
  if (n == 0) {
    r.cond[1] = tri_of(t.c_wf.in_x(m));
    if (r.cond[1] == Tri::yes) {
      Conflation id{zero, m, m, bqa::zero_map(zero, m), bqa::identity_map(m)};
      r.witnesses.push_back(conflation_witness(id, {{"mid", "from", 1, wf, true}}));
    }
  } else {
    auto accept = [&](const Conflation& c) {
      return t.c_wf.in_x(c.mid) && dim_at_most(t.cw_f, c.left, n - 1, Side::left) && restriction_onto(c, ys);
    };
    std::optional<Conflation> found;
    if (auto pre = special_precover(t.c_wf, m); pre && accept(pre->conflation)) found = pre->conflation;
    if (!found) found = cotorsion::search_deflation(up, t.c.indices(), m, 0, accept);
    if (found) {
      r.cond[1] = Tri::yes;
      r.witnesses.push_back(onto_witness(*found, {{"mid", "from", 1, wf, true}, {"left", "from", n, f, true}},
                                         "restriction", ys));
    }
  }

  r.cond[2] = Tri::yes;
  for (std::size_t h : (t.w & z_orth).indices()) {
    const std::size_t e = ext_of(u, m, u.indec(h), 1);
    if (e == 0) continue;
    r.cond[2] = Tri::no;
    r.witnesses.push_back(cotorsion::ext_witness(m, u.indec(h), 1, e));
    break;
  }

  auto good4 = [&](const Conflation& c) {
    return t.c_wf.in_x(c.right) && dim_at_most(t.cw_f, c.mid, n, Side::left);
  };
  std::optional<Conflation> l4 = left_envelope(t, m, n);
  if (l4 && !good4(*l4)) l4.reset();
  if (!l4) l4 = cotorsion::search_inflation(up, z.indices(), m, 0, good4);
  if (l4) {
    r.cond[3] = Tri::yes;
    r.witnesses.push_back(conflation_witness(*l4, {{"mid", "from", n + 1, f, true}, {"right", "from", 1, wf, true}}));
  }
  return r;
}

ConditionsResult sstype_right(const HoveyTriple& t, const Module& m, std::size_t n) {
  const auto& up = t.c.universe();
  const auto& u = *up;
  ConditionsResult r;
  r.n = n;
  r.side = Side::right;
  const ObjectClass z = cotorsion::lift_class(t.c_wf, n, Side::right);
  const ObjectClass z_orth = universe::orthogonal(z, Perp::left);
  const auto cw = members(t.cw_f.x);
  const auto c = members(t.c);
  const auto xs = members(z_orth);

  const Dim d = cotorsion::rel_dim(t.cw_f, m, Side::right, std::max(homalg::kSyzygyCap, n));
  r.cond[0] = tri_of(d.is_finite() && d.value <= n);
  r.note = "F-dimension " + d.to_string();

  const Module zero = Module::zero(m.algebra_ptr());
  if (n == 0) {
    r.cond[1] = tri_of(t.cw_f.in_y(m));
    if (r.cond[1] == Tri::yes) {
      Conflation id{m, m, zero, bqa::identity_map(m), bqa::zero_map(m, zero)};
      r.witnesses.push_back(conflation_witness(id, {{"mid", "into", 1, cw, true}}));
    }
  } else {
    auto accept = [&](const Conflation& k) {
      return t.cw_f.in_y(k.mid) && dim_at_most(t.c_wf, k.right, n - 1, Side::right) && extension_onto(k, xs);
    };
    std::optional<Conflation> found;
    if (auto pre = special_preenvelope(t.cw_f, m); pre && accept(pre->conflation)) found = pre->conflation;
    if (!found) found = cotorsion::search_inflation(up, t.f.indices(), m, 0, accept);
    if (found) {
      r.cond[1] = Tri::yes;
      r.witnesses.push_back(onto_witness(*found, {{"mid", "into", 1, cw, true}, {"right", "into", n, c, true}},
                                         "extension", xs));
    }
  }

  r.cond[2] = Tri::yes;
  for (std::size_t h : (t.w & z_orth).indices()) {
    const std::size_t e = ext_of(u, u.indec(h), m, 1);
    if (e == 0) continue;
    r.cond[2] = Tri::no;
    r.witnesses.push_back(cotorsion::ext_witness(u.indec(h), m, 1, e));
    break;
  }

  auto good4 = [&](const Conflation& k) {
    return t.cw_f.in_y(k.left) && dim_at_most(t.c_wf, k.mid, n, Side::right);
  };
  std::optional<Conflation> l4 = right_cover(t, m, n);
  if (l4 && !good4(*l4)) l4.reset();
  if (!l4) l4 = cotorsion::search_deflation(up, z.indices(), m, 0, good4);
  if (l4) {
    r.cond[3] = Tri::yes;
    r.witnesses.push_back(conflation_witness(*l4, {{"mid", "into", n + 1, c, true}, {"left", "into", 1, cw, true}}));
  }
  return r;
}

// Claims that a term lies in C n W n F (or in C n F when projinj is unset).
std::vector<ExtClaim> core_claims(const std::string& term, const FrobeniusCore& core, bool projinj) {
  std::vector<ExtClaim> out{{term, "from", 1, members(core.c_wf.y), true},
                            {term, "into", 1, members(core.cw_f.x), true}};
  if (projinj) out.push_back({term, "from", 1, members(core.cw_f.y), true});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

Json ThicknessResult::to_json() const {
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"checked", checked},
              {"skipped", skipped},
              {"message", message},
              {"witnesses", cotorsion::to_json(witnesses)}};
}

ThicknessResult check_thickness(const ObjectClass& w, const std::vector<Conflation>& confs) {
  ThicknessResult r;
  static const char* const names[3] = {"left", "mid", "right"};
  for (const Conflation& c : confs) {
    const Tri t[3] = {w.contains_module(c.left), w.contains_module(c.mid), w.contains_module(c.right)};
    if (std::find(std::begin(t), std::end(t), Tri::unknown) != std::end(t)) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    if (std::count(std::begin(t), std::end(t), Tri::yes) != 2) continue;
    const std::size_t out = static_cast<std::size_t>(std::find(std::begin(t), std::end(t), Tri::no) - std::begin(t));
    Json data = conflation_data(c);
    data["class"] = modules_json(members(w));
    data["outside"] = names[out];
    r.witnesses.push_back({"thickness", std::move(data)});
    r.verdict = Verdict::fail;
    r.message = std::string("two terms lie in w but the ") + names[out] + " term does not";
    return r;
  }
  r.message = "two-out-of-three holds on " + std::to_string(r.checked) + " conflations (" +
              std::to_string(r.skipped) + " with undecided terms skipped)";
  return r;
}

Verdict PairReport::verdict() const {
  Verdict v = pair.verdict;
  if (complete) v = combine(v, complete->verdict);
  return v;
}

Json TripleReport::to_json(const CotorsionPair& cw_f_pair, const CotorsionPair& c_wf_pair) const {
  auto one = [](const PairReport& r, const CotorsionPair& p) {
    Json j{{"verdict", cotorsion::to_string(r.verdict())}, {"pair", r.pair.to_json()}};
    j["complete"] = r.complete ? r.complete->to_json(p) : Json(nullptr);
    j["hereditary"] = r.hereditary ? r.hereditary->to_json() : Json(nullptr);
    return j;
  };
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"cw_f", one(cw_f, cw_f_pair)},
              {"c_wf", one(c_wf, c_wf_pair)},
              {"thickness", thickness.to_json()}};
}

std::string HoveyTriple::to_string() const {
  return "(C, W, F) = (" + c.to_string() + ", " + w.to_string() + ", " + f.to_string() + ")";
}

Json HoveyTriple::classes_json() const { return Json{{"c", c.to_json()}, {"w", w.to_json()}, {"f", f.to_json()}}; }

HoveyTriple verify_triple(const ObjectClass& c, const ObjectClass& w, const ObjectClass& f, const VerifyOptions& opts) {
  if (c.universe() != w.universe() || c.universe() != f.universe()) {
    throw IncompatibleInput("triple classes live over different universes");
  }
  const auto& u = *c.universe();
  HoveyTriple t{c, w, f, cotorsion::make_pair(c & w, f), cotorsion::make_pair(c, w & f), std::nullopt};
  TripleReport rep;
  std::vector<Conflation> confs =
      homalg::generate_conflations(u.resolver(), u.indecs(), opts.conflation_count, opts.seed);
  auto run = [&](CotorsionPair& p, PairReport& pr) {
    pr.pair = cotorsion::check_pair(p);
    p.flags.is_pair = pr.pair.verdict == Verdict::pass;
    if (!*p.flags.is_pair) return;
    pr.complete = cotorsion::check_complete(p, opts.budget);
    p.flags.complete = pr.complete->verdict;
    pr.hereditary = cotorsion::check_hereditary(p);
    p.flags.hereditary = pr.hereditary->verdict == Verdict::pass;
    for (const auto& aw : pr.complete->witnesses) confs.push_back(aw.conflation);
  };
  run(t.cw_f, rep.cw_f);
  run(t.c_wf, rep.c_wf);
  rep.thickness = check_thickness(w, confs);
  rep.verdict = combine(rep.cw_f.verdict(), combine(rep.c_wf.verdict(), rep.thickness.verdict));
  t.report = std::move(rep);
  return t;
}

HoveyTriple certify_extendable(HoveyTriple t, std::size_t n_max, Side side, std::size_t budget) {
  CotorsionPair& p = side == Side::left ? t.cw_f : t.c_wf;
  p = cotorsion::with_extendability(p, cotorsion::check_extendable(p, n_max, side, budget), side);
  return t;
}

// ---------------------------------------------------------------------------
// The four conditions and the class identities
// ---------------------------------------------------------------------------

bool ConditionsResult::agree() const {
  std::optional<Tri> seen;
  for (Tri t : cond) {
    if (t == Tri::unknown) continue;
    if (seen && *seen != t) return false;
    seen = t;
  }
  return true;
}

Json ConditionsResult::to_json() const {
  Json cs = Json::array();
  for (Tri t : cond) cs.push_back(tri_string(t));
  return Json{{"n", n},
              {"side", side_string(side)},
              {"conditions", std::move(cs)},
              {"agree", agree()},
              {"note", note},
              {"witnesses", cotorsion::to_json(witnesses)}};
}

ConditionsResult check_sstype(const HoveyTriple& t, const Module& m, std::size_t n, Side side) {
  require_hereditary_triple(t);
  require_extendable(t, n, side);
  return side == Side::left ? sstype_left(t, m, n) : sstype_right(t, m, n);
}

Json IdentityResult::to_json() const {
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"lhs", lhs.to_json()},
              {"rhs", rhs.to_json()},
              {"message", message},
              {"witnesses", cotorsion::to_json(witnesses)}};
}

IdentityResult compare_classes(ObjectClass lhs, ObjectClass rhs, const std::string& what) {
  IdentityResult r;
  const auto& u = *lhs.universe();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (lhs.contains(i) == rhs.contains(i)) continue;
    r.verdict = Verdict::fail;
    r.witnesses.push_back(difference_witness(u.indec(i), lhs, rhs, lhs.contains(i)));
    if (r.message.empty()) {
      r.message = what + " differs at " + u.label(i) + ": " + lhs.to_string() + " vs " + rhs.to_string();
    }
  }
  if (r.verdict == Verdict::pass) r.message = what + " holds: " + lhs.to_string();
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

IdentityResult check_cor_identity(const HoveyTriple& t, std::size_t n, Side side) {
  require_hereditary_triple(t);
  if (side == Side::left) {
    return compare_classes(cotorsion::lift_class(t.c_wf, n, Side::left) & t.w,
                           cotorsion::lift_class(t.cw_f, n, Side::left), "C_n n W = (C n W)_n");
  }
  return compare_classes(t.w & cotorsion::lift_class(t.cw_f, n, Side::right),
                         cotorsion::lift_class(t.c_wf, n, Side::right), "W n F_n = (W n F)_n");
}

Json LiftResult::to_json() const {
  Json j{{"verdict", cotorsion::to_string(verdict)},
         {"triple", lifted.classes_json()},
         {"orthogonal_identity", orthogonal_identity.to_json()},
         {"kernel_identity", kernel_identity.to_json()}};
  if (lifted.report) j["verification"] = lifted.report->to_json(lifted.cw_f, lifted.c_wf);
  return j;
}

LiftResult lift_triple(const HoveyTriple& t, std::size_t n, Side side, const VerifyOptions& opts) {
  require_hereditary_triple(t);
  require_extendable(t, n, side);
  LiftResult r;
  if (side == Side::left) {
    const ObjectClass cn = cotorsion::lift_class(t.c_wf, n, Side::left);
    const ObjectClass z = cotorsion::lift_class(t.cw_f, n, Side::left);
    const ObjectClass z_orth = universe::orthogonal(z, Perp::right);
    const ObjectClass cn_orth = universe::orthogonal(cn, Perp::right);
    r.lifted = verify_triple(cn, t.w, z_orth, opts);
    r.orthogonal_identity = compare_classes(cn_orth, t.w & z_orth, "C_n^perp = W n (C n W)_n^perp");
    r.kernel_identity = compare_classes(cn & cn_orth, z & z_orth, "kernel of (C_n, C_n^perp) = (C n W)_n n (C n W)_n^perp");
  } else {
    const ObjectClass fn = cotorsion::lift_class(t.cw_f, n, Side::right);
    const ObjectClass z = cotorsion::lift_class(t.c_wf, n, Side::right);
    const ObjectClass z_orth = universe::orthogonal(z, Perp::left);
    const ObjectClass fn_orth = universe::orthogonal(fn, Perp::left);
    r.lifted = verify_triple(z_orth, t.w, fn, opts);
    r.orthogonal_identity = compare_classes(fn_orth, z_orth & t.w, "^perp F_n = ^perp (W n F)_n n W");
    r.kernel_identity = compare_classes(fn_orth & fn, z_orth & z, "kernel of (^perp F_n, F_n) = ^perp (W n F)_n n (W n F)_n");
  }
  const ObjectClass k1 = r.lifted.cw_f.x & r.lifted.cw_f.y;
  const ObjectClass k2 = r.lifted.c_wf.x & r.lifted.c_wf.y;
  if (!(k1 == k2)) {
    IdentityResult d = compare_classes(k1, k2, "kernels of the two lifted pairs");
    r.kernel_identity.verdict = Verdict::fail;
    r.kernel_identity.message += "; " + d.message;
    for (Witness& w : d.witnesses) r.kernel_identity.witnesses.push_back(std::move(w));
  }
  r.verdict = combine(r.lifted.report->verdict, verdict_of(r.lifted.hereditary()));
  r.verdict = combine(r.verdict, combine(r.orthogonal_identity.verdict, r.kernel_identity.verdict));
  return r;
}

// ---------------------------------------------------------------------------
// Frobenius cores and stable categories
// ---------------------------------------------------------------------------

Json FrobeniusCore::to_json() const {
  const auto& u = *objects.universe();
  Json stable = Json::array();
  for (std::size_t i : stable_classes) stable.push_back(u.id(i));
  Json ws = Json::array();
  for (const CoreWitness& w : witnesses) {
    Json j{{"object", u.id(w.object)}};
    j["inflation"] = w.inflation ? cotorsion::to_json(conflation_witness(
                                       *w.inflation, [&] {
                                         auto cl = core_claims("mid", *this, true);
                                         for (ExtClaim& c : core_claims("right", *this, false)) cl.push_back(c);
                                         return cl;
                                       }()))
                                 : Json(nullptr);
    j["deflation"] = w.deflation ? cotorsion::to_json(conflation_witness(
                                       *w.deflation, [&] {
                                         auto cl = core_claims("mid", *this, true);
                                         for (ExtClaim& c : core_claims("left", *this, false)) cl.push_back(c);
                                         return cl;
                                       }()))
                                 : Json(nullptr);
    ws.push_back(std::move(j));
  }
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"objects", objects.to_json()},
              {"projinj", projinj.to_json()},
              {"stable_classes", std::move(stable)},
              {"witnesses", std::move(ws)}};
}

FrobeniusCore frobenius_core(const HoveyTriple& t) {
  require_hereditary_triple(t);
  FrobeniusCore core;
  core.objects = t.c & t.f;
  core.projinj = t.c & t.w & t.f;
  core.cw_f = t.cw_f;
  core.c_wf = t.c_wf;
  const auto& u = *t.c.universe();
  auto in_core = [&](const Module& m) { return t.c_wf.in_x(m) && t.cw_f.in_y(m); };
  auto in_projinj = [&](const Module& m) { return in_core(m) && t.cw_f.in_x(m); };
  for (std::size_t i : core.objects.indices()) {
    if (!core.projinj.contains(i)) core.stable_classes.push_back(i);
    CoreWitness w;
    w.object = i;
    if (auto e = special_preenvelope(t.c_wf, u.indec(i))) {
      const Conflation& c = e->conflation;
      if (!in_projinj(c.mid) || !in_core(c.right)) core.verdict = Verdict::fail;
      w.inflation = c;
    } else {
      core.verdict = combine(core.verdict, Verdict::inconclusive);
    }
    if (auto p = special_precover(t.cw_f, u.indec(i))) {
      const Conflation& c = p->conflation;
      if (!in_projinj(c.mid) || !in_core(c.left)) core.verdict = Verdict::fail;
      w.deflation = c;
    } else {
      core.verdict = combine(core.verdict, Verdict::inconclusive);
    }
    core.witnesses.push_back(std::move(w));
  }
  return core;
}

std::size_t stable_hom_dim(const FrobeniusCore& core, const Module& x, const Module& y) {
  const std::size_t h = bqa::hom_dim(x, y);
  if (h == 0) return 0;
  std::vector<ModuleMap> through;
  for (const Module& p : members(core.projinj)) {
    const auto fs = bqa::hom_space(x, p);
    if (fs.empty()) continue;
    const auto gs = bqa::hom_space(p, y);
    for (const ModuleMap& g : gs) {
      for (const ModuleMap& f : fs) through.push_back(bqa::compose(g, f));
    }
  }
  return h - span_rank(through, x.field());
}

Json StableComparison::to_json(const universe::Universe& u) const {
  Json ms = Json::array();
  for (const auto& [b, a] : matching) {
    ms.push_back(Json{{"from", u.id(b)}, {"to", u.id(a)}, {"from_label", u.label(b)}, {"to_label", u.label(a)}});
  }
  Json os = Json::array();
  for (std::size_t o : orphans) os.push_back(u.id(o));
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"matching", std::move(ms)},
              {"orphans", std::move(os)},
              {"problems", problems}};
}

StableComparison stable_compare(const FrobeniusCore& a, const FrobeniusCore& b) {
  if (a.objects.universe() != b.objects.universe()) {
    throw IncompatibleInput("the cores live over different universes");
  }
  const auto& u = *a.objects.universe();
  StableComparison r;
  const std::set<std::size_t> a_stable(a.stable_classes.begin(), a.stable_classes.end());
  auto trouble = [&](Verdict v, std::size_t x, const std::string& what) {
    r.verdict = combine(r.verdict, v);
    r.orphans.push_back(x);
    r.problems.push_back(u.label(x) + ": " + what);
  };
  for (std::size_t x : b.stable_classes) {
    auto q = special_precover(a.c_wf, u.indec(x));
    if (!q) {
      trouble(Verdict::inconclusive, x, "no cofibrant replacement found");
      continue;
    }
    auto rq = special_preenvelope(a.cw_f, q->conflation.mid);
    if (!rq) {
      trouble(Verdict::inconclusive, x, "no fibrant replacement found");
      continue;
    }
    std::vector<std::size_t> stable;
    bool undecided = false;
    try {
      for (const homalg::Piece& piece : u.resolver().pieces(rq->conflation.mid)) {
        auto idx = u.locate(piece.module);
        if (!idx) {
          undecided = true;
          break;
        }
        if (!a.projinj.contains(*idx)) stable.push_back(*idx);
      }
    } catch (const UndecidedDecomposition&) {
      undecided = true;
    }
    if (undecided) {
      trouble(Verdict::inconclusive, x, "replacement has a summand outside the universe");
    } else if (stable.size() != 1) {
      trouble(Verdict::fail, x, "replacement has " + std::to_string(stable.size()) + " stable summands");
    } else if (!a_stable.count(stable.front())) {
      trouble(Verdict::fail, x, "replacement " + u.label(stable.front()) + " is not a stable class of the target core");
    } else {
      r.matching.emplace_back(x, stable.front());
    }
  }
  std::set<std::size_t> hit;
  for (const auto& [bx, ax] : r.matching) {
    if (!hit.insert(ax).second) {
      r.verdict = Verdict::fail;
      r.problems.push_back("two classes are sent to " + u.label(ax));
    }
  }
  if (r.orphans.empty()) {
    for (std::size_t ax : a.stable_classes) {
      if (hit.count(ax)) continue;
      r.verdict = Verdict::fail;
      r.problems.push_back(u.label(ax) + " is not hit");
    }
  }
  for (const auto& [b1, a1] : r.matching) {
    for (const auto& [b2, a2] : r.matching) {
      const std::size_t db = stable_hom_dim(b, u.indec(b1), u.indec(b2));
      const std::size_t da = stable_hom_dim(a, u.indec(a1), u.indec(a2));
      if (db == da) continue;
      r.verdict = Verdict::fail;
      r.problems.push_back("stable Hom(" + u.label(b1) + ", " + u.label(b2) + ") has dimension " +
                           std::to_string(db) + " but " + std::to_string(da) + " after replacement");
    }
  }
  return r;
}

Json HypothesisResult::to_json() const {
  return Json{{"verdict", cotorsion::to_string(verdict)},
              {"first_form", first_form},
              {"second_form", second_form},
              {"message", message}};
}

HypothesisResult check_gkr_hypotheses(const HoveyTriple& t1, const HoveyTriple& t2, const HoveyTriple& t3) {
  for (const HoveyTriple* t : {&t1, &t2, &t3}) {
    if (t->c.count() != t->c.size()) throw PreconditionError("the triples must have C equal to the whole universe");
  }
  if (t1.c.universe() != t2.c.universe() || t1.c.universe() != t3.c.universe()) {
    throw IncompatibleInput("the triples live over different universes");
  }
  HypothesisResult r;
  r.first_form = (t3.w & t1.f) == t2.f && t3.f.subset_of(t1.f);
  r.second_form = (t2.w & t3.w) == t1.w && t2.f.subset_of(t3.w);
  r.verdict = verdict_of(r.first_form == r.second_form);
  auto show = [](bool b) { return std::string(b ? "holds" : "fails"); };
  r.message = "W3 n F1 = F2 and F3 in F1 " + show(r.first_form) + "; W2 n W3 = W1 and F2 in W3 " +
              show(r.second_form);
  if (r.verdict == Verdict::fail) r.message += "; the two forms disagree";
  return r;
}

}  // namespace cotlab::hovey
