#include "cotlab/quiverlift.hpp"

#include <functional>
#include <set>

#include "cotlab/error.hpp"

namespace cotlab::quiverlift {

using bqa::PathTerm;
using universe::Perp;
using universe::Tri;

namespace {

void require_rooted(const ShapeQuiver& q, Side side) {
  const Rootedness r = check_rooted(q);
  if (side == Side::left ? !r.left : !r.right) {
    throw PreconditionError(side == Side::left ? "the shape quiver is not left rooted"
                                               : "the shape quiver is not right rooted");
  }
}

void require_same_setting(const RepSetting& s, const UniversePtr& ru) {
  if (!same_algebra(*ru->algebra(), *s.tensor_algebra())) {
    throw IncompatibleInput("the universe is not over the representation algebra of this shape");
  }
}

void require_extendable(const CotorsionPair& p, std::size_t n, Side side) {
  if (n == 0) return;
  const auto& upto = side == Side::left ? p.flags.left_extendable_upto : p.flags.right_extendable_upto;
  if (!upto || *upto < n) {
    throw PreconditionError("the value pair is not certified " + std::string(side == Side::left ? "left" : "right") +
                            " extendable up to n = " + std::to_string(n));
  }
}

Module zero_like(const Module& m) { return Module::zero(m.algebra_ptr()); }

}  // namespace

// ---------------------------------------------------------------------------
// Shapes and settings
// ---------------------------------------------------------------------------

ShapeQuiver ShapeQuiver::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw MalformedInput("shape quiver needs a \"vertices\" array");
  }
  ShapeQuiver q;
  std::set<std::string> seen;
  for (const Json& v : j["vertices"]) {
    if (!v.is_string()) throw MalformedInput("shape vertex ids must be strings");
    if (!seen.insert(v.get<std::string>()).second) throw MalformedInput("duplicate shape vertex " + v.dump());
    q.vertices.push_back(v.get<std::string>());
  }
  auto index = [&](const Json& v) {
    if (!v.is_string()) throw MalformedInput("arrow endpoints must be vertex ids");
    for (std::size_t i = 0; i < q.vertices.size(); ++i) {
      if (q.vertices[i] == v.get<std::string>()) return i;
    }
    throw MalformedInput("unknown shape vertex " + v.dump());
  };
  seen.clear();
  for (const Json& a : j.value("arrows", Json::array())) {
    if (!a.is_object() || !a.contains("id") || !a.contains("src") || !a.contains("tgt") || !a["id"].is_string()) {
      throw MalformedInput("shape arrows need \"id\", \"src\" and \"tgt\"");
    }
    if (!seen.insert(a["id"].get<std::string>()).second) throw MalformedInput("duplicate shape arrow " + a["id"].dump());
    q.arrows.push_back({a["id"].get<std::string>(), index(a["src"]), index(a["tgt"])});
  }
  return q;
}

Json ShapeQuiver::to_json() const {
  Json as = Json::array();
  for (const auto& a : arrows) as.push_back(Json{{"id", a.id}, {"src", vertices[a.src]}, {"tgt", vertices[a.tgt]}});
  return Json{{"vertices", vertices}, {"arrows", std::move(as)}};
}

Rootedness check_rooted(const ShapeQuiver& q) {
  const std::size_t n = q.vertices.size();
  std::vector<int> state(n, 0);
  std::function<bool(std::size_t)> cyclic = [&](std::size_t v) {
    state[v] = 1;
    for (const auto& a : q.arrows) {
      if (a.src != v) continue;
      if (state[a.tgt] == 1) return true;
      if (state[a.tgt] == 0 && cyclic(a.tgt)) return true;
    }
    state[v] = 2;
    return false;
  };
  bool cycle = false;
  for (std::size_t v = 0; v < n && !cycle; ++v) {
    if (state[v] == 0) cycle = cyclic(v);
  }
  return {!cycle, !cycle};
}

RepSetting::RepSetting(ShapeQuiver shape, AlgebraPtr value) : shape_(std::move(shape)), value_(std::move(value)) {
  if (!check_rooted(shape_).left) {
    throw PreconditionError("the shape quiver has an oriented cycle, so its representations are not modules over a "
                            "finite dimensional algebra");
  }
  const auto& vq = value_->quiver();
  const std::size_t nv = vq.vertices.size();
  bqa::BoundQuiver tq;
  for (const auto& i : shape_.vertices) {
    for (const auto& v : vq.vertices) tq.vertices.push_back(i + "." + v);
  }
  for (const auto& a : shape_.arrows) {
    for (std::size_t v = 0; v < nv; ++v) {
      tq.arrows.push_back({a.id + "." + vq.vertices[v], a.src * nv + v, a.tgt * nv + v});
    }
  }
  for (std::size_t i = 0; i < shape_.vertices.size(); ++i) {
    for (const auto& al : vq.arrows) {
      tq.arrows.push_back({shape_.vertices[i] + "." + al.id, i * nv + al.src, i * nv + al.tgt});
    }
  }
  for (std::size_t i = 0; i < shape_.vertices.size(); ++i) {
    for (const bqa::Relation& rel : vq.relations) {
      bqa::Relation r;
      for (const PathTerm& t : rel) {
        PathTerm u{t.coeff, {}};
        for (std::size_t al : t.arrows) u.arrows.push_back(value_arrow(i, al));
        r.push_back(std::move(u));
      }
      tq.relations.push_back(std::move(r));
    }
  }
  const auto minus_one = static_cast<bqa::Elem>(value_->field().p() - 1);
  for (std::size_t a = 0; a < shape_.arrows.size(); ++a) {
    const auto& sa = shape_.arrows[a];
    for (std::size_t al = 0; al < vq.arrows.size(); ++al) {
      const auto& va = vq.arrows[al];
      tq.relations.push_back({PathTerm{1, {shape_arrow(a, va.src), value_arrow(sa.tgt, al)}},
                              PathTerm{minus_one, {value_arrow(sa.src, al), shape_arrow(a, va.tgt)}}});
    }
  }
  tensor_ = bqa::Algebra::create(value_->field(), std::move(tq));
}

std::size_t RepSetting::vertex(std::size_t i, std::size_t v) const { return i * value_->num_vertices() + v; }

std::size_t RepSetting::shape_arrow(std::size_t a, std::size_t v) const { return a * value_->num_vertices() + v; }

std::size_t RepSetting::value_arrow(std::size_t i, std::size_t alpha) const {
  return shape_.arrows.size() * value_->num_vertices() + i * value_->num_arrows() + alpha;
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

Module to_module(const RepSetting& s, const Representation& x) {
  const auto& shape = s.shape();
  const std::size_t nv = s.value_algebra()->num_vertices();
  const std::size_t na = s.value_algebra()->num_arrows();
  if (x.at.size() != shape.vertices.size() || x.along.size() != shape.arrows.size()) {
    throw IncompatibleInput("representation does not match the shape quiver");
  }
  for (const Module& m : x.at) {
    if (!same_algebra(m.algebra(), *s.value_algebra())) throw IncompatibleInput("vertex module over another algebra");
  }
  for (std::size_t a = 0; a < shape.arrows.size(); ++a) {
    if (!bqa::is_module_map(x.at[shape.arrows[a].src], x.at[shape.arrows[a].tgt], x.along[a])) {
      throw IncompatibleInput("arrow " + shape.arrows[a].id + " is not a module map");
    }
  }
  std::vector<std::size_t> dims(shape.vertices.size() * nv);
  for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
    for (std::size_t v = 0; v < nv; ++v) dims[s.vertex(i, v)] = x.at[i].dim(v);
  }
  std::vector<bqa::Mat> maps(shape.arrows.size() * nv + shape.vertices.size() * na);
  for (std::size_t a = 0; a < shape.arrows.size(); ++a) {
    for (std::size_t v = 0; v < nv; ++v) maps[s.shape_arrow(a, v)] = x.along[a].blocks[v];
  }
  for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
    for (std::size_t al = 0; al < na; ++al) maps[s.value_arrow(i, al)] = x.at[i].arrow_map(al);
  }
  return Module(s.tensor_algebra(), std::move(dims), std::move(maps));
}

Representation to_representation(const RepSetting& s, const Module& m) {
  if (!same_algebra(m.algebra(), *s.tensor_algebra())) {
    throw IncompatibleInput("module is not over the representation algebra of this shape");
  }
  const auto& shape = s.shape();
  const std::size_t nv = s.value_algebra()->num_vertices();
  const std::size_t na = s.value_algebra()->num_arrows();
  Representation x;
  for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
    std::vector<std::size_t> dims(nv);
    for (std::size_t v = 0; v < nv; ++v) dims[v] = m.dim(s.vertex(i, v));
    std::vector<bqa::Mat> maps(na);
    for (std::size_t al = 0; al < na; ++al) maps[al] = m.arrow_map(s.value_arrow(i, al));
    x.at.emplace_back(s.value_algebra(), std::move(dims), std::move(maps));
  }
  for (std::size_t a = 0; a < shape.arrows.size(); ++a) {
    ModuleMap f;
    for (std::size_t v = 0; v < nv; ++v) f.blocks.push_back(m.arrow_map(s.shape_arrow(a, v)));
    x.along.push_back(std::move(f));
  }
  return x;
}

std::vector<VertexData> vertex_data(const RepSetting& s, const Representation& x) {
  const auto& shape = s.shape();
  std::vector<VertexData> out;
  for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
    VertexData d;
    d.vertex = i;
    const Module& xi = x.at[i];
    std::vector<Module> srcs, tgts;
    std::vector<ModuleMap> ins, outs;
    for (std::size_t a = 0; a < shape.arrows.size(); ++a) {
      if (shape.arrows[a].tgt == i) {
        srcs.push_back(x.at[shape.arrows[a].src]);
        ins.push_back(x.along[a]);
      }
      if (shape.arrows[a].src == i) {
        tgts.push_back(x.at[shape.arrows[a].tgt]);
        outs.push_back(x.along[a]);
      }
    }
    if (ins.empty()) {
      d.phi_domain = zero_like(xi);
      d.phi = bqa::zero_map(d.phi_domain, xi);
    } else {
      d.phi_domain = bqa::direct_sum(srcs).sum;
      d.phi = bqa::row_map(ins);
    }
    d.coker_phi = bqa::cokernel(d.phi_domain, xi, d.phi).module;
    if (outs.empty()) {
      d.psi_codomain = zero_like(xi);
      d.psi = bqa::zero_map(xi, d.psi_codomain);
    } else {
      d.psi_codomain = bqa::direct_sum(tgts).sum;
      d.psi = bqa::column_map(outs);
    }
    d.ker_psi = bqa::kernel(xi, d.psi_codomain, d.psi).first;
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifted classes and pairs
// ---------------------------------------------------------------------------

bool lifted_member(const RepSetting& s, const ObjectClass& xc, const Module& rep, LiftKind kind) {
  const Representation x = to_representation(s, rep);
  auto in = [&](const Module& m) {
    const Tri t = xc.contains_module(m);
    if (t == Tri::unknown) {
      throw PreconditionError("a value module has a summand outside the value universe; raise its dimension cap");
    }
    return t == Tri::yes;
  };
  if (kind == LiftKind::pointwise) {
    for (const Module& m : x.at) {
      if (!in(m)) return false;
    }
    return true;
  }
  for (const VertexData& d : vertex_data(s, x)) {
    if (kind == LiftKind::phi) {
      if (!bqa::is_injective(d.phi) || !in(d.coker_phi)) return false;
    } else {
      if (!bqa::is_surjective(d.psi) || !in(d.ker_psi)) return false;
    }
  }
  return true;
}

ObjectClass class_lift(const RepSetting& s, const ObjectClass& xc, const UniversePtr& ru, LiftKind kind) {
  require_same_setting(s, ru);
  std::vector<bool> mem(ru->size());
  for (std::size_t i = 0; i < ru->size(); ++i) mem[i] = lifted_member(s, xc, ru->indec(i), kind);
  return {ru, std::move(mem)};
}

Json RepPairResult::to_json() const {
  Json j{{"verdict", cotorsion::to_string(verdict)},
         {"x", pair.x.to_json()},
         {"y", pair.y.to_json()},
         {"pair", pair_check.to_json()}};
  j["complete"] = complete ? complete->to_json(pair) : Json(nullptr);
  j["hereditary"] = pair.flags.hereditary ? Json(*pair.flags.hereditary) : Json(nullptr);
  return j;
}

RepPairResult check_rep_pair(const RepSetting& s, const CotorsionPair& value_pair, const UniversePtr& ru, Side side) {
  require_rooted(s.shape(), side);
  if (!value_pair.flags.is_pair.value_or(false) || value_pair.flags.complete != Verdict::pass) {
    throw PreconditionError("the value pair is not certified as a complete cotorsion pair");
  }
  RepPairResult r;
  if (side == Side::left) {
    r.pair = cotorsion::make_pair(class_lift(s, value_pair.x, ru, LiftKind::phi),
                                  class_lift(s, value_pair.y, ru, LiftKind::pointwise));
  } else {
    r.pair = cotorsion::make_pair(class_lift(s, value_pair.x, ru, LiftKind::pointwise),
                                  class_lift(s, value_pair.y, ru, LiftKind::psi));
  }
  r.pair_check = cotorsion::check_pair(r.pair);
  r.verdict = r.pair_check.verdict;
  r.pair.flags.is_pair = r.verdict == Verdict::pass;
  if (r.verdict != Verdict::pass) return r;
  r.complete = cotorsion::check_complete(r.pair);
  r.pair.flags.complete = r.complete->verdict;
  r.verdict = cotorsion::combine(r.verdict, r.complete->verdict);
  r.pair.flags.hereditary = cotorsion::check_hereditary(r.pair).verdict == Verdict::pass;
  return r;
}

IdentityResult check_phi_dimension_identity(const RepSetting& s, const CotorsionPair& value_pair,
                                            const UniversePtr& ru, std::size_t n, Side side) {
  if (!value_pair.certified()) throw PreconditionError("the value pair is not certified complete and hereditary");
  require_extendable(value_pair, n, side);
  const RepPairResult rp = check_rep_pair(s, value_pair, ru, side);
  const bool left = side == Side::left;
  ObjectClass lhs = class_lift(s, cotorsion::lift_class(value_pair, n, side), ru, left ? LiftKind::phi : LiftKind::psi);
  const std::string what = left ? "Phi(X_n) = Phi(X)_n" : "Psi(Y_n) = Psi(Y)_n";
  if (!rp.pair.certified()) {
    IdentityResult r;
    r.verdict = rp.verdict == Verdict::fail ? Verdict::fail : Verdict::inconclusive;
    r.lhs = lhs;
    r.rhs = left ? rp.pair.x : rp.pair.y;
    r.message = what + ": the lifted representation pair is not certified complete and hereditary";
    return r;
  }
  return hovey::compare_classes(std::move(lhs), cotorsion::lift_class(rp.pair, n, side), what);
}

// ---------------------------------------------------------------------------
// Lifted triples
// ---------------------------------------------------------------------------

Json RepLiftResult::to_json() const {
  Json j{{"verdict", cotorsion::to_string(verdict)},
         {"lift_then_represent", lift_then_represent.classes_json()},
         {"represent_then_lift", represent_then_lift.classes_json()},
         {"c", c.to_json()},
         {"w", w.to_json()},
         {"f", f.to_json()}};
  if (lift_then_represent.report) {
    j["verification"] = lift_then_represent.report->to_json(lift_then_represent.cw_f, lift_then_represent.c_wf);
  }
  if (lift_then_represent.c.universe()) j["tower"] = tower.to_json(*lift_then_represent.c.universe());
  j["problems"] = problems;
  return j;
}

RepLiftResult lift_rep_triple(const RepSetting& s, const HoveyTriple& t, const UniversePtr& ru, std::size_t n,
                              Side side, const hovey::VerifyOptions& opts) {
  if (!t.verified() || !t.hereditary()) {
    throw PreconditionError("the value triple is not verified as a hereditary Hovey triple");
  }
  require_rooted(s.shape(), side);
  require_same_setting(s, ru);
  require_extendable(side == Side::left ? t.cw_f : t.c_wf, n, side);
  RepLiftResult r;
  auto lift = [&](const ObjectClass& c, LiftKind k) { return class_lift(s, c, ru, k); };
  const ObjectClass rw = lift(t.w, LiftKind::pointwise);
  HoveyTriple base;
  if (side == Side::left) {
    const ObjectClass cn = cotorsion::lift_class(t.c_wf, n, Side::left);
    const ObjectClass z = cotorsion::lift_class(t.cw_f, n, Side::left);
    const ObjectClass z_orth = universe::orthogonal(z, Perp::right);
    r.lift_then_represent = hovey::verify_triple(lift(cn, LiftKind::phi), rw, lift(z_orth, LiftKind::pointwise), opts);
    base = hovey::verify_triple(lift(t.c, LiftKind::phi), rw, lift(t.f, LiftKind::pointwise), opts);
  } else {
    const ObjectClass fn = cotorsion::lift_class(t.cw_f, n, Side::right);
    const ObjectClass z = cotorsion::lift_class(t.c_wf, n, Side::right);
    const ObjectClass z_orth = universe::orthogonal(z, Perp::left);
    r.lift_then_represent = hovey::verify_triple(lift(z_orth, LiftKind::pointwise), rw, lift(fn, LiftKind::psi), opts);
    base = hovey::verify_triple(lift(t.c, LiftKind::pointwise), rw, lift(t.f, LiftKind::psi), opts);
  }
  auto flag = [&](Verdict v, const std::string& what) {
    r.verdict = cotorsion::combine(r.verdict, v);
    r.problems.push_back(what);
  };
  if (!r.lift_then_represent.verified() || !r.lift_then_represent.hereditary()) {
    flag(r.lift_then_represent.report->verdict == Verdict::inconclusive ? Verdict::inconclusive : Verdict::fail,
         "the lifted representation triple does not verify as a hereditary Hovey triple");
  }
  if (!base.verified() || !base.hereditary()) {
    flag(base.report->verdict == Verdict::inconclusive ? Verdict::inconclusive : Verdict::fail,
         "the representation triple at n = 0 does not verify as a hereditary Hovey triple");
    return r;
  }
  base = hovey::certify_extendable(base, n, side, opts.budget);
  const auto& upto = side == Side::left ? base.cw_f.flags.left_extendable_upto : base.c_wf.flags.right_extendable_upto;
  if (n > 0 && (!upto || *upto < n)) {
    flag(Verdict::fail, "the representation triple is not extendable up to n = " + std::to_string(n));
    return r;
  }
  hovey::LiftResult lr = hovey::lift_triple(base, n, side, opts);
  r.represent_then_lift = lr.lifted;
  if (lr.verdict != Verdict::pass) flag(lr.verdict, "lifting inside representations does not verify");
  r.c = hovey::compare_classes(r.lift_then_represent.c, r.represent_then_lift.c, "first classes of both routes");
  r.w = hovey::compare_classes(r.lift_then_represent.w, r.represent_then_lift.w, "second classes of both routes");
  r.f = hovey::compare_classes(r.lift_then_represent.f, r.represent_then_lift.f, "third classes of both routes");
  r.verdict = cotorsion::combine(r.verdict, cotorsion::combine(r.c.verdict, cotorsion::combine(r.w.verdict, r.f.verdict)));
  if (r.lift_then_represent.verified() && r.lift_then_represent.hereditary()) {
    r.tower = hovey::stable_compare(hovey::frobenius_core(base), hovey::frobenius_core(r.lift_then_represent));
    r.verdict = cotorsion::combine(r.verdict, r.tower.verdict);
  }
  return r;
}

}  // namespace cotlab::quiverlift
