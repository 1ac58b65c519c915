#include <gtest/gtest.h>

#include "cotlab/error.hpp"
#include "cotlab/quiverlift.hpp"
#include "support/oracle.hpp"

using namespace cotlab::quiverlift;
using cotlab::cotorsion::certify;
using cotlab::cotorsion::check_extendable;
using cotlab::cotorsion::make_pair;
using cotlab::cotorsion::with_extendability;
using cotlab::universe::EnumerateOptions;
using cotlab::universe::Universe;

namespace {

EnumerateOptions no_cache() {
  EnumerateOptions o;
  o.cache_dir = "";
  return o;
}

ShapeQuiver shape(const std::string& json) { return ShapeQuiver::from_json(Json::parse(json)); }

ShapeQuiver a2_shape() {
  return shape(R"({"vertices":["p","q"],"arrows":[{"id":"s","src":"p","tgt":"q"}]})");
}

cotlab::bqa::AlgebraPtr field() {
  static const auto a = oracle::algebra(R"({"field":2,"vertices":["1"],"arrows":[],"relations":[]})");
  return a;
}

struct Fixture {
  UniversePtr values;
  RepSetting setting;
  UniversePtr reps;
};

const Fixture& over(const cotlab::bqa::AlgebraPtr& alg, std::size_t cap) {
  static std::vector<std::unique_ptr<Fixture>> cache;
  for (const auto& f : cache) {
    if (f->values->algebra() == alg) return *f;
  }
  auto values = Universe::enumerate(alg, cap, no_cache());
  RepSetting s(a2_shape(), alg);
  auto reps = Universe::enumerate(s.tensor_algebra(), kDefaultRepCap, no_cache());
  cache.push_back(std::make_unique<Fixture>(Fixture{values, s, reps}));
  return *cache.back();
}

const Fixture& dual() { return over(oracle::dual_numbers(), 2); }
const Fixture& a2() { return over(oracle::a2(), 2); }
const Fixture& scalars() { return over(field(), 1); }

// Full column rank at every value vertex, counted by brute force.
bool injective_blocks(const ModuleMap& f) {
  for (const auto& b : f.blocks) {
    if (oracle::rank(b) != b.cols()) return false;
  }
  return true;
}

std::size_t find(const Fixture& f, std::size_t dim_p, std::size_t dim_q) {
  for (std::size_t i = 0; i < f.reps->size(); ++i) {
    const Representation x = to_representation(f.setting, f.reps->indec(i));
    if (x.at[0].total_dim() == dim_p && x.at[1].total_dim() == dim_q) return i;
  }
  ADD_FAILURE() << "no representation with dimensions " << dim_p << ", " << dim_q;
  return 0;
}

TEST(Shape, RootednessOfSmallShapes) {
  const Rootedness a = check_rooted(a2_shape());
  EXPECT_TRUE(a.left);
  EXPECT_TRUE(a.right);
  const Rootedness loop = check_rooted(shape(R"({"vertices":["p"],"arrows":[{"id":"l","src":"p","tgt":"p"}]})"));
  EXPECT_FALSE(loop.left);
  EXPECT_FALSE(loop.right);
  const Rootedness cyc = check_rooted(shape(
      R"({"vertices":["p","q"],"arrows":[{"id":"s","src":"p","tgt":"q"},{"id":"t","src":"q","tgt":"p"}]})"));
  EXPECT_FALSE(cyc.left);
  EXPECT_FALSE(cyc.right);
  EXPECT_TRUE(check_rooted(shape(R"({"vertices":["p","q"],"arrows":[]})")).left);
}

TEST(Shape, JsonRoundTripAndErrors) {
  const ShapeQuiver q = a2_shape();
  const ShapeQuiver back = ShapeQuiver::from_json(q.to_json());
  EXPECT_EQ(back.vertices, q.vertices);
  ASSERT_EQ(back.arrows.size(), 1u);
  EXPECT_EQ(back.arrows[0].src, 0u);
  EXPECT_EQ(back.arrows[0].tgt, 1u);
  EXPECT_THROW(shape(R"({"arrows":[]})"), cotlab::MalformedInput);
  EXPECT_THROW(shape(R"({"vertices":["p","p"]})"), cotlab::MalformedInput);
  EXPECT_THROW(shape(R"({"vertices":["p"],"arrows":[{"id":"s","src":"p","tgt":"z"}]})"), cotlab::MalformedInput);
}

TEST(Setting, TensorAlgebraShape) {
  const RepSetting s(a2_shape(), oracle::a2());
  EXPECT_EQ(s.tensor_algebra()->num_vertices(), 4u);
  EXPECT_EQ(s.tensor_algebra()->num_arrows(), 4u);
  EXPECT_EQ(s.tensor_algebra()->quiver().relations.size(), 1u);
  const RepSetting d(a2_shape(), oracle::dual_numbers());
  // x^2 at both shape vertices and one commutativity square.
  EXPECT_EQ(d.tensor_algebra()->quiver().relations.size(), 3u);
}

TEST(Universe, ScalarValuesGiveThreeIndecomposables) {
  const Fixture& f = scalars();
  EXPECT_EQ(f.reps->size(), 3u);
  const auto want = oracle::indecomposables(f.setting.tensor_algebra(), kDefaultRepCap);
  ASSERT_EQ(want.size(), 3u);
  for (const Module& m : want) {
    std::size_t hits = 0;
    for (const Module& g : f.reps->indecs()) hits += oracle::isomorphic(g, m);
    EXPECT_EQ(hits, 1u);
  }
}

TEST(Universe, ExtTableMatchesOracle) {
  const Fixture& f = dual();
  for (std::size_t i = 0; i < f.reps->size(); ++i) {
    for (std::size_t j = 0; j < f.reps->size(); ++j) {
      if (f.reps->indec(i).total_dim() + f.reps->indec(j).total_dim() > 6) continue;
      EXPECT_EQ(f.reps->ext(i, j, 1), oracle::ext1(f.reps->indec(i), f.reps->indec(j)));
    }
  }
}

TEST(Representations, RoundTrip) {
  const Fixture& f = a2();
  for (const Module& m : f.reps->indecs()) {
    const Representation x = to_representation(f.setting, m);
    ASSERT_EQ(x.at.size(), 2u);
    ASSERT_EQ(x.along.size(), 1u);
    EXPECT_TRUE(cotlab::bqa::is_module_map(x.at[0], x.at[1], x.along[0]));
    EXPECT_EQ(to_module(f.setting, x), m);
  }
}

TEST(Representations, RejectsNonModuleMaps) {
  const auto alg = oracle::dual_numbers();
  const RepSetting s(a2_shape(), alg);
  const auto free = Universe::enumerate(alg, 2, no_cache())->indec(1);
  const Module simple = Module::simple(alg, 0);
  ASSERT_EQ(free.total_dim(), 2u);
  // Projecting onto the socle coordinate is not A-linear.
  ModuleMap bad{{cotlab::bqa::Mat::from_rows(alg->field(), {{0, 1}})}};
  ModuleMap top = cotlab::bqa::zero_map(free, simple);
  bool found_bad = false;
  for (int c = 0; c < 2; ++c) {
    ModuleMap f{{cotlab::bqa::Mat::from_rows(alg->field(), {{c == 0 ? 1u : 0u, c == 1 ? 1u : 0u}})}};
    if (!cotlab::bqa::is_module_map(free, simple, f)) {
      bad = f;
      found_bad = true;
    } else {
      top = f;
    }
  }
  ASSERT_TRUE(found_bad);
  EXPECT_THROW(to_module(s, Representation{{free, simple}, {bad}}), cotlab::IncompatibleInput);
  EXPECT_NO_THROW(to_module(s, Representation{{free, simple}, {top}}));
  EXPECT_THROW(to_module(s, Representation{{free}, {}}), cotlab::IncompatibleInput);
}

TEST(VertexData, SourceAndSink) {
  const Fixture& f = dual();
  for (const Module& m : f.reps->indecs()) {
    const Representation x = to_representation(f.setting, m);
    const auto d = vertex_data(f.setting, x);
    ASSERT_EQ(d.size(), 2u);
    // p is a source: phi_p = 0 -> X(p), C_p = X(p); psi_p = X(s).
    EXPECT_EQ(d[0].phi_domain.total_dim(), 0u);
    EXPECT_EQ(d[0].coker_phi.total_dim(), x.at[0].total_dim());
    EXPECT_EQ(d[0].psi.blocks, x.along[0].blocks);
    // q is a sink: K_q = X(q); phi_q = X(s).
    EXPECT_EQ(d[1].ker_psi.total_dim(), x.at[1].total_dim());
    EXPECT_EQ(d[1].phi.blocks, x.along[0].blocks);
    const std::size_t r = oracle::rank(x.along[0].blocks[0]);
    EXPECT_EQ(d[1].coker_phi.total_dim(), x.at[1].total_dim() - r);
    EXPECT_EQ(d[0].ker_psi.total_dim(), x.at[0].total_dim() - r);
  }
}

TEST(ClassLift, PhiOfEverythingIsTheMonicRepresentations) {
  for (const Fixture* f : {&dual(), &a2(), &scalars()}) {
    const ObjectClass phi = class_lift(f->setting, ObjectClass::all(f->values), f->reps, LiftKind::phi);
    for (std::size_t i = 0; i < f->reps->size(); ++i) {
      const Representation x = to_representation(f->setting, f->reps->indec(i));
      EXPECT_EQ(phi.contains(i), injective_blocks(x.along[0])) << f->reps->label(i);
    }
  }
  // Over a field the only non-monic indecomposable is k -> 0.
  const Fixture& s = scalars();
  EXPECT_EQ(class_lift(s.setting, ObjectClass::all(s.values), s.reps, LiftKind::phi).count(), 2u);
}

TEST(ClassLift, PointwiseProjectivesOverDualNumbers) {
  const Fixture& f = dual();
  const ObjectClass pw = class_lift(f.setting, ObjectClass::projectives(f.values), f.reps, LiftKind::pointwise);
  for (std::size_t i = 0; i < f.reps->size(); ++i) {
    const Representation x = to_representation(f.setting, f.reps->indec(i));
    bool free = true;
    for (const Module& m : x.at) free = free && 2 * oracle::rank(m.arrow_map(0)) == m.total_dim();
    EXPECT_EQ(pw.contains(i), free) << f.reps->label(i);
  }
}

TEST(ClassLift, PsiOfEverythingIsTheEpicRepresentations) {
  const Fixture& f = a2();
  const ObjectClass psi = class_lift(f.setting, ObjectClass::all(f.values), f.reps, LiftKind::psi);
  for (std::size_t i = 0; i < f.reps->size(); ++i) {
    const Representation x = to_representation(f.setting, f.reps->indec(i));
    bool epi = true;
    for (const auto& b : x.along[0].blocks) epi = epi && oracle::rank(b) == b.rows();
    EXPECT_EQ(psi.contains(i), epi) << f.reps->label(i);
  }
}

TEST(ClassLift, RejectsAForeignUniverse) {
  const Fixture& f = dual();
  EXPECT_THROW(class_lift(f.setting, ObjectClass::all(f.values), f.values, LiftKind::phi), cotlab::IncompatibleInput);
}

CotorsionPair proj_all(const Fixture& f) {
  return certify(make_pair(ObjectClass::projectives(f.values), ObjectClass::all(f.values)));
}
CotorsionPair all_inj(const Fixture& f) {
  return certify(make_pair(ObjectClass::all(f.values), ObjectClass::injectives(f.values)));
}

TEST(RepPair, BothSidesOverBothValueFixtures) {
  for (const Fixture* f : {&dual(), &a2()}) {
    for (const CotorsionPair& p : {proj_all(*f), all_inj(*f)}) {
      ASSERT_TRUE(p.certified());
      for (Side side : {Side::left, Side::right}) {
        const RepPairResult r = check_rep_pair(f->setting, p, f->reps, side);
        EXPECT_EQ(r.verdict, Verdict::pass) << r.to_json().dump();
        EXPECT_TRUE(r.pair.flags.hereditary.value_or(false));
      }
    }
  }
}

// Phi(proj) over a self-injective algebra is the projective representations.
TEST(RepPair, PhiOfProjectivesIsProjective) {
  const Fixture& f = dual();
  const RepPairResult r = check_rep_pair(f.setting, proj_all(f), f.reps, Side::left);
  EXPECT_EQ(r.pair.x, ObjectClass::projectives(f.reps));
  EXPECT_EQ(r.pair.y, ObjectClass::all(f.reps));
}

TEST(RepPair, NonRootedShapeIsRejected) {
  const auto loop = shape(R"({"vertices":["p"],"arrows":[{"id":"l","src":"p","tgt":"p"}]})");
  EXPECT_THROW(RepSetting(loop, oracle::dual_numbers()), cotlab::PreconditionError);
}

TEST(RepPair, UncertifiedValuePairIsRejected) {
  const Fixture& f = dual();
  const CotorsionPair raw = make_pair(ObjectClass::projectives(f.values), ObjectClass::all(f.values));
  EXPECT_THROW(check_rep_pair(f.setting, raw, f.reps, Side::left), cotlab::PreconditionError);
}

CotorsionPair extendable(CotorsionPair p, std::size_t n, Side side) {
  return with_extendability(p, check_extendable(p, n, side), side);
}

TEST(PhiIdentity, HoldsAtLevelZero) {
  for (const Fixture* f : {&dual(), &a2()}) {
    const IdentityResult l = check_phi_dimension_identity(f->setting, proj_all(*f), f->reps, 0, Side::left);
    EXPECT_EQ(l.verdict, Verdict::pass);
    const IdentityResult r = check_phi_dimension_identity(f->setting, all_inj(*f), f->reps, 0, Side::right);
    EXPECT_EQ(r.verdict, Verdict::pass);
  }
}

// Phi(X_n) is always contained in Phi(X)_n, but not conversely: A -> 0 has
// projective dimension 1 and is not monic.
TEST(PhiIdentity, InclusionHoldsAndTheReverseFails) {
  const Fixture& f = dual();
  const CotorsionPair p = extendable(proj_all(f), 2, Side::left);
  for (std::size_t n = 1; n <= 2; ++n) {
    const IdentityResult r = check_phi_dimension_identity(f.setting, p, f.reps, n, Side::left);
    EXPECT_TRUE(r.lhs.subset_of(r.rhs));
    EXPECT_EQ(r.verdict, Verdict::fail);
    const std::size_t a_to_zero = find(f, 2, 0);
    EXPECT_FALSE(r.lhs.contains(a_to_zero));
    EXPECT_TRUE(r.rhs.contains(a_to_zero));
    EXPECT_FALSE(r.witnesses.empty());
  }
}

TEST(PhiIdentity, DualFailureForPsiOverA2) {
  const Fixture& f = a2();
  const CotorsionPair p = extendable(all_inj(f), 1, Side::right);
  const IdentityResult r = check_phi_dimension_identity(f.setting, p, f.reps, 1, Side::right);
  EXPECT_TRUE(r.lhs.subset_of(r.rhs));
  EXPECT_EQ(r.verdict, Verdict::fail);
}

TEST(PhiIdentity, RequiresExtendability) {
  const Fixture& f = dual();
  EXPECT_THROW(check_phi_dimension_identity(f.setting, proj_all(f), f.reps, 1, Side::left),
               cotlab::PreconditionError);
}

TEST(RepTriple, LevelZeroRoutesAgree) {
  {
    const Fixture& f = dual();
    const auto t = cotlab::hovey::verify_triple(ObjectClass::all(f.values), ObjectClass::projectives(f.values),
                                                ObjectClass::all(f.values));
    const RepLiftResult r = lift_rep_triple(f.setting, t, f.reps, 0, Side::left);
    EXPECT_EQ(r.verdict, Verdict::pass) << r.to_json().dump();
    EXPECT_EQ(r.c.verdict, Verdict::pass);
    EXPECT_EQ(r.w.verdict, Verdict::pass);
    EXPECT_EQ(r.f.verdict, Verdict::pass);
  }
  {
    const Fixture& f = a2();
    const auto t = cotlab::hovey::verify_triple(ObjectClass::all(f.values), ObjectClass::all(f.values),
                                                ObjectClass::injectives(f.values));
    const RepLiftResult r = lift_rep_triple(f.setting, t, f.reps, 0, Side::right);
    EXPECT_EQ(r.verdict, Verdict::pass) << r.to_json().dump();
  }
}

TEST(RepTriple, RequiresAVerifiedTriple) {
  const Fixture& f = dual();
  const auto bad = cotlab::hovey::verify_triple(ObjectClass::all(f.values), ObjectClass::of(f.values, {0}),
                                                ObjectClass::all(f.values));
  ASSERT_FALSE(bad.verified());
  EXPECT_THROW(lift_rep_triple(f.setting, bad, f.reps, 0, Side::left), cotlab::PreconditionError);
}

}  // namespace
