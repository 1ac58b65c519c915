#include <gtest/gtest.h>

#include <set>

#include "cotlab/error.hpp"
#include "cotlab/hovey.hpp"
#include "support/oracle.hpp"

using namespace cotlab::hovey;
using cotlab::bqa::Module;
using cotlab::universe::EnumerateOptions;
using cotlab::universe::Universe;
using cotlab::universe::UniversePtr;

namespace {

UniversePtr enumerate(const cotlab::bqa::AlgebraPtr& alg, std::size_t cap) {
  EnumerateOptions o;
  o.cache_dir = "";
  return Universe::enumerate(alg, cap, o);
}

UniversePtr dual() { return enumerate(oracle::dual_numbers(), 2); }
UniversePtr a2() { return enumerate(oracle::a2(), 2); }
UniversePtr cube() { return enumerate(oracle::truncated_cube(), 3); }

std::size_t member(const UniversePtr& u, const std::string& label) {
  for (std::size_t i = 0; i < u->size(); ++i) {
    if (u->label(i) == label) return i;
  }
  ADD_FAILURE() << "no member " << label;
  return 0;
}

HoveyTriple gorenstein(const UniversePtr& u) {
  return verify_triple(ObjectClass::all(u), ObjectClass::projectives(u), ObjectClass::all(u));
}
HoveyTriple trivial(const UniversePtr& u) {
  return verify_triple(ObjectClass::all(u), ObjectClass::all(u), ObjectClass::injectives(u));
}

TEST(Verify, AllProjAllOverSelfInjectiveAlgebras) {
  for (const auto& u : {dual(), cube()}) {
    const HoveyTriple t = gorenstein(u);
    EXPECT_TRUE(t.verified()) << t.to_string();
    EXPECT_TRUE(t.hereditary());
    EXPECT_EQ(t.report->thickness.verdict, Verdict::pass);
    EXPECT_GT(t.report->thickness.checked, 0u);
  }
}

TEST(Verify, AllAllInjOverEveryFixture) {
  for (const auto& u : {dual(), a2(), cube()}) {
    const HoveyTriple t = trivial(u);
    EXPECT_TRUE(t.verified());
    EXPECT_TRUE(t.hereditary());
  }
}

TEST(Verify, NonThickClassFails) {
  const auto u = dual();
  const auto s = ObjectClass::of(u, {member(u, "S(1)")});
  // S >-> A ->> S: two terms in, one out.
  const auto env = cotlab::homalg::injective_envelope(u->indec(member(u, "S(1)")));
  const auto coker = cotlab::bqa::cokernel(u->indec(member(u, "S(1)")), env.object, env.map);
  const cotlab::homalg::Conflation c{u->indec(member(u, "S(1)")), env.object, coker.module, env.map, coker.projection};
  ASSERT_TRUE(cotlab::homalg::is_conflation(c));
  const ThicknessResult r = check_thickness(s, {c});
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_FALSE(r.witnesses.empty());
  EXPECT_FALSE(verify_triple(ObjectClass::all(u), s, ObjectClass::all(u)).verified());
}

// Two-out-of-three evaluated with oracle membership: over F[x]/(x^k) a
// module is projective iff it is free, iff all its Jordan blocks have size
// k, iff k * rank(x^(k-1)) equals its dimension.
TEST(ThicknessProperty, MatchesOracleMembership) {
  for (auto [u, k] : {std::pair{dual(), std::size_t{2}}, std::pair{cube(), std::size_t{3}}}) {
    const auto confs = cotlab::homalg::generate_conflations(u->resolver(), u->indecs(), 150, 23);
    auto in_proj = [&, k = k](const Module& m) {
      if (m.total_dim() == 0) return true;
      cotlab::bqa::Mat power = m.arrow_map(0);
      for (std::size_t i = 2; i < k; ++i) power = oracle::mul(power, m.arrow_map(0));
      return k * oracle::rank(power) == m.total_dim();
    };
    std::size_t bad = 0;
    for (const auto& c : confs) {
      const int in = in_proj(c.left) + in_proj(c.mid) + in_proj(c.right);
      bad += in == 2;
    }
    const ThicknessResult r = check_thickness(ObjectClass::projectives(u), confs);
    EXPECT_EQ(r.verdict == Verdict::pass, bad == 0);
    EXPECT_EQ(r.checked + r.skipped, confs.size());
    EXPECT_EQ(bad, 0u);
  }
}

TEST(Conditions, MembersAtLevelZero) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 0, Side::left);
  for (std::size_t i = 0; i < u->size(); ++i) {
    const ConditionsResult r = check_sstype(t, u->indec(i), 0, Side::left);
    for (Tri c : r.cond) EXPECT_EQ(c, Tri::yes);
  }
}

TEST(Conditions, SimpleAtLevelOneOverDualNumbers) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 1, Side::left);
  const ConditionsResult r = check_sstype(t, u->indec(member(u, "S(1)")), 1, Side::left);
  EXPECT_TRUE(r.agree());
  EXPECT_EQ(r.cond[0], Tri::yes);
  EXPECT_EQ(r.cond[2], Tri::yes);
}

TEST(Conditions, RightLevelOneOverA2) {
  const auto u = a2();
  const HoveyTriple t = certify_extendable(trivial(u), 1, Side::right);
  for (std::size_t i = 0; i < u->size(); ++i) {
    const ConditionsResult r = check_sstype(t, u->indec(i), 1, Side::right);
    for (Tri c : r.cond) EXPECT_EQ(c, Tri::yes) << u->label(i);
  }
}

TEST(Conditions, RequireExtendability) {
  const auto u = dual();
  EXPECT_THROW(check_sstype(gorenstein(u), u->indec(0), 2, Side::left), cotlab::PreconditionError);
}

TEST(CorIdentity, LevelZeroIsTheIntersection) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 0, Side::left);
  const IdentityResult r = check_cor_identity(t, 0, Side::left);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lhs, t.c & t.w);
}

TEST(CorIdentity, DualNumbersLevelTwo) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 2, Side::left);
  const IdentityResult r = check_cor_identity(t, 2, Side::left);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lhs, ObjectClass::projectives(u));
  EXPECT_EQ(r.rhs, ObjectClass::projectives(u));
}

TEST(CorIdentity, A2RightLevelOne) {
  const auto u = a2();
  const HoveyTriple t = certify_extendable(trivial(u), 1, Side::right);
  const IdentityResult r = check_cor_identity(t, 1, Side::right);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lhs, ObjectClass::all(u));
}

TEST(CompareClasses, DifferenceCarriesWitness) {
  const auto u = a2();
  const IdentityResult r = compare_classes(ObjectClass::projectives(u), ObjectClass::injectives(u), "test");
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_EQ(r.witnesses.size(), 2u);
  for (const auto& w : r.witnesses) EXPECT_EQ(w.kind, "class_difference");
}

TEST(Lift, LevelZeroReturnsTheTriple) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 0, Side::left);
  const LiftResult r = lift_triple(t, 0, Side::left);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lifted.c, t.c);
  EXPECT_EQ(r.lifted.w, t.w);
  EXPECT_EQ(r.lifted.f, t.f);
}

TEST(Lift, DualNumbersTowerIsConstant) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 3, Side::left);
  for (std::size_t n = 1; n <= 3; ++n) {
    const LiftResult r = lift_triple(t, n, Side::left);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_EQ(r.lifted.c, t.c);
    EXPECT_EQ(r.lifted.w, t.w);
    EXPECT_EQ(r.lifted.f, t.f);
    EXPECT_EQ(r.orthogonal_identity.verdict, Verdict::pass);
    EXPECT_EQ(r.kernel_identity.verdict, Verdict::pass);
  }
}

// With F = inj over a hereditary algebra F_1 is everything, so the lifted
// first class is the left orthogonal of W ∩ F_1 = all, the projectives.
TEST(Lift, A2RightLevelOne) {
  const auto u = a2();
  const HoveyTriple t = certify_extendable(trivial(u), 1, Side::right);
  const LiftResult r = lift_triple(t, 1, Side::right);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lifted.c, ObjectClass::projectives(u));
  EXPECT_EQ(r.lifted.w, ObjectClass::all(u));
  EXPECT_EQ(r.lifted.f, ObjectClass::all(u));
  EXPECT_TRUE(r.lifted.verified());
}

TEST(Lift, RequiresExtendability) {
  const auto u = dual();
  EXPECT_THROW(lift_triple(gorenstein(u), 1, Side::left), cotlab::PreconditionError);
}

TEST(Core, TrivialTripleHasNoStableObjects) {
  for (const auto& u : {dual(), a2()}) {
    const FrobeniusCore core = frobenius_core(trivial(u));
    EXPECT_EQ(core.objects, ObjectClass::injectives(u));
    EXPECT_EQ(core.projinj, ObjectClass::injectives(u));
    EXPECT_TRUE(core.stable_classes.empty());
  }
}

TEST(Core, DualNumbers) {
  const auto u = dual();
  const FrobeniusCore core = frobenius_core(gorenstein(u));
  EXPECT_EQ(core.objects, ObjectClass::all(u));
  EXPECT_EQ(core.projinj, ObjectClass::projectives(u));
  EXPECT_EQ(core.stable_classes, std::vector<std::size_t>{member(u, "S(1)")});
  EXPECT_EQ(core.verdict, Verdict::pass);
}

TEST(Core, TruncatedCubeHasTwoStableClasses) {
  const auto u = cube();
  const FrobeniusCore core = frobenius_core(gorenstein(u));
  EXPECT_EQ(core.stable_classes.size(), 2u);
  // The stable objects are exactly the non-projective indecomposables.
  for (std::size_t i : core.stable_classes) EXPECT_FALSE(cotlab::homalg::is_projective(u->indec(i)));
}

// Maps S -> S factoring through the projective A are found by composing
// every pair of maps S -> A -> S.
TEST(StableHom, SimpleOverDualNumbers) {
  const auto u = dual();
  const Module& s = u->indec(member(u, "S(1)"));
  const Module& a = u->indec(member(u, "P(1)"));
  std::set<std::vector<cotlab::linfield::Elem>> factoring;
  for (const auto& f : oracle::homs(s, a)) {
    for (const auto& g : oracle::homs(a, s)) {
      const auto gf = oracle::mul(g[0], f[0]);
      factoring.insert({gf.entries().begin(), gf.entries().end()});
    }
  }
  const std::size_t want = oracle::hom_dim(s, s) - oracle::log_p(factoring.size(), 2);
  EXPECT_EQ(want, 1u);
  EXPECT_EQ(stable_hom_dim(frobenius_core(gorenstein(u)), s, s), want);
}

TEST(StableCompare, CoreAgainstItself) {
  for (const auto& u : {dual(), cube()}) {
    const FrobeniusCore core = frobenius_core(gorenstein(u));
    const StableComparison cmp = stable_compare(core, core);
    EXPECT_EQ(cmp.verdict, Verdict::pass);
    EXPECT_TRUE(cmp.orphans.empty());
    for (auto [b, a] : cmp.matching) EXPECT_EQ(a, b);
  }
}

TEST(StableCompare, DualNumbersAcrossTheTower) {
  const auto u = dual();
  const HoveyTriple t = certify_extendable(gorenstein(u), 2, Side::left);
  const FrobeniusCore base = frobenius_core(t);
  const FrobeniusCore top = frobenius_core(lift_triple(t, 2, Side::left).lifted);
  const StableComparison cmp = stable_compare(base, top);
  EXPECT_EQ(cmp.verdict, Verdict::pass);
  EXPECT_EQ(cmp.matching.size(), 1u);
}

TEST(Gluing, DegenerateTriplesAgree) {
  const auto u = a2();
  const HoveyTriple t = trivial(u);
  const HypothesisResult r = check_gkr_hypotheses(t, t, t);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.first_form, r.second_form);
}

TEST(Gluing, ThirdTripleAllAllAll) {
  const auto u = dual();
  const HoveyTriple t1 = gorenstein(u);
  HoveyTriple t3;
  t3.c = t3.w = t3.f = ObjectClass::all(u);
  const HypothesisResult same = check_gkr_hypotheses(t1, t1, t3);
  EXPECT_EQ(same.first_form, true);
  EXPECT_EQ(same.verdict, Verdict::pass);
  const HypothesisResult other = check_gkr_hypotheses(t1, trivial(u), t3);
  EXPECT_EQ(other.first_form, false);
  EXPECT_EQ(other.first_form, other.second_form);
}

}  // namespace
