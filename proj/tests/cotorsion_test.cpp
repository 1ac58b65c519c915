#include <gtest/gtest.h>

#include <random>

#include "cotlab/cotorsion.hpp"
#include "cotlab/error.hpp"
#include "support/oracle.hpp"

using namespace cotlab::cotorsion;
using cotlab::universe::EnumerateOptions;
using cotlab::universe::Universe;

namespace {

UniversePtr enumerate(const cotlab::bqa::AlgebraPtr& alg, std::size_t cap) {
  EnumerateOptions o;
  o.cache_dir = "";
  return Universe::enumerate(alg, cap, o);
}

UniversePtr dual() { return enumerate(oracle::dual_numbers(), 2); }
UniversePtr a2() { return enumerate(oracle::a2(), 2); }
UniversePtr cube() { return enumerate(oracle::truncated_cube(), 3); }

// 1 -> 2 -> 3 with the relation ab = 0: global dimension 2.
cotlab::bqa::AlgebraPtr a3_zero_relation() {
  static const auto a = oracle::algebra(R"({"field":2,"vertices":["1","2","3"],
    "arrows":[{"id":"a","src":"1","tgt":"2"},{"id":"b","src":"2","tgt":"3"}],"relations":[[{"path":["a","b"]}]]})");
  return a;
}

std::size_t member(const UniversePtr& u, const std::string& label) {
  for (std::size_t i = 0; i < u->size(); ++i) {
    if (u->label(i) == label) return i;
  }
  ADD_FAILURE() << "no member " << label;
  return 0;
}

CotorsionPair proj_all(const UniversePtr& u) {
  return certify(make_pair(ObjectClass::projectives(u), ObjectClass::all(u)));
}
CotorsionPair all_inj(const UniversePtr& u) {
  return certify(make_pair(ObjectClass::all(u), ObjectClass::injectives(u)));
}

// Ext^d(m, n) by dimension shifting onto the extension-count oracle.
std::size_t ext_oracle(const Module& m, const Module& n, std::size_t d) {
  return oracle::ext1(cotlab::homalg::syzygy(m, d - 1), n);
}

// Pair condition decided from the extension-count oracle alone.
bool oracle_is_pair(const ObjectClass& x, const ObjectClass& y) {
  const auto& u = *x.universe();
  for (std::size_t i = 0; i < u.size(); ++i) {
    bool in_right = true, in_left = true;
    for (std::size_t j : x.indices()) in_right = in_right && oracle::ext1(u.indec(j), u.indec(i)) == 0;
    for (std::size_t j : y.indices()) in_left = in_left && oracle::ext1(u.indec(i), u.indec(j)) == 0;
    if (in_right != y.contains(i) || in_left != x.contains(i)) return false;
  }
  return true;
}

// Membership of an arbitrary module in add(class) through the Ext criterion
// against the opposite class, evaluated with the oracle.
bool oracle_left_of(const Module& m, const ObjectClass& y) {
  for (std::size_t j : y.indices()) {
    if (oracle::ext1(m, y.universe()->indec(j)) != 0) return false;
  }
  return true;
}
bool oracle_right_of(const Module& m, const ObjectClass& x) {
  for (std::size_t j : x.indices()) {
    if (oracle::ext1(x.universe()->indec(j), m) != 0) return false;
  }
  return true;
}

TEST(Pair, ProjectivesAndEverything) {
  for (const auto& u : {dual(), a2(), cube()}) {
    EXPECT_EQ(check_pair(make_pair(ObjectClass::projectives(u), ObjectClass::all(u))).verdict, Verdict::pass);
    EXPECT_EQ(check_pair(make_pair(ObjectClass::all(u), ObjectClass::injectives(u))).verdict, Verdict::pass);
  }
}

TEST(Pair, TruncatedLeftClassFails) {
  const auto u = dual();
  const auto s = ObjectClass::of(u, {member(u, "S(1)")});
  const CheckResult r = check_pair(make_pair(s, ObjectClass::injectives(u)));
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_FALSE(r.witnesses.empty());
}

TEST(Pair, AgreesWithOracleOnEverySubsetPair) {
  for (const auto& u : {a2(), enumerate(oracle::a3(), 3)}) {
    const std::size_t n = u->size();
    for (std::size_t mx = 0; mx < (1u << n); ++mx) {
      std::vector<bool> bits(n);
      for (std::size_t i = 0; i < n; ++i) bits[i] = (mx >> i) & 1u;
      const ObjectClass x(u, bits);
      const ObjectClass y = cotlab::universe::orthogonal(x, cotlab::universe::Perp::right);
      EXPECT_EQ(check_pair(make_pair(x, y)).verdict == Verdict::pass, oracle_is_pair(x, y)) << x.to_string();
    }
  }
}

TEST(Complete, PreconditionWithoutPair) {
  const auto u = dual();
  EXPECT_THROW(check_complete(make_pair(ObjectClass::all(u), ObjectClass::all(u))), cotlab::PreconditionError);
}

TEST(Complete, PreenvelopeOfSimpleOverDualNumbers) {
  const auto u = dual();
  CotorsionPair p = make_pair(ObjectClass::all(u), ObjectClass::injectives(u));
  p.flags.is_pair = true;
  const auto w = special_preenvelope(p, u->indec(member(u, "S(1)")));
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(oracle::isomorphic(w->conflation.mid, u->indec(member(u, "P(1)"))));
  EXPECT_TRUE(oracle::isomorphic(w->conflation.right, u->indec(member(u, "S(1)"))));
}

TEST(Complete, ProjectiveCoverPrecovers) {
  const auto u = a2();
  CotorsionPair p = make_pair(ObjectClass::projectives(u), ObjectClass::all(u));
  p.flags.is_pair = true;
  for (std::size_t i = 0; i < u->size(); ++i) {
    const auto w = special_precover(p, u->indec(i));
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(cotlab::homalg::is_projective(w->conflation.mid));
  }
}

// Every approximation witness is exact and its terms lie in the claimed
// classes according to the oracle.
TEST(Complete, WitnessesCheckOutAgainstOracle) {
  for (const auto& u : {dual(), a2(), cube()}) {
    for (const CotorsionPair& p : {proj_all(u), all_inj(u)}) {
      const CompletenessResult r = check_complete(p);
      EXPECT_EQ(r.verdict, Verdict::pass);
      EXPECT_EQ(r.witnesses.size(), 2 * u->size());
      for (const auto& w : r.witnesses) {
        const auto& c = w.conflation;
        ASSERT_TRUE(cotlab::homalg::is_conflation(c));
        if (w.direction == Direction::precover) {
          EXPECT_TRUE(oracle::isomorphic(c.right, u->indec(w.target)));
          EXPECT_TRUE(oracle_left_of(c.mid, p.y));
          EXPECT_TRUE(oracle_right_of(c.left, p.x));
        } else {
          EXPECT_TRUE(oracle::isomorphic(c.left, u->indec(w.target)));
          EXPECT_TRUE(oracle_right_of(c.mid, p.x));
          EXPECT_TRUE(oracle_left_of(c.right, p.y));
        }
      }
    }
  }
}

TEST(Hereditary, FixturePairs) {
  for (const auto& u : {dual(), a2(), cube()}) {
    EXPECT_EQ(check_hereditary(proj_all(u)).verdict, Verdict::pass);
    EXPECT_EQ(check_hereditary(all_inj(u)).verdict, Verdict::pass);
  }
}

// Over a global dimension two algebra some cotorsion pairs with vanishing
// Ext^1 are not hereditary; the verdict must follow higher Ext.
TEST(Hereditary, AgreesWithHigherExtOracle) {
  const auto u = enumerate(a3_zero_relation(), 3);
  const std::size_t n = u->size();
  std::size_t pairs = 0, non_hereditary = 0;
  for (std::size_t mx = 0; mx < (1u << n); ++mx) {
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (mx >> i) & 1u;
    const ObjectClass x(u, bits);
    const ObjectClass y = cotlab::universe::orthogonal(x, cotlab::universe::Perp::right);
    if (!oracle_is_pair(x, y)) continue;
    ++pairs;
    CotorsionPair p = make_pair(x, y);
    p.flags.is_pair = true;
    bool vanish = true;
    for (std::size_t i : x.indices()) {
      for (std::size_t j : y.indices()) {
        for (std::size_t d = 2; d <= 3; ++d) vanish = vanish && ext_oracle(u->indec(i), u->indec(j), d) == 0;
      }
    }
    const HereditaryResult r = check_hereditary(p);
    EXPECT_EQ(r.ext_vanishing, vanish) << x.to_string();
    if (!vanish) {
      ++non_hereditary;
      EXPECT_EQ(r.verdict, Verdict::fail);
      EXPECT_FALSE(r.witnesses.empty());
    }
  }
  EXPECT_GT(pairs, 2u);
  EXPECT_GT(non_hereditary, 0u);
}

TEST(RelDim, MemberHasDimensionZero) {
  const auto u = a2();
  const CotorsionPair p = proj_all(u);
  for (std::size_t i : p.x.indices()) EXPECT_EQ(rel_dim(p, u->indec(i), Side::left), Dim::finite(0));
}

TEST(RelDim, SourceSimpleOverA2) {
  const auto u = a2();
  EXPECT_EQ(rel_dim(proj_all(u), u->indec(member(u, "S(1)")), Side::left), Dim::finite(1));
}

TEST(RelDim, SimpleOverDualNumbersIsInfinite) {
  const auto u = dual();
  const Dim d = rel_dim(proj_all(u), u->indec(member(u, "S(1)")), Side::left);
  EXPECT_TRUE(d.is_infinite());
}

TEST(RelDim, RequiresCertifiedPair) {
  const auto u = a2();
  EXPECT_THROW(rel_dim(make_pair(ObjectClass::projectives(u), ObjectClass::all(u)), u->indec(0), Side::left),
               cotlab::PreconditionError);
}

TEST(RelDim, MatchesHigherExtOracle) {
  for (const auto& u : {a2(), enumerate(a3_zero_relation(), 3), enumerate(oracle::a3(), 3)}) {
    for (auto [p, side] : {std::pair{proj_all(u), Side::left}, std::pair{all_inj(u), Side::right}}) {
      for (std::size_t m = 0; m < u->size(); ++m) {
        // Least n <= 4 with Ext^{n+1} vanishing against the opposite class.
        std::optional<std::size_t> want;
        for (std::size_t n = 0; n <= 4 && !want; ++n) {
          bool zero = true;
          const ObjectClass& other = side == Side::left ? p.y : p.x;
          for (std::size_t j : other.indices()) {
            zero = zero && (side == Side::left ? ext_oracle(u->indec(m), u->indec(j), n + 1)
                                               : ext_oracle(u->indec(j), u->indec(m), n + 1)) == 0;
          }
          if (zero) want = n;
        }
        ASSERT_TRUE(want.has_value());
        EXPECT_EQ(rel_dim(p, u->indec(m), side), Dim::finite(*want)) << u->label(m);
      }
    }
  }
}

TEST(LiftClass, LevelZeroIsTheClass) {
  for (const auto& u : {dual(), a2()}) {
    EXPECT_EQ(lift_class(proj_all(u), 0, Side::left), ObjectClass::projectives(u));
    EXPECT_EQ(lift_class(all_inj(u), 0, Side::right), ObjectClass::injectives(u));
  }
}

TEST(LiftClass, GlobalDimensionOneFillsTheUniverse) {
  const auto u = a2();
  EXPECT_EQ(lift_class(proj_all(u), 1, Side::left), ObjectClass::all(u));
  EXPECT_EQ(lift_class(all_inj(u), 1, Side::right), ObjectClass::all(u));
}

TEST(LiftClass, SelfInjectiveStaysProjective) {
  const auto u = dual();
  for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(lift_class(proj_all(u), n, Side::left), ObjectClass::projectives(u));
}

TEST(Extendable, FixturePairs) {
  for (const auto& u : {dual(), a2(), cube()}) {
    const auto l = check_extendable(proj_all(u), 3, Side::left);
    EXPECT_EQ(l.verdict, Verdict::pass);
    EXPECT_EQ(l.rows.size(), 4u);
    const auto r = check_extendable(all_inj(u), 3, Side::right);
    EXPECT_EQ(r.verdict, Verdict::pass);
  }
}

TEST(Extendable, LevelZeroOnlyRestatesTheBase) {
  const auto u = a2();
  const auto r = check_extendable(proj_all(u), 0, Side::left);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].x, ObjectClass::projectives(u));
  EXPECT_EQ(r.verdict, Verdict::pass);
  const CotorsionPair p = with_extendability(proj_all(u), r, Side::left);
  EXPECT_EQ(p.flags.left_extendable_upto, 0u);
}

TEST(Coherence, FixturePairsAgreeAndEmitSequences) {
  for (const auto& u : {dual(), a2(), cube()}) {
    for (auto [p, side] : {std::pair{proj_all(u), Side::left}, std::pair{all_inj(u), Side::right}}) {
      for (std::size_t m = 0; m < u->size(); ++m) {
        const CoherenceResult r = check_dimension_coherence(p, u->indec(m), side, 3);
        EXPECT_EQ(r.verdict, Verdict::pass) << u->label(m);
        for (const CoherenceRow& row : r.rows) EXPECT_TRUE(row.agree());
        if (r.dim.is_finite() && r.dim.value <= 3) {
          EXPECT_TRUE(r.sequence.has_value());
        }
      }
    }
  }
}

// Reference evaluation of the three inequalities with their equality
// clauses, on dimensions where infinity is encoded as a large value.
constexpr std::size_t kInf = 1000;

std::size_t value(const Dim& d) { return d.is_infinite() ? kInf : d.value; }

bool inequalities_hold(std::size_t a, std::size_t b, std::size_t c) {
  auto minus1 = [](std::size_t v) { return v == 0 ? 0 : (v >= kInf ? kInf : v - 1); };
  auto plus1 = [](std::size_t v) { return v >= kInf ? kInf : v + 1; };
  bool ok = a <= std::max(b, minus1(c));
  if (b != c) ok = ok && a == std::max(b, minus1(c));
  ok = ok && b <= std::max(a, c);
  if (c != plus1(a)) ok = ok && b == std::max(a, c);
  ok = ok && c <= std::max(b, plus1(a));
  if (b != a) ok = ok && c == std::max(b, plus1(a));
  return ok;
}

TEST(Inequalities, SimpleExtensionOverA2) {
  const auto u = a2();
  const CotorsionPair p = proj_all(u);
  const auto confs = cotlab::homalg::generate_conflations(u->resolver(), u->indecs(), 200, 1);
  bool seen = false;
  for (const auto& c : confs) {
    if (!oracle::isomorphic(c.mid, u->indec(member(u, "P(1)"))) || c.left.total_dim() != 1) continue;
    seen = true;
    const InequalityResult r = check_dimension_inequalities(c, p, Side::left);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_EQ(r.a, Dim::finite(0));
    EXPECT_EQ(r.b, Dim::finite(0));
    EXPECT_EQ(r.c, Dim::finite(1));
  }
  EXPECT_TRUE(seen);
}

TEST(InequalitiesProperty, AgreeWithReferenceEvaluation) {
  for (const auto& u : {dual(), a2(), cube(), enumerate(a3_zero_relation(), 3)}) {
    for (auto [p, side] : {std::pair{proj_all(u), Side::left}, std::pair{all_inj(u), Side::right}}) {
      const auto confs = cotlab::homalg::generate_conflations(u->resolver(), u->indecs(), 200, 17);
      for (const auto& c : confs) {
        const InequalityResult r = check_dimension_inequalities(c, p, side);
        ASSERT_TRUE(r.a.decided() && r.b.decided() && r.c.decided());
        EXPECT_EQ(r.a, rel_dim(p, c.left, side));
        EXPECT_EQ(r.b, rel_dim(p, c.mid, side));
        EXPECT_EQ(r.c, rel_dim(p, c.right, side));
        const bool want = side == Side::left ? inequalities_hold(value(r.a), value(r.b), value(r.c))
                                             : inequalities_hold(value(r.c), value(r.b), value(r.a));
        EXPECT_EQ(r.verdict == Verdict::pass, want);
        EXPECT_TRUE(want);
      }
    }
  }
}

TEST(Certify, RecordsFlags) {
  const auto u = a2();
  const CotorsionPair p = proj_all(u);
  EXPECT_EQ(p.flags.is_pair, true);
  EXPECT_EQ(p.flags.complete, Verdict::pass);
  EXPECT_EQ(p.flags.hereditary, true);
  EXPECT_TRUE(p.certified());
  const CotorsionPair bad = certify(make_pair(ObjectClass::all(u), ObjectClass::all(u)));
  EXPECT_EQ(bad.flags.is_pair, false);
  EXPECT_FALSE(bad.certified());
}

TEST(Witness, JsonCarriesKind) {
  const auto u = dual();
  const Module& s = u->indec(member(u, "S(1)"));
  const auto j = to_json(ext_witness(s, s, 1, 1));
  EXPECT_EQ(j.at("kind"), "ext");
  EXPECT_EQ(j.at("degree"), 1);
  EXPECT_EQ(j.at("dim"), 1);
}

}  // namespace
