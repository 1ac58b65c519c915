#include <gtest/gtest.h>

#include <random>

#include "cotlab/error.hpp"
#include "cotlab/homalg.hpp"
#include "support/oracle.hpp"

using namespace cotlab::homalg;
using cotlab::bqa::Mat;
using cotlab::bqa::PrimeField;

namespace {

const PrimeField F2(2);

Module regular_dual() { return Module(oracle::dual_numbers(), {2}, {Mat::from_rows(F2, {{0, 0}, {1, 0}})}); }
Module simple_dual() { return Module::simple(oracle::dual_numbers(), 0); }
Module s1() { return Module::simple(oracle::a2(), 0); }
Module s2() { return Module::simple(oracle::a2(), 1); }
Module p1() { return Module(oracle::a2(), {1, 1}, {Mat::from_rows(F2, {{1}})}); }

bool iso(const Module& a, const Module& b) { return oracle::isomorphic(a, b); }

TEST(Projectives, ZeroModuleHasZeroCover) {
  const Approximation c = projective_cover(Module::zero(oracle::a2()));
  EXPECT_EQ(c.object.total_dim(), 0u);
}

TEST(Projectives, CoverOfSimpleOverDualNumbers) {
  const Approximation c = projective_cover(simple_dual());
  EXPECT_TRUE(iso(c.object, regular_dual()));
  EXPECT_TRUE(cotlab::bqa::is_surjective(c.map));
  const auto [k, incl] = cotlab::bqa::kernel(c.object, simple_dual(), c.map);
  EXPECT_TRUE(iso(k, simple_dual()));
}

TEST(Injectives, EnvelopeOfSimpleOverDualNumbersIsTheSocle) {
  const Approximation e = injective_envelope(simple_dual());
  EXPECT_TRUE(iso(e.object, regular_dual()));
  EXPECT_TRUE(cotlab::bqa::is_injective(e.map));
}

TEST(Projectives, CoverOfSourceSimpleOverA2) {
  const Approximation c = projective_cover(s1());
  EXPECT_EQ(c.object.dims(), (std::vector<std::size_t>{1, 1}));
  const auto [k, incl] = cotlab::bqa::kernel(c.object, s1(), c.map);
  EXPECT_TRUE(iso(k, s2()));
}

TEST(Projectives, IndecomposableProjectivesAndInjectives) {
  EXPECT_TRUE(iso(indecomposable_projective(oracle::a2(), 0), p1()));
  EXPECT_TRUE(iso(indecomposable_projective(oracle::a2(), 1), s2()));
  EXPECT_TRUE(iso(indecomposable_injective(oracle::a2(), 0), s1()));
  EXPECT_TRUE(iso(indecomposable_injective(oracle::a2(), 1), p1()));
  EXPECT_TRUE(is_projective(p1()));
  EXPECT_FALSE(is_projective(s1()));
  EXPECT_TRUE(is_injective(s1()));
  EXPECT_FALSE(is_injective(s2()));
}

TEST(Syzygy, ProjectiveHasZeroSyzygy) {
  EXPECT_EQ(syzygy(p1(), 1).total_dim(), 0u);
  EXPECT_EQ(syzygy(regular_dual(), 1).total_dim(), 0u);
}

TEST(Syzygy, SimpleOverDualNumbersIsPeriodic) {
  EXPECT_TRUE(iso(syzygy(simple_dual(), 1), simple_dual()));
  EXPECT_TRUE(iso(syzygy(simple_dual(), 4), simple_dual()));
  EXPECT_TRUE(iso(cosyzygy(simple_dual(), 2), simple_dual()));
}

TEST(Syzygy, SourceSimpleOverA2) {
  EXPECT_TRUE(iso(syzygy(s1(), 1), s2()));
  EXPECT_EQ(syzygy(s1(), 2).total_dim(), 0u);
}

TEST(Ext, ProjectiveFirstArgumentVanishes) {
  for (std::size_t d = 1; d <= 3; ++d) {
    EXPECT_EQ(ext_dim(p1(), s1(), d), 0u);
    EXPECT_EQ(ext_dim(regular_dual(), simple_dual(), d), 0u);
  }
}

TEST(Ext, KnownValues) {
  EXPECT_EQ(ext_dim(simple_dual(), simple_dual(), 1), 1u);
  EXPECT_EQ(ext_dim(simple_dual(), simple_dual(), 3), 1u);
  EXPECT_EQ(ext_dim(s1(), s2(), 1), 1u);
  EXPECT_EQ(ext_dim(s1(), s2(), 2), 0u);
  EXPECT_EQ(ext_dim(s2(), s1(), 1), 0u);
}

TEST(Dimensions, ProjectiveAndInjectiveDimension) {
  Resolver r(oracle::a2());
  EXPECT_EQ(r.projective_dimension(s1()), Dim::finite(1));
  EXPECT_EQ(r.projective_dimension(s2()), Dim::finite(0));
  EXPECT_EQ(r.injective_dimension(s2()), Dim::finite(1));
  Resolver d(oracle::dual_numbers());
  EXPECT_TRUE(d.projective_dimension(simple_dual()).is_infinite());
  EXPECT_EQ(d.projective_dimension(regular_dual()), Dim::finite(0));
}

TEST(Pushout, AlongIdentity) {
  const Module s = simple_dual(), a = regular_dual();
  const Approximation e = injective_envelope(s);
  const Pushout po = pushout(s, e.object, s, e.map, cotlab::bqa::identity_map(s));
  EXPECT_TRUE(iso(po.object, e.object));
}

TEST(Pushout, FromZeroIsDirectSum) {
  const Module z = Module::zero(oracle::a2());
  const Pushout po = pushout(z, p1(), s1(), cotlab::bqa::zero_map(z, p1()), cotlab::bqa::zero_map(z, s1()));
  EXPECT_EQ(po.object.dims(), (std::vector<std::size_t>{2, 1}));
  const auto parts = decompose(po.object);
  EXPECT_EQ(parts.size(), 2u);
}

TEST(Pushout, SocleAlongSocleOverDualNumbers) {
  const Module s = simple_dual();
  const Approximation e = injective_envelope(s);
  const Pushout po = pushout(s, e.object, e.object, e.map, e.map);
  EXPECT_EQ(po.object.total_dim(), 3u);
  const auto parts = decompose(po.object);
  ASSERT_EQ(parts.size(), 2u);
  std::size_t dims = 0;
  for (const Summand& p : parts) {
    dims += p.module.total_dim() * p.multiplicity;
    EXPECT_TRUE(iso(p.module, s) || iso(p.module, regular_dual()));
  }
  EXPECT_EQ(dims, 3u);
}

TEST(Pushout, RequiresInjectiveLeg) {
  const Module a = regular_dual();
  EXPECT_THROW(pushout(a, simple_dual(), a, projective_cover(simple_dual()).map, cotlab::bqa::identity_map(a)),
               cotlab::Error);
}

TEST(Decompose, ZeroIsEmpty) { EXPECT_TRUE(decompose(Module::zero(oracle::a2())).empty()); }

TEST(Decompose, SquareOfSimple) {
  const auto parts = decompose(cotlab::bqa::direct_sum(simple_dual(), simple_dual()));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].multiplicity, 2u);
  EXPECT_TRUE(iso(parts[0].module, simple_dual()));
}

TEST(Decompose, RegularModuleIsIndecomposable) {
  const auto parts = decompose(regular_dual());
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].multiplicity, 1u);
  EXPECT_TRUE(is_indecomposable(regular_dual()));
}

// Property tests over random modules.

struct Case {
  AlgebraPtr alg;
  std::vector<std::size_t> dims;
};

std::vector<Case> cases() {
  return {{oracle::dual_numbers(), {1}}, {oracle::dual_numbers(), {2}}, {oracle::dual_numbers(), {3}},
          {oracle::truncated_cube(), {1}}, {oracle::truncated_cube(), {2}}, {oracle::truncated_cube(), {3}},
          {oracle::a2(), {1, 0}},        {oracle::a2(), {1, 1}},        {oracle::a2(), {2, 1}},
          {oracle::a3(), {1, 1, 0}},     {oracle::a3(), {1, 1, 1}},     {oracle::a3(), {0, 1, 1}}};
}

TEST(ExtProperty, FirstExtMatchesExtensionCount) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, cases().size() - 1);
  const auto cs = cases();
  int checked = 0;
  for (int trial = 0; trial < 160; ++trial) {
    const Case& a = cs[pick(rng)];
    const Case& b = cs[pick(rng)];
    if (a.alg != b.alg) continue;
    const auto m = oracle::random_module(a.alg, a.dims, rng);
    const auto n = oracle::random_module(b.alg, b.dims, rng);
    if (!m || !n) continue;
    ++checked;
    EXPECT_EQ(ext_dim(*m, *n, 1), oracle::ext1(*m, *n));
  }
  EXPECT_GT(checked, 25);
}

TEST(ExtProperty, DimensionShiftAgainstExtensionCount) {
  std::mt19937 rng(43);
  for (const Case& a : cases()) {
    for (const Case& b : cases()) {
      if (a.alg != b.alg) continue;
      const auto m = oracle::random_module(a.alg, a.dims, rng);
      const auto n = oracle::random_module(b.alg, b.dims, rng);
      if (!m || !n) continue;
      for (std::size_t k = 1; k <= 2; ++k) {
        const Module om = syzygy(*m, k);
        if (om.total_dim() > 3) continue;
        EXPECT_EQ(ext_dim(*m, *n, k + 1), oracle::ext1(om, *n));
      }
    }
  }
}

TEST(ExtProperty, ProjectiveAndInjectiveRoutesAgree) {
  std::mt19937 rng(44);
  for (const Case& a : cases()) {
    for (const Case& b : cases()) {
      if (a.alg != b.alg) continue;
      const auto m = oracle::random_module(a.alg, a.dims, rng);
      const auto n = oracle::random_module(b.alg, b.dims, rng);
      if (!m || !n) continue;
      for (std::size_t d = 1; d <= 3; ++d) EXPECT_EQ(ext_dim(*m, *n, d), ext_dim_injective(*m, *n, d));
    }
  }
}

TEST(ResolutionProperty, MinimalResolutionsAreValid) {
  std::mt19937 rng(45);
  for (const Case& c : cases()) {
    const auto m = oracle::random_module(c.alg, c.dims, rng);
    if (!m) continue;
    Resolver r(c.alg);
    EXPECT_TRUE(is_valid_resolution(projective_resolution(r, *m, 4)));
    EXPECT_TRUE(is_valid_resolution(injective_coresolution(r, *m, 4)));
  }
}

TEST(DecomposeProperty, SummandsAreIndecomposableAndAddUp) {
  std::mt19937 rng(46);
  for (const Case& c : cases()) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto m = oracle::random_module(c.alg, c.dims, rng);
      if (!m) continue;
      const auto pieces = decompose_with_maps(*m);
      std::vector<std::size_t> dims(c.dims.size(), 0);
      for (const Piece& p : pieces) {
        EXPECT_TRUE(oracle::indecomposable(p.module));
        for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += p.module.dim(v);
        EXPECT_TRUE(cotlab::bqa::is_module_map(p.module, *m, p.inclusion));
        EXPECT_TRUE(cotlab::bqa::is_module_map(*m, p.module, p.projection));
        EXPECT_TRUE(cotlab::bqa::compose(p.projection, p.inclusion) == cotlab::bqa::identity_map(p.module));
      }
      EXPECT_EQ(dims, c.dims);
      EXPECT_EQ(is_indecomposable(*m), oracle::indecomposable(*m));
    }
  }
}

TEST(ConflationProperty, GeneratedConflationsAreExact) {
  for (const AlgebraPtr& alg : {oracle::dual_numbers(), oracle::a2(), oracle::truncated_cube()}) {
    std::vector<Module> objs = oracle::indecomposables(alg, alg->num_vertices() == 1 ? 3 : 2);
    Resolver r(alg);
    const auto confs = generate_conflations(r, objs, 120, 9);
    EXPECT_FALSE(confs.empty());
    for (const Conflation& c : confs) {
      ASSERT_TRUE(is_conflation(c));
      for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
        EXPECT_EQ(oracle::rank(c.incl.blocks[v]), c.left.dim(v));
        EXPECT_EQ(oracle::rank(c.proj.blocks[v]), c.right.dim(v));
        EXPECT_TRUE(oracle::mul(c.proj.blocks[v], c.incl.blocks[v]).is_zero());
        EXPECT_EQ(c.mid.dim(v), c.left.dim(v) + c.right.dim(v));
      }
    }
  }
}

TEST(ConflationProperty, GenerationIsDeterministic) {
  const auto alg = oracle::dual_numbers();
  const auto objs = oracle::indecomposables(alg, 2);
  Resolver r1(alg), r2(alg);
  const auto a = generate_conflations(r1, objs, 50, 3);
  const auto b = generate_conflations(r2, objs, 50, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mid, b[i].mid);
    EXPECT_TRUE(a[i].incl == b[i].incl);
  }
}

}  // namespace
