#include <gtest/gtest.h>

#include <filesystem>

#include "cotlab/error.hpp"
#include "cotlab/homalg.hpp"
#include "cotlab/universe.hpp"
#include "support/oracle.hpp"

using namespace cotlab::universe;

namespace {

EnumerateOptions no_cache() {
  EnumerateOptions o;
  o.cache_dir = "";
  return o;
}

UniversePtr dual() { return Universe::enumerate(oracle::dual_numbers(), 2, no_cache()); }
UniversePtr a2() { return Universe::enumerate(oracle::a2(), 2, no_cache()); }

// Every oracle indecomposable has exactly one isomorphic universe member,
// and the counts agree.
void expect_matches_oracle(const UniversePtr& u, std::size_t cap) {
  const auto want = oracle::indecomposables(u->algebra(), cap);
  ASSERT_EQ(u->size(), want.size());
  for (const Module& m : want) {
    std::size_t hits = 0;
    for (const Module& g : u->indecs()) hits += oracle::isomorphic(g, m);
    EXPECT_EQ(hits, 1u);
  }
}

TEST(Enumerate, DualNumbers) {
  const auto u = dual();
  EXPECT_EQ(u->size(), 2u);
  expect_matches_oracle(u, 2);
}

TEST(Enumerate, A2) {
  const auto u = a2();
  EXPECT_EQ(u->size(), 3u);
  expect_matches_oracle(u, 2);
}

TEST(Enumerate, TruncatedCube) {
  const auto u = Universe::enumerate(oracle::truncated_cube(), 3, no_cache());
  EXPECT_EQ(u->size(), 3u);
  expect_matches_oracle(u, 3);
}

TEST(Enumerate, A3) {
  const auto u = Universe::enumerate(oracle::a3(), 3, no_cache());
  EXPECT_EQ(u->size(), 6u);
  expect_matches_oracle(u, 3);
}

TEST(Enumerate, A2OverF3) {
  const auto u = Universe::enumerate(oracle::a2_over(3), 3, no_cache());
  EXPECT_EQ(u->size(), 3u);
  expect_matches_oracle(u, 3);
}

TEST(Enumerate, CapBelowProjectivesIsRejected) {
  EXPECT_THROW(Universe::enumerate(oracle::dual_numbers(), 1, no_cache()), cotlab::PreconditionError);
  EXPECT_THROW(Universe::enumerate(oracle::a3(), 2, no_cache()), cotlab::PreconditionError);
}

TEST(Enumerate, CandidateCapIsEnforced) {
  EnumerateOptions o = no_cache();
  o.candidate_cap = 10;
  EXPECT_THROW(Universe::enumerate(oracle::truncated_cube(), 3, o), cotlab::CapExceeded);
}

TEST(Enumerate, ThreadCountDoesNotChangeTheResult) {
  EnumerateOptions one = no_cache(), many = no_cache();
  one.threads = 1;
  many.threads = 4;
  const auto a = Universe::enumerate(oracle::a3(), 3, one);
  const auto b = Universe::enumerate(oracle::a3(), 3, many);
  EXPECT_EQ(a->fingerprint(), b->fingerprint());
  EXPECT_EQ(a->to_json(), b->to_json());
}

TEST(Enumerate, ProjectivesAndInjectivesAreFlagged) {
  const auto u = a2();
  EXPECT_EQ(u->projective_indices().size(), 2u);
  EXPECT_EQ(u->injective_indices().size(), 2u);
  for (std::size_t i : u->projective_indices()) EXPECT_TRUE(cotlab::homalg::is_projective(u->indec(i)));
  for (std::size_t i : u->injective_indices()) EXPECT_TRUE(cotlab::homalg::is_injective(u->indec(i)));
}

TEST(Serialize, RoundTripKeepsFingerprint) {
  for (const auto& u : {dual(), a2()}) {
    const auto back = Universe::from_json(u->algebra(), u->to_json());
    EXPECT_EQ(back->size(), u->size());
    EXPECT_EQ(back->fingerprint(), u->fingerprint());
    EXPECT_EQ(back->provenance(), Provenance::declared);
  }
}

TEST(Serialize, DeclaredUniverseIsCompletedWithProjectives) {
  const auto alg = oracle::a2();
  const auto u = Universe::declare(alg, {Module::simple(alg, 0)});
  EXPECT_EQ(u->size(), 3u);
  EXPECT_THROW(Universe::from_json(alg, cotlab::bqa::Json::parse(R"({"indecomposables":[{"dims":[1]}]})")),
               cotlab::Error);
}

TEST(Cache, SecondRunReadsTheSameUniverse) {
  const auto dir = std::filesystem::temp_directory_path() / "cotlab-universe-test-cache";
  std::filesystem::remove_all(dir);
  EnumerateOptions o;
  o.cache_dir = dir.string();
  const auto a = Universe::enumerate(oracle::a3(), 3, o);
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  const auto b = Universe::enumerate(oracle::a3(), 3, o);
  EXPECT_EQ(a->fingerprint(), b->fingerprint());
  EXPECT_EQ(b->provenance(), Provenance::enumerated);
  std::filesystem::remove_all(dir);
}

TEST(Ids, CanonicalIdsResolve) {
  const auto u = a2();
  for (std::size_t i = 0; i < u->size(); ++i) EXPECT_EQ(u->index_of_id(u->id(i)), i);
  EXPECT_FALSE(u->index_of_id("m99").has_value());
  EXPECT_FALSE(u->index_of_id("x").has_value());
}

TEST(Tables, ExtAndHomMatchOracle) {
  for (const auto& u : {dual(), a2()}) {
    for (std::size_t i = 0; i < u->size(); ++i) {
      for (std::size_t j = 0; j < u->size(); ++j) {
        EXPECT_EQ(u->ext(i, j, 1), oracle::ext1(u->indec(i), u->indec(j)));
        EXPECT_EQ(u->hom(i, j), oracle::hom_dim(u->indec(i), u->indec(j)));
      }
    }
  }
}

TEST(Orthogonal, RightPerpOfEverythingIsInjectives) {
  const auto u = dual();
  EXPECT_EQ(orthogonal(ObjectClass::all(u), Perp::right), ObjectClass::injectives(u));
  const auto v = a2();
  EXPECT_EQ(orthogonal(ObjectClass::all(v), Perp::right), ObjectClass::injectives(v));
  EXPECT_EQ(orthogonal(ObjectClass::all(v), Perp::left), ObjectClass::projectives(v));
}

TEST(Orthogonal, VacuousAndProjectiveCases) {
  for (const auto& u : {dual(), a2()}) {
    EXPECT_EQ(orthogonal(ObjectClass::projectives(u), Perp::right), ObjectClass::all(u));
    EXPECT_EQ(orthogonal(ObjectClass::none(u), Perp::right), ObjectClass::all(u));
    EXPECT_EQ(orthogonal(ObjectClass::none(u), Perp::left), ObjectClass::all(u));
  }
}

TEST(Orthogonal, MatchesExtensionCountOracle) {
  const auto u = Universe::enumerate(oracle::a3(), 3, no_cache());
  for (std::size_t mask = 0; mask < (1u << u->size()); mask += 5) {
    std::vector<bool> bits(u->size());
    for (std::size_t i = 0; i < u->size(); ++i) bits[i] = (mask >> i) & 1u;
    const ObjectClass c(u, bits);
    const ObjectClass right = orthogonal(c, Perp::right);
    const ObjectClass left = orthogonal(c, Perp::left);
    for (std::size_t n = 0; n < u->size(); ++n) {
      bool r = true, l = true;
      for (std::size_t x : c.indices()) {
        r = r && oracle::ext1(u->indec(x), u->indec(n)) == 0;
        l = l && oracle::ext1(u->indec(n), u->indec(x)) == 0;
      }
      EXPECT_EQ(right.contains(n), r);
      EXPECT_EQ(left.contains(n), l);
    }
  }
}

TEST(ObjectClass, MembershipOfSums) {
  const auto u = a2();
  const auto proj = ObjectClass::projectives(u);
  const auto& pi = u->projective_indices();
  const Module sum = cotlab::bqa::direct_sum(u->indec(pi[0]), u->indec(pi[1]));
  EXPECT_EQ(proj.contains_module(sum), Tri::yes);
  const Module s1 = Module::simple(oracle::a2(), 0);
  EXPECT_EQ(proj.contains_module(cotlab::bqa::direct_sum(sum, s1)), Tri::no);
  EXPECT_EQ(ObjectClass::all(u).contains_module(cotlab::bqa::direct_sum(s1, s1)), Tri::yes);
}

TEST(ObjectClass, OutsideTheUniverseIsUnknown) {
  // Over A3 with cap 3 every indecomposable is present, so use a smaller
  // declared universe.
  const auto alg = oracle::truncated_cube();
  const auto u = Universe::declare(alg, {Module::simple(alg, 0)});
  const cotlab::bqa::Module two(alg, {2}, {cotlab::bqa::Mat::from_rows(cotlab::bqa::PrimeField(2), {{0, 0}, {1, 0}})});
  EXPECT_EQ(ObjectClass::all(u).contains_module(two), Tri::unknown);
}

TEST(ObjectClass, SetOperations) {
  const auto u = a2();
  const auto p = ObjectClass::projectives(u), i = ObjectClass::injectives(u);
  EXPECT_EQ((p & i).count(), 1u);
  EXPECT_EQ(p | i, ObjectClass::all(u));
  EXPECT_TRUE((p & i).subset_of(p));
  EXPECT_FALSE(p.subset_of(i));
  EXPECT_THROW(ObjectClass(u, {true}), cotlab::MalformedInput);
}

}  // namespace
