#pragma once

// Cotorsion pairs over a finite universe: orthogonality, completeness with
// approximation witnesses, heredity, relative dimensions, dimension-lifted
// classes and extendability.
//
// Positive verdicts hold relative to the universe; failures carry a
// counterexample that is valid outright.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cotlab/homalg.hpp"
#include "cotlab/universe.hpp"

namespace cotlab::cotorsion {

using bqa::Json;
using bqa::Module;
using bqa::ModuleMap;
using homalg::Conflation;
using homalg::Dim;
using universe::ObjectClass;
using universe::UniversePtr;

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);
// fail dominates inconclusive, which dominates pass.
Verdict combine(Verdict a, Verdict b);
inline Verdict verdict_of(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

// A self-contained, re-checkable piece of evidence. `data` holds explicit
// modules and matrices; the kinds and their fields are documented in
// witness.hpp of the command-line tool.
struct Witness {
  std::string kind;
  Json data;
};

// A membership claim that can be re-checked from Ext dimensions alone:
// Ext^degree(term, Z) (direction "from") or Ext^degree(Z, term) ("into")
// vanishes for every Z in `against` when expect_zero is set, and is nonzero
// for some Z otherwise.
struct ExtClaim {
  std::string term;
  std::string direction;
  std::size_t degree = 1;
  std::vector<Module> against;
  bool expect_zero = true;
};

// {"kind": ..., fields of data...}.
Json to_json(const Witness& w);
Json to_json(const std::vector<Witness>& ws);

Witness ext_witness(const Module& m, const Module& n, std::size_t degree, std::size_t dim);
Witness conflation_witness(const Conflation& c, const std::vector<ExtClaim>& claims);

struct Flags {
  std::optional<bool> is_pair;
  std::optional<Verdict> complete;
  std::optional<bool> hereditary;
  std::optional<std::size_t> left_extendable_upto;
  std::optional<std::size_t> right_extendable_upto;
  // Report metadata only; never checked.
  bool generated_by_set = false;
};

struct CotorsionPair {
  ObjectClass x;
  ObjectClass y;
  Flags flags;

  const UniversePtr& universe() const { return x.universe(); }
  // Membership of an arbitrary module through the Ext criterion against the
  // opposite class: m in x iff Ext^1(m, Y) = 0 for all members Y. Agrees
  // with class membership on universe members whenever is_pair holds.
  bool in_x(const Module& m) const;
  bool in_y(const Module& m) const;
  // Usable as a complete hereditary pair (required by rel_dim and friends).
  bool certified() const;
};

CotorsionPair make_pair(const ObjectClass& x, const ObjectClass& y);

struct CheckResult {
  Verdict verdict = Verdict::pass;
  std::string message;
  std::vector<Witness> witnesses;
  Json to_json() const;
};

// x^perp = y and ^perp y = x over the universe.
CheckResult check_pair(const CotorsionPair& p);

enum class Direction { precover, preenvelope };

struct ApproximationWitness {
  std::size_t target = 0;
  Direction direction = Direction::precover;
  // identity, projective-cover, injective-envelope, universal, constructive
  // or search.
  std::string method;
  // precover: Y >-> X ->> M; preenvelope: M >-> Y' ->> X'.
  Conflation conflation;
};

struct CompletenessResult {
  Verdict verdict = Verdict::pass;
  std::vector<ApproximationWitness> witnesses;
  std::vector<std::size_t> missing_precover;
  std::vector<std::size_t> missing_preenvelope;
  Json to_json(const CotorsionPair& p) const;
};

// Special precover Y >-> X ->> m with X in x, Y in y, and special
// preenvelope m >-> Y' ->> X'. Candidates in order: identity, minimal
// projective cover / injective envelope, universal add-approximation, the
// pushout (pullback) construction through the opposite approximation of the
// syzygy (cosyzygy), and a bounded search over mid-terms that are sums of
// at most four class members of total dimension <= budget (0 means the
// larger of 3 * dim m and dim m plus the largest member). Membership is
// tested with the Ext criterion; requires is_pair.
std::optional<ApproximationWitness> special_precover(const CotorsionPair& p, const Module& m,
                                                     std::size_t budget = 0);
std::optional<ApproximationWitness> special_preenvelope(const CotorsionPair& p, const Module& m,
                                                        std::size_t budget = 0);

// Bounded search over mid-terms G that are sums of at most four members of
// `pool` with total dimension <= budget (0 as above): deflations
// K >-> G ->> m (resp. inflations m >-> G ->> C) accepted by `accept`.
// Hom spaces are enumerated when small and sampled otherwise.
std::optional<Conflation> search_deflation(const UniversePtr& u, const std::vector<std::size_t>& pool,
                                           const Module& m, std::size_t budget,
                                           const std::function<bool(const Conflation&)>& accept);
std::optional<Conflation> search_inflation(const UniversePtr& u, const std::vector<std::size_t>& pool,
                                           const Module& m, std::size_t budget,
                                           const std::function<bool(const Conflation&)>& accept);

// Throws PreconditionError unless p.is_pair holds.
CompletenessResult check_complete(const CotorsionPair& p, std::size_t budget = 0);

struct HereditaryResult {
  Verdict verdict = Verdict::pass;
  bool ext_vanishing = true;
  bool closure = true;
  std::size_t conflations_checked = 0;
  std::vector<Witness> witnesses;
  std::string message;
  Json to_json() const;
};

// Ext^d(X, Y) = 0 for members and d = 1, 2, 3; and x closed under kernels
// of deflations, y under cokernels of inflations, over generated
// conflations. Throws PreconditionError unless p.is_pair holds.
HereditaryResult check_hereditary(const CotorsionPair& p, std::size_t conflation_count = 120,
                                  unsigned seed = 7);

// Runs the three checks and records their outcome in the flags.
CotorsionPair certify(CotorsionPair p, std::size_t budget = 0);

enum class Side { left, right };

// Relative projective (left) or injective (right) dimension: the least
// n <= cap with Ext^{n+1}(m, Y) = 0 for all Y in y (dually Ext^{n+1}(X, m)
// = 0 for X in x). Infinite only with a certificate: two isomorphic terms
// of a special x-resolution (y-coresolution) none of which lies in the
// class. Throws PreconditionError unless p is certified.
Dim rel_dim(const CotorsionPair& p, const Module& m, Side side, std::size_t cap = homalg::kSyzygyCap);

// Members with rel_dim <= n: X_n (left) or Y_n (right).
ObjectClass lift_class(const CotorsionPair& p, std::size_t n, Side side);

// The pair (X_n, X_n^perp) (left) or (^perp Y_n, Y_n) (right), unchecked.
CotorsionPair lifted_pair(const CotorsionPair& p, std::size_t n, Side side);

// The equivalent characterisations of rel_dim <= k, for k = 0..max_n:
// witness_sequence is an explicit acyclic sequence X_k >-> ... ->> m built
// from special approximations (the first condition), syzygy_in_class tests
// the k-th syzygy of the minimal projective (injective) resolution, and
// ext_vanishing tests Ext^{k+i} for i = 1..3.
struct CoherenceRow {
  std::size_t k = 0;
  bool dim_at_most = false;
  std::optional<bool> witness_sequence;
  std::optional<bool> syzygy_in_class;
  bool ext_vanishing = false;
  bool agree() const;
};

struct CoherenceResult {
  Verdict verdict = Verdict::pass;
  Dim dim;
  std::vector<CoherenceRow> rows;
  std::optional<Witness> sequence;
  Json to_json() const;
};

CoherenceResult check_dimension_coherence(const CotorsionPair& p, const Module& m, Side side,
                                          std::size_t max_n = 3);

// The three inequalities between relative dimensions of the terms of a
// conflation A >-> B ->> C, together with their conditional equalities.
// Left side (projective dimensions):
//   pd A <= max(pd B, pd C - 1), equal if pd B != pd C (pd C - 1 read as 0
//   when pd C = 0);
//   pd B <= max(pd A, pd C), equal if pd C != pd A + 1;
//   pd C <= max(pd B, pd A + 1), equal if pd B != pd A.
// Right side is the dual statement with A and C exchanged.
struct InequalityResult {
  Verdict verdict = Verdict::pass;
  Dim a, b, c;
  std::vector<std::string> violations;
  Json to_json() const;
};

InequalityResult check_dimension_inequalities(const Conflation& c, const CotorsionPair& p,
                                              Side side = Side::left);

struct ExtendabilityRow {
  std::size_t n = 0;
  Verdict pair = Verdict::pass;
  Verdict complete = Verdict::pass;
  Verdict hereditary = Verdict::pass;
  ObjectClass x;
  ObjectClass y;
  Verdict verdict() const;
};

struct ExtendabilityResult {
  Verdict verdict = Verdict::pass;
  std::vector<ExtendabilityRow> rows;
  std::vector<Witness> witnesses;
  Json to_json() const;
};

// For n = 0..n_max checks that the lifted pair is a complete cotorsion pair
// and that it is hereditary again. Certifies extendability only up to
// n_max. Throws PreconditionError unless p is certified.
ExtendabilityResult check_extendable(const CotorsionPair& p, std::size_t n_max, Side side,
                                     std::size_t budget = 0);

// Records a successful extendability check in the pair's flags.
CotorsionPair with_extendability(CotorsionPair p, const ExtendabilityResult& r, Side side);

}  // namespace cotlab::cotorsion
