#pragma once

// Hovey triples (C, W, F) over a finite universe: verification, the four
// equivalent descriptions of C_n (and dually F_n), the class identities
// between lifted classes, lifted triples, Frobenius cores and a comparison
// of their stable categories.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotlab/cotorsion.hpp"

namespace cotlab::hovey {

using bqa::Json;
using cotorsion::CheckResult;
using cotorsion::CompletenessResult;
using cotorsion::CotorsionPair;
using cotorsion::HereditaryResult;
using cotorsion::Side;
using cotorsion::Verdict;
using cotorsion::Witness;
using homalg::Conflation;
using universe::ObjectClass;
using universe::Tri;

struct VerifyOptions {
  std::size_t budget = 0;
  std::size_t conflation_count = 150;
  unsigned seed = 11;
};

struct ThicknessResult {
  Verdict verdict = Verdict::pass;
  std::size_t checked = 0;
  // Conflations with a term whose membership could not be decided.
  std::size_t skipped = 0;
  std::vector<Witness> witnesses;
  std::string message;
  Json to_json() const;
};

// Two-out-of-three for w over the given conflations. Closure under
// summands holds by construction, since classes are additive closures.
ThicknessResult check_thickness(const ObjectClass& w, const std::vector<Conflation>& confs);

struct PairReport {
  CheckResult pair;
  std::optional<CompletenessResult> complete;
  std::optional<HereditaryResult> hereditary;
  Verdict verdict() const;
};

struct TripleReport {
  Verdict verdict = Verdict::pass;
  PairReport cw_f;
  PairReport c_wf;
  ThicknessResult thickness;
  Json to_json(const CotorsionPair& cw_f_pair, const CotorsionPair& c_wf_pair) const;
};

struct HoveyTriple {
  ObjectClass c, w, f;
  // (C ∩ W, F) and (C, W ∩ F) with their certification flags.
  CotorsionPair cw_f;
  CotorsionPair c_wf;
  std::optional<TripleReport> report;

  bool verified() const { return report && report->verdict == Verdict::pass; }
  bool hereditary() const {
    return cw_f.flags.hereditary.value_or(false) && c_wf.flags.hereditary.value_or(false);
  }
  // "(C, W, F) = ({..}, {..}, {..})" with universe labels.
  std::string to_string() const;
  Json classes_json() const;
};

// Both pairs checked (pair, completeness, heredity) and w checked thick over
// generated conflations plus all completeness witnesses.
HoveyTriple verify_triple(const ObjectClass& c, const ObjectClass& w, const ObjectClass& f,
                          const VerifyOptions& opts = {});

// Checks extendability of (C ∩ W, F) on the left or of (C, W ∩ F) on the
// right up to n_max and records it in the triple.
HoveyTriple certify_extendable(HoveyTriple t, std::size_t n_max, Side side, std::size_t budget = 0);

// The four conditions for "M lies in C_n" (left) or "M lies in F_n"
// (right). (1) and (3) are always decided; (2) and (4) are decided
// positively by an explicit conflation, negatively only where the condition
// forces a trivial conflation, and are otherwise unknown.
struct ConditionsResult {
  std::size_t n = 0;
  Side side = Side::left;
  Tri cond[4] = {Tri::unknown, Tri::unknown, Tri::unknown, Tri::unknown};
  std::vector<Witness> witnesses;
  std::string note;
  // No two decided conditions disagree.
  bool agree() const;
  Json to_json() const;
};

// Throws PreconditionError unless t is verified and hereditary and the
// required pair is certified extendable up to n.
ConditionsResult check_sstype(const HoveyTriple& t, const bqa::Module& m, std::size_t n, Side side);

struct IdentityResult {
  Verdict verdict = Verdict::pass;
  ObjectClass lhs, rhs;
  std::vector<Witness> witnesses;
  std::string message;
  Json to_json() const;
};

// Set equality over the universe with a class_difference witness for every
// member on which the two sides differ.
IdentityResult compare_classes(ObjectClass lhs, ObjectClass rhs, const std::string& what);

// Left: C_n ∩ W = (C ∩ W)_n. Right: W ∩ F_n = (W ∩ F)_n.
IdentityResult check_cor_identity(const HoveyTriple& t, std::size_t n, Side side);

struct LiftResult {
  Verdict verdict = Verdict::pass;
  HoveyTriple lifted;
  // Left: C_n^perp = W ∩ (C∩W)_n^perp. Right: ^perp F_n = ^perp(W∩F)_n ∩ W.
  IdentityResult orthogonal_identity;
  // Left: kernel of (C_n, C_n^perp) = (C∩W)_n ∩ (C∩W)_n^perp, and the two
  // lifted pairs have equal kernels. Right: the dual statement.
  IdentityResult kernel_identity;
  Json to_json() const;
};

// Left: (C_n, W, (C∩W)_n^perp). Right: (^perp(W∩F)_n, W, F_n).
// Throws PreconditionError unless the required extendability is certified.
LiftResult lift_triple(const HoveyTriple& t, std::size_t n, Side side, const VerifyOptions& opts = {});

struct CoreWitness {
  std::size_t object = 0;
  std::optional<Conflation> inflation;  // X >-> P ->> X'
  std::optional<Conflation> deflation;  // X'' >-> P' ->> X
};

struct FrobeniusCore {
  ObjectClass objects;  // C ∩ F
  ObjectClass projinj;  // C ∩ W ∩ F
  std::vector<std::size_t> stable_classes;
  CotorsionPair cw_f;
  CotorsionPair c_wf;
  std::vector<CoreWitness> witnesses;
  Verdict verdict = Verdict::pass;
  Json to_json() const;
};

// Throws PreconditionError unless t is verified and hereditary.
FrobeniusCore frobenius_core(const HoveyTriple& t);

// dim Hom(x, y) minus the dimension of the maps factoring through a
// projective-injective member of the core.
std::size_t stable_hom_dim(const FrobeniusCore& core, const bqa::Module& x, const bqa::Module& y);

struct StableComparison {
  Verdict verdict = Verdict::pass;
  // (index in b, index in a) for every stable class of b.
  std::vector<std::pair<std::size_t, std::size_t>> matching;
  std::vector<std::size_t> orphans;
  std::vector<std::string> problems;
  Json to_json(const universe::Universe& u) const;
};

// Sends every stable class of b to the stable part of its cofibrant-fibrant
// replacement for a's triple and checks that this is a bijection onto the
// stable classes of a that preserves stable Hom dimensions.
StableComparison stable_compare(const FrobeniusCore& a, const FrobeniusCore& b);

struct HypothesisResult {
  Verdict verdict = Verdict::pass;
  // W3 ∩ F1 = F2 and F3 ⊆ F1.
  bool first_form = false;
  // W2 ∩ W3 = W1 and F2 ⊆ W3.
  bool second_form = false;
  std::string message;
  Json to_json() const;
};

// Evaluates both forms of the gluing hypothesis for three triples of the
// shape (all, W_i, F_i); fails when the forms disagree.
HypothesisResult check_gkr_hypotheses(const HoveyTriple& t1, const HoveyTriple& t2, const HoveyTriple& t3);

}  // namespace cotlab::hovey
