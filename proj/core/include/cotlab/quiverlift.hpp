#pragma once

// Representations of a finite shape quiver Q with values in modules over a
// bound quiver algebra A, the structure maps phi_i / psi_i with their
// cokernels C_i and kernels K_i, the classes Phi(X), Psi(Y) and Rep(Q, X),
// and the cotorsion pairs and Hovey triples they induce.
//
// Rep(Q, A-mod) is identified with modules over the tensor algebra kQ (x) A,
// presented by the product quiver with the relations of A at every vertex
// of Q and one commutativity relation per (shape arrow, value arrow). This
// lets representation universes reuse enumeration, Ext and approximations.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cotlab/hovey.hpp"

namespace cotlab::quiverlift {

using bqa::AlgebraPtr;
using bqa::Json;
using bqa::Module;
using bqa::ModuleMap;
using cotorsion::CotorsionPair;
using cotorsion::Side;
using cotorsion::Verdict;
using hovey::HoveyTriple;
using hovey::IdentityResult;
using universe::ObjectClass;
using universe::UniversePtr;

struct ShapeQuiver {
  std::vector<std::string> vertices;
  std::vector<bqa::Arrow> arrows;

  // {"vertices": [...], "arrows": [{"id", "src", "tgt"}]}. Throws
  // MalformedInput.
  static ShapeQuiver from_json(const Json& j);
  Json to_json() const;
};

// Left rooted: no infinite chain ... -> . -> . of arrows; right rooted: no
// infinite chain . -> . -> ... For a finite quiver both amount to having no
// oriented cycle.
struct Rootedness {
  bool left = false;
  bool right = false;
};
Rootedness check_rooted(const ShapeQuiver& q);

// A shape together with a value algebra and their tensor algebra. Throws
// PreconditionError for a shape with an oriented cycle.
class RepSetting {
 public:
  RepSetting(ShapeQuiver shape, AlgebraPtr value);

  const ShapeQuiver& shape() const noexcept { return shape_; }
  const AlgebraPtr& value_algebra() const noexcept { return value_; }
  const AlgebraPtr& tensor_algebra() const noexcept { return tensor_; }

  // Vertex (i, v) and arrows (a, v), (i, alpha) of the product quiver.
  std::size_t vertex(std::size_t i, std::size_t v) const;
  std::size_t shape_arrow(std::size_t a, std::size_t v) const;
  std::size_t value_arrow(std::size_t i, std::size_t alpha) const;

 private:
  ShapeQuiver shape_;
  AlgebraPtr value_;
  AlgebraPtr tensor_;
};

struct Representation {
  std::vector<Module> at;       // X(i) for every shape vertex
  std::vector<ModuleMap> along;  // X(a) : X(s(a)) -> X(t(a)) for every shape arrow
};

// Throws IncompatibleInput on shape mismatch or when some X(a) is not a
// module map.
Module to_module(const RepSetting& s, const Representation& x);
Representation to_representation(const RepSetting& s, const Module& m);

struct VertexData {
  std::size_t vertex = 0;
  Module phi_domain;  // (+) X(s(a)) over arrows a into i
  ModuleMap phi;
  Module coker_phi;  // C_i(X)
  Module psi_codomain;  // (+) X(t(a)) over arrows a out of i
  ModuleMap psi;
  Module ker_psi;  // K_i(X)
};

std::vector<VertexData> vertex_data(const RepSetting& s, const Representation& x);

enum class LiftKind { phi, psi, pointwise };

// Phi: every phi_i injective with C_i(X) in xc; Psi: every psi_i surjective
// with K_i(X) in xc; Pointwise: every X(i) in xc. Throws PreconditionError
// when a value module has a summand outside the value universe.
bool lifted_member(const RepSetting& s, const ObjectClass& xc, const Module& rep, LiftKind kind);
ObjectClass class_lift(const RepSetting& s, const ObjectClass& xc, const UniversePtr& ru, LiftKind kind);

struct RepPairResult {
  Verdict verdict = Verdict::pass;
  CotorsionPair pair;  // flags record the checks
  cotorsion::CheckResult pair_check;
  std::optional<cotorsion::CompletenessResult> complete;
  Json to_json() const;
};

// Left: (Phi(X), Rep(Q, Y)) for a left rooted shape. Right: (Rep(Q, X),
// Psi(Y)) for a right rooted shape. Runs the pair and completeness checks
// and also records heredity. Throws PreconditionError on a shape that is
// not rooted on the requested side.
RepPairResult check_rep_pair(const RepSetting& s, const CotorsionPair& value_pair, const UniversePtr& ru, Side side);

// Left: Phi(X_n) = Phi(X)_n. Right: Psi(Y_n) = Psi(Y)_n. Throws
// PreconditionError unless value_pair is certified and extendable up to n
// on that side.
IdentityResult check_phi_dimension_identity(const RepSetting& s, const CotorsionPair& value_pair,
                                            const UniversePtr& ru, std::size_t n, Side side);

struct RepLiftResult {
  Verdict verdict = Verdict::pass;
  // Lift in A, then pass to representations.
  HoveyTriple lift_then_represent;
  // Pass to representations, then lift inside Rep(Q, A).
  HoveyTriple represent_then_lift;
  IdentityResult c, w, f;
  hovey::StableComparison tower;
  std::vector<std::string> problems;
  Json to_json() const;
};

// Left: (Phi(C_n), Rep(Q,W), Rep(Q,(C n W)_n^perp)) against
// (Phi(C)_n, Rep(Q,W), (Phi(C) n Rep(Q,W))_n^perp). Right:
// (Rep(Q, ^perp(W n F)_n), Rep(Q,W), Psi(F_n)) against
// (^perp(Rep(Q,W) n Psi(F))_n, Rep(Q,W), Psi(F)_n). Also verifies the
// first triple and compares its Frobenius core with the one at n = 0.
// Throws PreconditionError unless t is a verified hereditary triple,
// extendable up to n on that side, over a shape rooted on that side.
RepLiftResult lift_rep_triple(const RepSetting& s, const HoveyTriple& t, const UniversePtr& ru, std::size_t n,
                              Side side, const hovey::VerifyOptions& opts = {});

inline constexpr std::size_t kDefaultRepCap = 4;

}  // namespace cotlab::quiverlift
