#pragma once

// Homological toolkit over a bound quiver algebra: conflations, minimal
// projective covers and injective envelopes, syzygies, Ext, pushouts and
// pullbacks, and Krull-Schmidt decomposition.

#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cotlab/bqa.hpp"

namespace cotlab::homalg {

using bqa::AlgebraPtr;
using bqa::Module;
using bqa::ModuleMap;

// A short exact sequence left >-> mid ->> right.
struct Conflation {
  Module left;
  Module mid;
  Module right;
  ModuleMap incl;
  ModuleMap proj;
};

// Checks all exactness conditions by rank: incl injective, proj surjective,
// proj*incl = 0, dim mid = dim left + dim right (which forces im = ker).
bool is_conflation(const Conflation& c);
Conflation split_conflation(const Module& a, const Module& c);
// Direct sum of two conflations.
Conflation direct_sum(const Conflation& x, const Conflation& y);

enum class Side { cover, envelope };

// cover: map object ->> m; envelope: map m >-> object.
struct Approximation {
  Module object;
  ModuleMap map;
};

Module indecomposable_projective(const AlgebraPtr& alg, std::size_t v);
Module indecomposable_injective(const AlgebraPtr& alg, std::size_t v);

// rad M(v) = sum of images of the arrows ending at v; columns span it.
std::vector<bqa::Mat> radical(const Module& m);
// soc M(v) = common kernel of the arrows starting at v.
std::vector<bqa::Mat> socle(const Module& m);
std::vector<std::size_t> top_dims(const Module& m);
std::vector<std::size_t> socle_dims(const Module& m);

Approximation projective_cover(const Module& m);
Approximation injective_envelope(const Module& m);
Approximation minimal_approximation(const Module& m, Side side);

bool is_projective(const Module& m);
bool is_injective(const Module& m);

// f : k >-> b, g : k -> l. Returns D = (b + l)/{(f x, -g x)} and the maps
// b -> D, l -> D. Throws PreconditionError unless f is injective.
struct Pushout {
  Module object;
  ModuleMap from_b;
  ModuleMap from_l;
};
Pushout pushout(const Module& k, const Module& b, const Module& l,
                const ModuleMap& f, const ModuleMap& g);

// f : b ->> m, g : l -> m. Returns E = {(x, y) : f x = g y} with its maps.
// Throws PreconditionError unless f is surjective.
struct Pullback {
  Module object;
  ModuleMap to_b;
  ModuleMap to_l;
};
Pullback pullback(const Module& b, const Module& l, const Module& m,
                  const ModuleMap& f, const ModuleMap& g);

// Pushout of a conflation A >-> B ->> C along g : A -> L, giving
// L >-> D ->> C together with the comparison map B -> D.
struct PushoutConflation {
  Conflation conflation;
  ModuleMap from_mid;
};
PushoutConflation pushout_conflation(const Conflation& c, const Module& l,
                                     const ModuleMap& g);
// Pullback of A >-> B ->> C along h : N -> C, giving A >-> E ->> N with
// the comparison map E -> B.
struct PullbackConflation {
  Conflation conflation;
  ModuleMap to_mid;
};
PullbackConflation pullback_conflation(const Conflation& c, const Module& n,
                                       const ModuleMap& h);

// Dimension that may be infinite (with a periodicity certificate
// Omega^i = Omega^j) or only bounded below when the search cap is reached.
struct Dim {
  enum class Kind { finite, infinite, at_least };
  Kind kind = Kind::finite;
  std::size_t value = 0;
  std::pair<std::size_t, std::size_t> period{0, 0};

  static Dim finite(std::size_t n) { return {Kind::finite, n, {0, 0}}; }
  static Dim infinite(std::size_t i, std::size_t j) {
    return {Kind::infinite, 0, {i, j}};
  }
  static Dim at_least(std::size_t n) { return {Kind::at_least, n, {0, 0}}; }

  bool is_finite() const noexcept { return kind == Kind::finite; }
  bool is_infinite() const noexcept { return kind == Kind::infinite; }
  bool decided() const noexcept { return kind != Kind::at_least; }
  std::string to_string() const;
  friend bool operator==(const Dim&, const Dim&) = default;
};

inline constexpr std::size_t kSyzygyCap = 8;

// One indecomposable summand with its split inclusion/projection.
struct Piece {
  Module module;
  ModuleMap inclusion;
  ModuleMap projection;
};

struct Summand {
  Module module;
  std::size_t multiplicity = 1;
};

// Krull-Schmidt decomposition. Throws UndecidedDecomposition when neither a
// splitting endomorphism nor a locality certificate is found.
std::vector<Piece> decompose_with_maps(const Module& m);
std::vector<Summand> decompose(const Module& m);
bool is_indecomposable(const Module& m);
// Exact isomorphism test through decompositions.
bool same_iso_class(const Module& m, const Module& n);

// Per-algebra memo of covers, envelopes and decompositions, keyed by the
// exact module encoding. Shared reads, exclusive writes.
class Resolver {
 public:
  struct Step {
    Approximation approx;
    Module next;         // kernel of a cover / cokernel of an envelope
    ModuleMap next_map;  // next >-> object, or object ->> next
  };

  explicit Resolver(AlgebraPtr alg);

  const AlgebraPtr& algebra() const noexcept { return alg_; }

  const Step& cover_step(const Module& m);
  const Step& envelope_step(const Module& m);
  Module syzygy(const Module& m, std::size_t k);
  Module cosyzygy(const Module& m, std::size_t k);

  // Ext^deg(m, n) through the minimal projective resolution of m.
  std::size_t ext_dim(const Module& m, const Module& n, std::size_t deg);
  // Ext^deg(m, n) through the minimal injective coresolution of n.
  std::size_t ext_dim_injective(const Module& m, const Module& n,
                                std::size_t deg);

  Dim projective_dimension(const Module& m, std::size_t cap = kSyzygyCap);
  Dim injective_dimension(const Module& m, std::size_t cap = kSyzygyCap);

  const std::vector<Piece>& pieces(const Module& m);

 private:
  AlgebraPtr alg_;
  std::shared_mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<Step>> covers_;
  std::unordered_map<std::string, std::unique_ptr<Step>> envelopes_;
  std::unordered_map<std::string, std::unique_ptr<std::vector<Piece>>> pieces_;
};

Module syzygy(const Module& m, std::size_t k);
Module cosyzygy(const Module& m, std::size_t k);
std::size_t ext_dim(const Module& m, const Module& n, std::size_t deg);
std::size_t ext_dim_injective(const Module& m, const Module& n,
                              std::size_t deg);

struct Resolution {
  enum class Flavor { projective, injective };
  Flavor flavor = Flavor::projective;
  Module resolved;
  // projective: terms[i] = P_i, maps[i] : P_{i+1} -> P_i, augmentation
  // P_0 ->> M. injective: terms[i] = I^i, maps[i] : I^i -> I^{i+1},
  // augmentation M >-> I^0.
  std::vector<Module> terms;
  std::vector<ModuleMap> maps;
  ModuleMap augmentation;
};

// Minimal resolutions truncated after `length` terms.
Resolution projective_resolution(Resolver& r, const Module& m,
                                 std::size_t length);
Resolution injective_coresolution(Resolver& r, const Module& m,
                                  std::size_t length);
// Verifies zero composites, exactness at interior terms (by rank) and that
// every term is projective (resp. injective).
bool is_valid_resolution(const Resolution& res);

// Generates conflations among the given objects: all split ones, pushouts
// of Omega C >-> P(C) along maps Omega C -> A (which realise every
// extension of C by A), and direct sums of the above. Deterministic for a
// given seed.
std::vector<Conflation> generate_conflations(Resolver& r,
                                             const std::vector<Module>& objs,
                                             std::size_t max_count,
                                             unsigned seed);

}  // namespace cotlab::homalg
