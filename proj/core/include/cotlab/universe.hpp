#pragma once

// Finite universes of indecomposable modules and object classes over them.
// A class is the additive closure of its indecomposable members; class-level
// verdicts are relative to the universe they were computed over.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cotlab/bqa.hpp"
#include "cotlab/homalg.hpp"

namespace cotlab::universe {

using bqa::AlgebraPtr;
using bqa::Json;
using bqa::Module;

enum class Provenance { enumerated, declared };

struct EnumerateOptions {
  // Estimated number of candidate representations above which enumeration
  // refuses to start.
  double candidate_cap = 1e7;
  // Worker threads over dimension vectors; 0 picks the hardware count.
  unsigned threads = 0;
  // Read/write cached universes under this directory when non-empty;
  // defaults to $COTLAB_CACHE_DIR.
  std::optional<std::string> cache_dir;
};

class Universe;
using UniversePtr = std::shared_ptr<const Universe>;

class Universe {
 public:
  // Every indecomposable of total dimension <= max_dim, up to isomorphism.
  // Throws PreconditionError if max_dim is below the dimension of some
  // indecomposable projective or injective, CapExceeded if the candidate
  // space is too large.
  static UniversePtr enumerate(const AlgebraPtr& alg, std::size_t max_dim,
                               const EnumerateOptions& opts = {});
  // User-supplied indecomposables; validated and completed with the
  // indecomposable projectives and injectives.
  static UniversePtr declare(const AlgebraPtr& alg, std::vector<Module> modules);
  static UniversePtr from_json(const AlgebraPtr& alg, const Json& j);

  const AlgebraPtr& algebra() const noexcept { return alg_; }
  std::size_t max_dim() const noexcept { return max_dim_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return indecs_.size(); }
  const Module& indec(std::size_t i) const { return indecs_[i]; }
  const std::vector<Module>& indecs() const noexcept { return indecs_; }
  // Canonical id ("m0", "m1", ...) and a readable label ("S(1)", "P(2)", ...).
  std::string id(std::size_t i) const { return "m" + std::to_string(i); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of_id(const std::string& id) const;

  const std::vector<std::size_t>& projective_indices() const noexcept { return proj_; }
  const std::vector<std::size_t>& injective_indices() const noexcept { return inj_; }

  // Index of the universe member isomorphic to an indecomposable module.
  std::optional<std::size_t> locate(const Module& indecomposable) const;

  std::size_t ext(std::size_t i, std::size_t j, std::size_t deg) const;
  std::size_t hom(std::size_t i, std::size_t j) const;
  homalg::Resolver& resolver() const { return *resolver_; }

  // FNV-1a hash of the algebra and the canonical module list.
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  Json to_json() const;

 private:
  Universe(AlgebraPtr alg, std::size_t max_dim, Provenance prov, std::vector<Module> indecs);

  AlgebraPtr alg_;
  std::size_t max_dim_;
  Provenance provenance_;
  std::vector<Module> indecs_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> proj_;
  std::vector<std::size_t> inj_;
  std::string fingerprint_;
  std::unique_ptr<homalg::Resolver> resolver_;
  mutable std::mutex table_mu_;
  mutable std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> ext_table_;
};

enum class Tri { no, yes, unknown };

class ObjectClass {
 public:
  ObjectClass() = default;
  ObjectClass(UniversePtr u, std::vector<bool> members);

  static ObjectClass all(const UniversePtr& u);
  static ObjectClass none(const UniversePtr& u);
  static ObjectClass of(const UniversePtr& u, const std::vector<std::size_t>& indices);
  static ObjectClass projectives(const UniversePtr& u);
  static ObjectClass injectives(const UniversePtr& u);

  const UniversePtr& universe() const noexcept { return u_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const { return members_[i]; }
  std::size_t count() const;
  std::vector<std::size_t> indices() const;
  const std::vector<bool>& members() const noexcept { return members_; }

  // Membership of an arbitrary module: every indecomposable summand must be
  // a member. Unknown when a summand lies outside the universe.
  Tri contains_module(const Module& m) const;

  bool subset_of(const ObjectClass& other) const;
  friend ObjectClass operator&(const ObjectClass& a, const ObjectClass& b);
  friend ObjectClass operator|(const ObjectClass& a, const ObjectClass& b);
  friend bool operator==(const ObjectClass& a, const ObjectClass& b) {
    return a.members_ == b.members_;
  }

  // "{S(1), P(1)}" using universe labels.
  std::string to_string() const;
  Json to_json() const;

 private:
  UniversePtr u_;
  std::vector<bool> members_;
};

enum class Perp { left, right };

// right: {N : Ext^1(X, N) = 0 for all X in c}; left: {M : Ext^1(M, Y) = 0
// for all Y in c}.
ObjectClass orthogonal(const ObjectClass& c, Perp side);

}  // namespace cotlab::universe
