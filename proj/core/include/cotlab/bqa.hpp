#pragma once

// Bound quiver algebras A = kQ/I over F_p and their finite-dimensional
// modules, presented as representations of the bound quiver.
//
// Conventions: a path is a list of arrows in traversal order, so the path
// [a, b] means "a, then b". A module assigns a space k^{d_v} to each vertex v
// and a d_{t(a)} x d_{s(a)} matrix to each arrow a; the path [a, b] acts as
// M_b * M_a.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlab/linfield.hpp"

namespace cotlab::bqa {

using linfield::Elem;
using linfield::Mat;
using linfield::PrimeField;
using Json = nlohmann::ordered_json;

struct Arrow {
  std::string id;
  std::size_t src = 0;
  std::size_t tgt = 0;
};

struct PathTerm {
  Elem coeff = 1;
  std::vector<std::size_t> arrows;
};

using Relation = std::vector<PathTerm>;

struct BoundQuiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;
  std::vector<Relation> relations;

  std::size_t vertex_index(const std::string& id) const;
  std::size_t arrow_index(const std::string& id) const;
};

struct Path {
  std::size_t src = 0;
  std::size_t tgt = 0;
  std::vector<std::size_t> arrows;

  std::size_t length() const noexcept { return arrows.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Sparse coordinate vector over the path basis of an algebra.
using Coords = std::vector<std::pair<std::size_t, Elem>>;

class Algebra {
 public:
  // Computes the residue path basis and structure constants. Throws
  // MalformedInput / NonAdmissibleIdeal / CapExceeded.
  static std::shared_ptr<const Algebra> create(PrimeField field,
                                               BoundQuiver quiver);

  const PrimeField& field() const noexcept { return field_; }
  const BoundQuiver& quiver() const noexcept { return quiver_; }
  std::size_t num_vertices() const noexcept { return quiver_.vertices.size(); }
  std::size_t num_arrows() const noexcept { return quiver_.arrows.size(); }

  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<Path>& basis() const noexcept { return basis_; }
  // Indices of basis paths from i to j.
  const std::vector<std::size_t>& basis_between(std::size_t i,
                                                std::size_t j) const {
    return between_[i * num_vertices() + j];
  }
  // Smallest m found with J^m contained in I.
  std::size_t nilpotency_index() const noexcept { return nil_index_; }

  // Coordinates of a path (given by source vertex and traversal-ordered
  // arrows, assumed composable) in the residue basis.
  Coords reduce(std::size_t src, std::span<const std::size_t> arrows) const;
  // Product "p then q" of two basis elements.
  const Coords& product(std::size_t p, std::size_t q) const {
    return mult_[p * basis_.size() + q];
  }

  std::string path_name(const Path& p) const;

  friend bool same_algebra(const Algebra& a, const Algebra& b) {
    return &a == &b || a.canonical_ == b.canonical_;
  }
  const std::string& canonical_text() const noexcept { return canonical_; }

 private:
  Algebra(PrimeField f, BoundQuiver q) : field_(f), quiver_(std::move(q)) {}
  void compute_basis();

  PrimeField field_;
  BoundQuiver quiver_;
  std::vector<Path> basis_;
  std::vector<std::vector<std::size_t>> between_;
  std::size_t nil_index_ = 1;
  // Paths of length < nil_index_ (nontrivial), keyed by arrow list.
  std::map<std::vector<std::size_t>, Coords> reduction_;
  std::vector<Coords> mult_;
  std::string canonical_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

class Module {
 public:
  Module() = default;
  // Validates shapes and that every relation acts as zero.
  Module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Mat> maps);

  static Module zero(AlgebraPtr alg);
  // One-dimensional simple at vertex v.
  static Module simple(AlgebraPtr alg, std::size_t v);

  const Algebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const noexcept { return alg_; }
  const PrimeField& field() const { return alg_->field(); }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_[v]; }
  std::size_t total_dim() const noexcept;
  bool is_zero() const noexcept { return total_dim() == 0; }
  const Mat& arrow_map(std::size_t a) const { return maps_[a]; }
  const std::vector<Mat>& arrow_maps() const noexcept { return maps_; }

  // Action of a path: M(src) -> M(tgt).
  Mat path_action(std::size_t src, std::span<const std::size_t> arrows) const;
  Mat path_action(const Path& p) const { return path_action(p.src, p.arrows); }
  // Action of a basis element of the algebra.
  Mat basis_action(std::size_t b) const;

  // Exact byte encoding of dims and matrices; equal keys mean equal modules.
  std::string key() const;

  friend bool operator==(const Module& a, const Module& b) {
    return a.alg_ && b.alg_ && same_algebra(*a.alg_, *b.alg_) &&
           a.dims_ == b.dims_ && a.maps_ == b.maps_;
  }

 private:
  AlgebraPtr alg_;
  std::vector<std::size_t> dims_;
  std::vector<Mat> maps_;
};

// A module homomorphism: one block per vertex, block v of shape
// dim N(v) x dim M(v).
struct ModuleMap {
  std::vector<Mat> blocks;
  friend bool operator==(const ModuleMap&, const ModuleMap&) = default;
};

void require_same_algebra(const Module& m, const Module& n);

// Shape and relation check without constructing a Module.
bool satisfies_relations(const Algebra& a, const std::vector<std::size_t>& dims,
                         const std::vector<Mat>& maps);

bool is_module_map(const Module& dom, const Module& cod, const ModuleMap& f);
ModuleMap identity_map(const Module& m);
ModuleMap zero_map(const Module& dom, const Module& cod);
// g after f.
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);
ModuleMap add(const ModuleMap& f, const ModuleMap& g);
ModuleMap scale(const ModuleMap& f, Elem s);
ModuleMap linear_combination(const Module& dom, const Module& cod,
                             std::span<const ModuleMap> basis,
                             std::span<const Elem> coeffs);
bool is_zero_map(const ModuleMap& f);
bool is_injective(const ModuleMap& f);
bool is_surjective(const ModuleMap& f);
bool is_bijective(const ModuleMap& f);
std::optional<ModuleMap> inverse_map(const ModuleMap& f);

// Flattened coordinates (blocks concatenated row-major) as a column vector.
Mat flatten(const ModuleMap& f, const PrimeField& field);

// Basis of Hom_A(m, n). Throws IncompatibleInput on algebra mismatch.
std::vector<ModuleMap> hom_space(const Module& m, const Module& n);
std::size_t hom_dim(const Module& m, const Module& n);

struct DirectSum {
  Module sum;
  std::vector<ModuleMap> inclusions;
  std::vector<ModuleMap> projections;
};
DirectSum direct_sum(std::span<const Module> parts);
Module direct_sum(const Module& a, const Module& b);
// Block map a ⊕ b.
ModuleMap direct_sum_map(const ModuleMap& a, const ModuleMap& b);
// Row map [f_1 ... f_k] : (+)dom_i -> cod.
ModuleMap row_map(std::span<const ModuleMap> parts);
// Column map (f_1; ...; f_k) : dom -> (+)cod_i.
ModuleMap column_map(std::span<const ModuleMap> parts);

// Submodule generated by per-vertex column bases (columns must span a
// submodule); returns the module and its inclusion.
std::pair<Module, ModuleMap> submodule(const Module& m,
                                       const std::vector<Mat>& bases);
// Quotient by a submodule given by per-vertex spanning columns; returns the
// module, the projection, and a per-vertex section of the projection.
struct Quotient {
  Module module;
  ModuleMap projection;
  std::vector<Mat> sections;
};
Quotient quotient(const Module& m, const std::vector<Mat>& spans);

std::pair<Module, ModuleMap> kernel(const Module& dom, const Module& cod,
                                   const ModuleMap& f);
Quotient cokernel(const Module& dom, const Module& cod, const ModuleMap& f);

// Outcome of an isomorphism search: `map` set means isomorphic; `decided`
// false means the search budget ran out without a verdict.
struct IsoResult {
  std::optional<ModuleMap> map;
  bool decided = true;
  bool isomorphic() const noexcept { return map.has_value(); }
};

// Enumerates Hom when p^dim <= 3^12 and otherwise tries 8*dim random
// combinations, reporting undecided rather than absent.
IsoResult is_isomorphic(const Module& m, const Module& n);
// Exact test valid when both modules are indecomposable: the
// non-isomorphisms then form a proper subspace of Hom(m, n), so some basis
// element is an isomorphism iff one exists.
std::optional<ModuleMap> isomorphism_of_indecomposables(const Module& m,
                                                        const Module& n);

// JSON interfaces.
std::shared_ptr<const Algebra> parse_algebra(const Json& desc);
Json algebra_to_json(const Algebra& a);
Module parse_module(const AlgebraPtr& alg, const Json& desc);
Json module_to_json(const Module& m);
ModuleMap parse_map(const Module& dom, const Module& cod, const Json& desc);
Json map_to_json(const Module& dom, const ModuleMap& f);
Json mat_to_json(const Mat& m);
Mat mat_from_json(const PrimeField& f, const Json& j, std::size_t rows,
                  std::size_t cols);

}  // namespace cotlab::bqa
