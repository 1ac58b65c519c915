#pragma once

// Brute-force reference computations used to check the library. Everything
// here enumerates vectors, matrices or block tuples over the field outright
// and never calls the library's linear algebra, Hom, Ext or decomposition
// routines. Only meant for very small inputs.

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cotlab/bqa.hpp"
#include "cotlab/universe.hpp"

namespace oracle {

using cotlab::bqa::AlgebraPtr;
using cotlab::bqa::Mat;
using cotlab::bqa::Module;
using cotlab::bqa::ModuleMap;
using cotlab::linfield::Elem;
using cotlab::linfield::PrimeField;

// Fixture algebras over F_2 unless stated.
AlgebraPtr dual_numbers();        // F[x]/(x^2)
AlgebraPtr truncated_cube();      // F[x]/(x^3)
AlgebraPtr a2();                  // 1 -> 2
AlgebraPtr a3();                  // 1 -> 2 -> 3
AlgebraPtr a2_over(unsigned p);
AlgebraPtr algebra(const std::string& json);

// log_p(count), asserting count is a power of p.
std::size_t log_p(std::size_t count, unsigned p);

// Calls f on every vector of length n over F_p (as a vector of entries).
void for_each_vector(unsigned p, std::size_t n, const std::function<void(const std::vector<Elem>&)>& f);

// Naive matrix product with entries reduced mod p.
Mat mul(const Mat& a, const Mat& b);

// Rank as cols - log_p(#kernel vectors), by enumeration.
std::size_t rank(const Mat& m);

// Per-vertex block tuples of the given shapes, as flat coordinates.
std::vector<Mat> unflatten(const PrimeField& f, const std::vector<std::pair<std::size_t, std::size_t>>& shapes,
                           const std::vector<Elem>& flat);

// Does the relation set of the algebra hold for these arrow matrices? Paths
// are evaluated by naive products.
bool satisfies(const cotlab::bqa::Algebra& a, const std::vector<std::size_t>& dims, const std::vector<Mat>& maps);

bool is_hom(const Module& m, const Module& n, const std::vector<Mat>& blocks);
// Every homomorphism m -> n.
std::vector<std::vector<Mat>> homs(const Module& m, const Module& n);
std::size_t hom_dim(const Module& m, const Module& n);

// dim Ext^1(m, n) as (block upper triangular extensions satisfying the
// relations) modulo (coboundaries h_t m_a - n_a h_s).
std::size_t ext1(const Module& m, const Module& n);

bool isomorphic(const Module& m, const Module& n);
// No idempotent endomorphism other than 0 and 1, and m nonzero.
bool indecomposable(const Module& m);

// Every module with the given dimension vector.
std::vector<Module> modules_with_dims(const AlgebraPtr& alg, const std::vector<std::size_t>& dims);
// Indecomposables of total dimension <= cap, one per isomorphism class.
std::vector<Module> indecomposables(const AlgebraPtr& alg, std::size_t cap);

// Random module of the given dimension vector satisfying the relations
// (rejection sampling; nullopt after many misses).
std::optional<Module> random_module(const AlgebraPtr& alg, const std::vector<std::size_t>& dims, std::mt19937& rng);
Mat random_mat(const PrimeField& f, std::size_t rows, std::size_t cols, std::mt19937& rng);

// Indices of the universe members satisfying pred.
std::vector<std::size_t> members_where(const cotlab::universe::Universe& u,
                                       const std::function<bool(const Module&)>& pred);

}  // namespace oracle
