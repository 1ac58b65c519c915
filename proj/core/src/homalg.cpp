#include "cotlab/homalg.hpp"

#include <algorithm>
#include <mutex>
#include <random>

#include "cotlab/error.hpp"

namespace cotlab::homalg {

using bqa::Elem;
using bqa::Mat;
using bqa::PrimeField;
using linfield::column_space;
using linfield::complete_basis;
using linfield::inverse;
using linfield::rank;
using linfield::rank_kernel;

namespace {

std::size_t position_in(const std::vector<std::size_t>& list, std::size_t b) {
  auto it = std::find(list.begin(), list.end(), b);
  return static_cast<std::size_t>(it - list.begin());
}

std::vector<std::size_t> concat(std::size_t a, const std::vector<std::size_t>& q) {
  std::vector<std::size_t> r{a};
  r.insert(r.end(), q.begin(), q.end());
  return r;
}

Module zero_like(const Module& m) { return Module::zero(m.algebra_ptr()); }

}  // namespace

// ---------------------------------------------------------------------------
// Conflations
// ---------------------------------------------------------------------------

bool is_conflation(const Conflation& c) {
  try {
    bqa::require_same_algebra(c.left, c.mid);
    bqa::require_same_algebra(c.mid, c.right);
  } catch (const IncompatibleInput&) {
    return false;
  }
  if (!bqa::is_module_map(c.left, c.mid, c.incl)) return false;
  if (!bqa::is_module_map(c.mid, c.right, c.proj)) return false;
  if (!bqa::is_injective(c.incl) || !bqa::is_surjective(c.proj)) return false;
  if (!bqa::is_zero_map(bqa::compose(c.proj, c.incl))) return false;
  for (std::size_t v = 0; v < c.mid.dims().size(); ++v) {
    if (c.mid.dim(v) != c.left.dim(v) + c.right.dim(v)) return false;
  }
  return true;
}

Conflation split_conflation(const Module& a, const Module& c) {
  std::vector<Module> parts{a, c};
  bqa::DirectSum s = bqa::direct_sum(parts);
  return {a, s.sum, c, s.inclusions[0], s.projections[1]};
}

Conflation direct_sum(const Conflation& x, const Conflation& y) {
  return {bqa::direct_sum(x.left, y.left), bqa::direct_sum(x.mid, y.mid),
          bqa::direct_sum(x.right, y.right), bqa::direct_sum_map(x.incl, y.incl),
          bqa::direct_sum_map(x.proj, y.proj)};
}

// ---------------------------------------------------------------------------
// Projectives, injectives, radical and socle
// ---------------------------------------------------------------------------

Module indecomposable_projective(const AlgebraPtr& alg, std::size_t v) {
  const bqa::Algebra& a = *alg;
  const std::size_t nv = a.num_vertices();
  std::vector<std::size_t> dims(nv);
  for (std::size_t j = 0; j < nv; ++j) dims[j] = a.basis_between(v, j).size();
  std::vector<Mat> maps;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const bqa::Arrow& ar = a.quiver().arrows[i];
    const auto& from = a.basis_between(v, ar.src);
    const auto& to = a.basis_between(v, ar.tgt);
    Mat m(a.field(), to.size(), from.size());
    for (std::size_t c = 0; c < from.size(); ++c) {
      std::vector<std::size_t> path = a.basis()[from[c]].arrows;
      path.push_back(i);
      for (auto [b, e] : a.reduce(v, path)) m(position_in(to, b), c) = e;
    }
    maps.push_back(std::move(m));
  }
  return Module(alg, std::move(dims), std::move(maps));
}

Module indecomposable_injective(const AlgebraPtr& alg, std::size_t v) {
  const bqa::Algebra& a = *alg;
  const std::size_t nv = a.num_vertices();
  std::vector<std::size_t> dims(nv);
  for (std::size_t j = 0; j < nv; ++j) dims[j] = a.basis_between(j, v).size();
  std::vector<Mat> maps;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const bqa::Arrow& ar = a.quiver().arrows[i];
    const auto& into_src = a.basis_between(ar.src, v);
    const auto& into_tgt = a.basis_between(ar.tgt, v);
    // g : paths(tgt -> v) -> paths(src -> v), q |-> a q; I_v(a) = g^T.
    Mat g(a.field(), into_src.size(), into_tgt.size());
    for (std::size_t c = 0; c < into_tgt.size(); ++c) {
      for (auto [b, e] : a.reduce(ar.src, concat(i, a.basis()[into_tgt[c]].arrows))) {
        g(position_in(into_src, b), c) = e;
      }
    }
    maps.push_back(g.transpose());
  }
  return Module(alg, std::move(dims), std::move(maps));
}

std::vector<Mat> radical(const Module& m) {
  const bqa::Algebra& a = m.algebra();
  std::vector<Mat> out;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    Mat acc(m.field(), m.dim(v), 0);
    for (std::size_t i = 0; i < a.num_arrows(); ++i) {
      if (a.quiver().arrows[i].tgt == v) acc = linfield::hstack(acc, m.arrow_map(i));
    }
    out.push_back(column_space(acc));
  }
  return out;
}

std::vector<Mat> socle(const Module& m) {
  const bqa::Algebra& a = m.algebra();
  std::vector<Mat> out;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    Mat acc(m.field(), 0, m.dim(v));
    for (std::size_t i = 0; i < a.num_arrows(); ++i) {
      if (a.quiver().arrows[i].src == v) acc = linfield::vstack(acc, m.arrow_map(i));
    }
    out.push_back(rank_kernel(acc).kernel_basis);
  }
  return out;
}

std::vector<std::size_t> top_dims(const Module& m) {
  std::vector<Mat> r = radical(m);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < r.size(); ++v) out.push_back(m.dim(v) - r[v].cols());
  return out;
}

std::vector<std::size_t> socle_dims(const Module& m) {
  std::vector<std::size_t> out;
  for (const Mat& s : socle(m)) out.push_back(s.cols());
  return out;
}

Approximation projective_cover(const Module& m) {
  const AlgebraPtr& alg = m.algebra_ptr();
  const bqa::Algebra& a = *alg;
  const std::size_t nv = a.num_vertices();
  std::vector<Mat> rad = radical(m);
  std::vector<Module> parts;
  std::vector<ModuleMap> maps;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t r = rad[v].cols();
    if (r == m.dim(v)) continue;
    Mat t = complete_basis(rad[v]);
    Module pv = indecomposable_projective(alg, v);
    for (std::size_t c = r; c < m.dim(v); ++c) {
      Mat gen = t.column(c);
      ModuleMap f;
      for (std::size_t j = 0; j < nv; ++j) {
        const auto& paths = a.basis_between(v, j);
        Mat block(m.field(), m.dim(j), paths.size());
        for (std::size_t k = 0; k < paths.size(); ++k) {
          block.set_block(0, k, m.path_action(a.basis()[paths[k]]) * gen);
        }
        f.blocks.push_back(std::move(block));
      }
      parts.push_back(pv);
      maps.push_back(std::move(f));
    }
  }
  if (parts.empty()) return {zero_like(m), bqa::zero_map(zero_like(m), m)};
  bqa::DirectSum s = bqa::direct_sum(parts);
  return {std::move(s.sum), bqa::row_map(maps)};
}

Approximation injective_envelope(const Module& m) {
  const AlgebraPtr& alg = m.algebra_ptr();
  const bqa::Algebra& a = *alg;
  const std::size_t nv = a.num_vertices();
  std::vector<Mat> soc = socle(m);
  std::vector<Module> parts;
  std::vector<ModuleMap> maps;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t s = soc[v].cols();
    if (s == 0) continue;
    Mat tinv = *inverse(complete_basis(soc[v]));
    Module iv = indecomposable_injective(alg, v);
    for (std::size_t k = 0; k < s; ++k) {
      Mat lambda = tinv.block(k, 0, 1, m.dim(v));
      ModuleMap f;
      for (std::size_t j = 0; j < nv; ++j) {
        const auto& paths = a.basis_between(j, v);
        Mat block(m.field(), paths.size(), m.dim(j));
        for (std::size_t q = 0; q < paths.size(); ++q) {
          block.set_block(q, 0, lambda * m.path_action(a.basis()[paths[q]]));
        }
        f.blocks.push_back(std::move(block));
      }
      parts.push_back(iv);
      maps.push_back(std::move(f));
    }
  }
  if (parts.empty()) return {zero_like(m), bqa::zero_map(m, zero_like(m))};
  bqa::DirectSum s = bqa::direct_sum(parts);
  return {std::move(s.sum), bqa::column_map(maps)};
}

Approximation minimal_approximation(const Module& m, Side side) {
  return side == Side::cover ? projective_cover(m) : injective_envelope(m);
}

bool is_projective(const Module& m) {
  const bqa::Algebra& a = m.algebra();
  std::vector<std::size_t> top = top_dims(m);
  std::size_t total = 0;
  for (std::size_t v = 0; v < top.size(); ++v) {
    if (top[v] == 0) continue;
    std::size_t pd = 0;
    for (std::size_t j = 0; j < a.num_vertices(); ++j) pd += a.basis_between(v, j).size();
    total += top[v] * pd;
  }
  return total == m.total_dim();
}

bool is_injective(const Module& m) {
  const bqa::Algebra& a = m.algebra();
  std::vector<std::size_t> soc = socle_dims(m);
  std::size_t total = 0;
  for (std::size_t v = 0; v < soc.size(); ++v) {
    if (soc[v] == 0) continue;
    std::size_t id = 0;
    for (std::size_t j = 0; j < a.num_vertices(); ++j) id += a.basis_between(j, v).size();
    total += soc[v] * id;
  }
  return total == m.total_dim();
}

// ---------------------------------------------------------------------------
// Pushouts and pullbacks
// ---------------------------------------------------------------------------

namespace {

struct RawPushout {
  bqa::DirectSum sum;
  bqa::Quotient quotient;
};

RawPushout raw_pushout(const Module& k, const Module& b, const Module& l,
                       const ModuleMap& f, const ModuleMap& g) {
  bqa::require_same_algebra(k, b);
  bqa::require_same_algebra(k, l);
  if (!bqa::is_injective(f)) throw PreconditionError("pushout: first map is not an inflation");
  std::vector<Module> parts{b, l};
  bqa::DirectSum s = bqa::direct_sum(parts);
  const Elem minus_one = static_cast<Elem>(k.field().p() - 1);
  std::vector<ModuleMap> col{f, bqa::scale(g, minus_one)};
  ModuleMap into = bqa::column_map(col);
  bqa::Quotient q = bqa::cokernel(k, s.sum, into);
  return {std::move(s), std::move(q)};
}

}  // namespace

Pushout pushout(const Module& k, const Module& b, const Module& l, const ModuleMap& f,
                const ModuleMap& g) {
  RawPushout r = raw_pushout(k, b, l, f, g);
  return {r.quotient.module, bqa::compose(r.quotient.projection, r.sum.inclusions[0]),
          bqa::compose(r.quotient.projection, r.sum.inclusions[1])};
}

Pullback pullback(const Module& b, const Module& l, const Module& m, const ModuleMap& f,
                  const ModuleMap& g) {
  bqa::require_same_algebra(b, m);
  bqa::require_same_algebra(l, m);
  if (!bqa::is_surjective(f)) throw PreconditionError("pullback: first map is not a deflation");
  std::vector<Module> parts{b, l};
  bqa::DirectSum s = bqa::direct_sum(parts);
  const Elem minus_one = static_cast<Elem>(m.field().p() - 1);
  std::vector<ModuleMap> row{f, bqa::scale(g, minus_one)};
  auto [e, inc] = bqa::kernel(s.sum, m, bqa::row_map(row));
  return {e, bqa::compose(s.projections[0], inc), bqa::compose(s.projections[1], inc)};
}

PushoutConflation pushout_conflation(const Conflation& c, const Module& l, const ModuleMap& g) {
  RawPushout r = raw_pushout(c.left, c.mid, l, c.incl, g);
  const Module& d = r.quotient.module;
  ModuleMap to_c;
  for (std::size_t v = 0; v < d.dims().size(); ++v) {
    // [proj, 0] : B + L -> C vanishes on the pushout relations.
    Mat pz = linfield::hstack(c.proj.blocks[v], Mat(d.field(), c.right.dim(v), l.dim(v)));
    to_c.blocks.push_back(pz * r.quotient.sections[v]);
  }
  Conflation out{l, d, c.right, bqa::compose(r.quotient.projection, r.sum.inclusions[1]),
                 std::move(to_c)};
  return {std::move(out), bqa::compose(r.quotient.projection, r.sum.inclusions[0])};
}

PullbackConflation pullback_conflation(const Conflation& c, const Module& n, const ModuleMap& h) {
  bqa::require_same_algebra(c.mid, n);
  std::vector<Module> parts{c.mid, n};
  bqa::DirectSum s = bqa::direct_sum(parts);
  const Elem minus_one = static_cast<Elem>(n.field().p() - 1);
  std::vector<ModuleMap> row{c.proj, bqa::scale(h, minus_one)};
  auto [e, inc] = bqa::kernel(s.sum, c.right, bqa::row_map(row));
  ModuleMap from_a;
  for (std::size_t v = 0; v < e.dims().size(); ++v) {
    Mat target = linfield::vstack(c.incl.blocks[v], Mat(n.field(), n.dim(v), c.left.dim(v)));
    from_a.blocks.push_back(*linfield::solve_linear(inc.blocks[v], target));
  }
  Conflation out{c.left, e, n, std::move(from_a), bqa::compose(s.projections[1], inc)};
  return {std::move(out), bqa::compose(s.projections[0], inc)};
}

std::string Dim::to_string() const {
  switch (kind) {
    case Kind::finite:
      return std::to_string(value);
    case Kind::infinite:
      return "inf";
    case Kind::at_least:
      return ">=" + std::to_string(value);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

namespace {

bool all_blocks(const ModuleMap& f, bool (*pred)(const Mat&)) {
  return std::all_of(f.blocks.begin(), f.blocks.end(), pred);
}

bool block_nilpotent(const Mat& m) { return linfield::is_nilpotent(m); }
bool block_invertible(const Mat& m) { return m.is_square() && rank(m) == m.rows(); }

bool splits(const ModuleMap& f) {
  return !all_blocks(f, block_nilpotent) && !all_blocks(f, block_invertible);
}

// An endomorphism that is neither nilpotent nor invertible, or nullopt if
// End(m) is certified local.
std::optional<ModuleMap> find_split(const Module& m) {
  const auto basis = bqa::hom_space(m, m);
  const std::size_t d = basis.size();
  if (d <= 1) return std::nullopt;
  auto sum = [](const std::vector<std::size_t>& v) {
    std::size_t s = 0;
    for (std::size_t x : v) s += x;
    return s;
  };
  if (sum(top_dims(m)) == 1 || sum(socle_dims(m)) == 1) return std::nullopt;
  for (const ModuleMap& f : basis) {
    if (splits(f)) return f;
  }
  const unsigned p = m.field().p();
  std::vector<Elem> coeffs(d);
  std::mt19937_64 rng(0xdec0u + 7919u * d + m.total_dim());
  std::uniform_int_distribution<unsigned> pick(0, p - 1);
  for (std::size_t t = 0; t < 16 * d; ++t) {
    for (Elem& c : coeffs) c = static_cast<Elem>(pick(rng));
    ModuleMap f = bqa::linear_combination(m, m, basis, coeffs);
    if (splits(f)) return f;
  }
  double size = 1.0;
  for (std::size_t i = 0; i < d; ++i) size *= p;
  if (size > 65536.0) {
    throw UndecidedDecomposition("no splitting endomorphism found and End has " +
                                 std::to_string(d) + " dimensions; cannot certify locality");
  }
  std::fill(coeffs.begin(), coeffs.end(), Elem{0});
  while (true) {
    std::size_t i = 0;
    while (i < d && coeffs[i] == p - 1) coeffs[i++] = 0;
    if (i == d) break;
    ++coeffs[i];
    ModuleMap f = bqa::linear_combination(m, m, basis, coeffs);
    if (splits(f)) return f;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Piece> decompose_with_maps(const Module& m) {
  if (m.is_zero()) return {};
  std::optional<ModuleMap> phi = find_split(m);
  if (!phi) return {Piece{m, bqa::identity_map(m), bqa::identity_map(m)}};
  std::size_t n = 1;
  for (std::size_t d : m.dims()) n = std::max(n, d);
  ModuleMap power;
  for (const Mat& b : phi->blocks) power.blocks.push_back(linfield::power(b, n));
  auto [kmod, kinc] = bqa::kernel(m, m, power);
  auto [imod, iinc] = bqa::submodule(m, power.blocks);
  ModuleMap kproj, iproj;
  for (std::size_t v = 0; v < m.dims().size(); ++v) {
    Mat inv = *inverse(linfield::hstack(kinc.blocks[v], iinc.blocks[v]));
    kproj.blocks.push_back(inv.block(0, 0, kmod.dim(v), m.dim(v)));
    iproj.blocks.push_back(inv.block(kmod.dim(v), 0, imod.dim(v), m.dim(v)));
  }
  std::vector<Piece> out;
  for (Piece& p : decompose_with_maps(kmod)) {
    out.push_back({std::move(p.module), bqa::compose(kinc, p.inclusion),
                   bqa::compose(p.projection, kproj)});
  }
  for (Piece& p : decompose_with_maps(imod)) {
    out.push_back({std::move(p.module), bqa::compose(iinc, p.inclusion),
                   bqa::compose(p.projection, iproj)});
  }
  return out;
}

std::vector<Summand> decompose(const Module& m) {
  std::vector<Summand> out;
  for (Piece& p : decompose_with_maps(m)) {
    bool found = false;
    for (Summand& s : out) {
      if (bqa::isomorphism_of_indecomposables(s.module, p.module)) {
        ++s.multiplicity;
        found = true;
        break;
      }
    }
    if (!found) out.push_back({std::move(p.module), 1});
  }
  return out;
}

bool is_indecomposable(const Module& m) { return !m.is_zero() && !find_split(m); }

bool same_iso_class(const Module& m, const Module& n) {
  bqa::require_same_algebra(m, n);
  if (m.dims() != n.dims()) return false;
  if (m == n) return true;
  std::vector<Summand> a = decompose(m), b = decompose(n);
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Summand& s : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || b[j].multiplicity != s.multiplicity) continue;
      if (bqa::isomorphism_of_indecomposables(s.module, b[j].module)) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Resolver
// ---------------------------------------------------------------------------

Resolver::Resolver(AlgebraPtr alg) : alg_(std::move(alg)) {}

namespace {

template <typename Map, typename Make>
const auto& memo(std::shared_mutex& mu, Map& cache, const std::string& key, Make make) {
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto value = make();
  std::unique_lock lock(mu);
  auto [it, inserted] = cache.try_emplace(key, std::move(value));
  return *it->second;
}

}  // namespace

const Resolver::Step& Resolver::cover_step(const Module& m) {
  return memo(mu_, covers_, m.key(), [&] {
    Approximation a = projective_cover(m);
    auto [k, inc] = bqa::kernel(a.object, m, a.map);
    return std::make_unique<Step>(Step{std::move(a), std::move(k), std::move(inc)});
  });
}

const Resolver::Step& Resolver::envelope_step(const Module& m) {
  return memo(mu_, envelopes_, m.key(), [&] {
    Approximation a = injective_envelope(m);
    bqa::Quotient q = bqa::cokernel(m, a.object, a.map);
    return std::make_unique<Step>(Step{std::move(a), std::move(q.module), std::move(q.projection)});
  });
}

const std::vector<Piece>& Resolver::pieces(const Module& m) {
  return memo(mu_, pieces_, m.key(),
              [&] { return std::make_unique<std::vector<Piece>>(decompose_with_maps(m)); });
}

Module Resolver::syzygy(const Module& m, std::size_t k) {
  Module cur = m;
  for (std::size_t i = 0; i < k && !cur.is_zero(); ++i) cur = cover_step(cur).next;
  return cur;
}

Module Resolver::cosyzygy(const Module& m, std::size_t k) {
  Module cur = m;
  for (std::size_t i = 0; i < k && !cur.is_zero(); ++i) cur = envelope_step(cur).next;
  return cur;
}

namespace {

std::size_t span_rank(const std::vector<ModuleMap>& maps, const PrimeField& f) {
  if (maps.empty()) return 0;
  Mat cols = bqa::flatten(maps.front(), f);
  for (std::size_t i = 1; i < maps.size(); ++i) cols = linfield::hstack(cols, bqa::flatten(maps[i], f));
  return rank(cols);
}

}  // namespace

std::size_t Resolver::ext_dim(const Module& m, const Module& n, std::size_t deg) {
  bqa::require_same_algebra(m, n);
  if (deg == 0) return bqa::hom_dim(m, n);
  Module k = syzygy(m, deg - 1);
  if (k.is_zero() || n.is_zero()) return 0;
  const Step& st = cover_step(k);
  const std::size_t h = bqa::hom_dim(st.next, n);
  if (h == 0) return 0;
  std::vector<ModuleMap> composites;
  for (const ModuleMap& f : bqa::hom_space(st.approx.object, n)) {
    composites.push_back(bqa::compose(f, st.next_map));
  }
  return h - span_rank(composites, m.field());
}

std::size_t Resolver::ext_dim_injective(const Module& m, const Module& n, std::size_t deg) {
  bqa::require_same_algebra(m, n);
  if (deg == 0) return bqa::hom_dim(m, n);
  Module l = cosyzygy(n, deg - 1);
  if (l.is_zero() || m.is_zero()) return 0;
  const Step& st = envelope_step(l);
  const std::size_t h = bqa::hom_dim(m, st.next);
  if (h == 0) return 0;
  std::vector<ModuleMap> composites;
  for (const ModuleMap& g : bqa::hom_space(m, st.approx.object)) {
    composites.push_back(bqa::compose(st.next_map, g));
  }
  return h - span_rank(composites, m.field());
}

namespace {

bool iso_or_false(const Module& a, const Module& b) {
  try {
    return same_iso_class(a, b);
  } catch (const UndecidedDecomposition&) {
    return false;
  }
}

template <typename Next, typename Terminal>
Dim dimension_by_iteration(const Module& m, std::size_t cap, Next next, Terminal terminal) {
  std::vector<Module> seq{m};
  for (std::size_t k = 0; k <= cap; ++k) {
    if (terminal(seq[k])) return Dim::finite(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (iso_or_false(seq[i], seq[k])) return Dim::infinite(i, k);
    }
    if (k < cap) seq.push_back(next(seq[k]));
  }
  return Dim::at_least(cap + 1);
}

}  // namespace

Dim Resolver::projective_dimension(const Module& m, std::size_t cap) {
  return dimension_by_iteration(
      m, cap, [&](const Module& x) { return cover_step(x).next; },
      [](const Module& x) { return x.is_zero() || is_projective(x); });
}

Dim Resolver::injective_dimension(const Module& m, std::size_t cap) {
  return dimension_by_iteration(
      m, cap, [&](const Module& x) { return envelope_step(x).next; },
      [](const Module& x) { return x.is_zero() || is_injective(x); });
}

Module syzygy(const Module& m, std::size_t k) {
  Resolver r(m.algebra_ptr());
  return r.syzygy(m, k);
}

Module cosyzygy(const Module& m, std::size_t k) {
  Resolver r(m.algebra_ptr());
  return r.cosyzygy(m, k);
}

std::size_t ext_dim(const Module& m, const Module& n, std::size_t deg) {
  Resolver r(m.algebra_ptr());
  return r.ext_dim(m, n, deg);
}

std::size_t ext_dim_injective(const Module& m, const Module& n, std::size_t deg) {
  Resolver r(m.algebra_ptr());
  return r.ext_dim_injective(m, n, deg);
}

// ---------------------------------------------------------------------------
// Resolutions
// ---------------------------------------------------------------------------

Resolution projective_resolution(Resolver& r, const Module& m, std::size_t length) {
  Resolution res;
  res.flavor = Resolution::Flavor::projective;
  res.resolved = m;
  Module cur = m;
  const Resolver::Step* prev = nullptr;
  for (std::size_t i = 0; i < length && !cur.is_zero(); ++i) {
    const Resolver::Step& st = r.cover_step(cur);
    res.terms.push_back(st.approx.object);
    if (prev) {
      res.maps.push_back(bqa::compose(prev->next_map, st.approx.map));
    } else {
      res.augmentation = st.approx.map;
    }
    prev = &st;
    cur = st.next;
  }
  if (!prev) {
    res.terms.push_back(Module::zero(m.algebra_ptr()));
    res.augmentation = bqa::zero_map(res.terms.front(), m);
  }
  return res;
}

Resolution injective_coresolution(Resolver& r, const Module& m, std::size_t length) {
  Resolution res;
  res.flavor = Resolution::Flavor::injective;
  res.resolved = m;
  Module cur = m;
  const Resolver::Step* prev = nullptr;
  for (std::size_t i = 0; i < length && !cur.is_zero(); ++i) {
    const Resolver::Step& st = r.envelope_step(cur);
    res.terms.push_back(st.approx.object);
    if (prev) {
      res.maps.push_back(bqa::compose(st.approx.map, prev->next_map));
    } else {
      res.augmentation = st.approx.map;
    }
    prev = &st;
    cur = st.next;
  }
  if (!prev) {
    res.terms.push_back(Module::zero(m.algebra_ptr()));
    res.augmentation = bqa::zero_map(m, res.terms.front());
  }
  return res;
}

bool is_valid_resolution(const Resolution& res) {
  const bool proj = res.flavor == Resolution::Flavor::projective;
  const std::size_t nt = res.terms.size();
  if (nt == 0 || res.maps.size() + 1 != nt) return false;
  for (const Module& t : res.terms) {
    if (proj ? !is_projective(t) : !is_injective(t)) return false;
  }
  if (proj) {
    if (!bqa::is_module_map(res.terms[0], res.resolved, res.augmentation) ||
        !bqa::is_surjective(res.augmentation)) {
      return false;
    }
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      if (!bqa::is_module_map(res.terms[i + 1], res.terms[i], res.maps[i])) return false;
      const ModuleMap& out = i == 0 ? res.augmentation : res.maps[i - 1];
      if (!bqa::is_zero_map(bqa::compose(out, res.maps[i]))) return false;
      for (std::size_t v = 0; v < res.resolved.dims().size(); ++v) {
        if (rank(res.maps[i].blocks[v]) != res.terms[i].dim(v) - rank(out.blocks[v])) return false;
      }
    }
  } else {
    if (!bqa::is_module_map(res.resolved, res.terms[0], res.augmentation) ||
        !bqa::is_injective(res.augmentation)) {
      return false;
    }
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      if (!bqa::is_module_map(res.terms[i], res.terms[i + 1], res.maps[i])) return false;
      const ModuleMap& in = i == 0 ? res.augmentation : res.maps[i - 1];
      if (!bqa::is_zero_map(bqa::compose(res.maps[i], in))) return false;
      for (std::size_t v = 0; v < res.resolved.dims().size(); ++v) {
        if (res.terms[i].dim(v) - rank(res.maps[i].blocks[v]) != rank(in.blocks[v])) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Conflation generation
// ---------------------------------------------------------------------------

std::vector<Conflation> generate_conflations(Resolver& r, const std::vector<Module>& objs,
                                             std::size_t max_count, unsigned seed) {
  std::vector<Conflation> nonsplit, split;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<unsigned> pick(0, objs.empty() ? 0 : objs.front().field().p() - 1);
  auto random_combo = [&](const Module& dom, const Module& cod, const std::vector<ModuleMap>& basis) {
    std::vector<Elem> coeffs(basis.size());
    for (Elem& c : coeffs) c = static_cast<Elem>(pick(rng));
    return bqa::linear_combination(dom, cod, basis, coeffs);
  };
  for (const Module& c : objs) {
    const Resolver::Step& cs = r.cover_step(c);
    const Conflation cover{cs.next, cs.approx.object, c, cs.next_map, cs.approx.map};
    for (const Module& a : objs) {
      split.push_back(split_conflation(a, c));
      if (cs.next.is_zero()) continue;
      auto basis = bqa::hom_space(cs.next, a);
      std::vector<ModuleMap> maps = basis;
      for (std::size_t t = 0; t < 2 && basis.size() > 1; ++t) maps.push_back(random_combo(cs.next, a, basis));
      for (const ModuleMap& g : maps) nonsplit.push_back(pushout_conflation(cover, a, g).conflation);
    }
  }
  for (const Module& a : objs) {
    const Resolver::Step& es = r.envelope_step(a);
    if (es.next.is_zero()) continue;
    const Conflation env{a, es.approx.object, es.next, es.approx.map, es.next_map};
    for (const Module& c : objs) {
      auto basis = bqa::hom_space(c, es.next);
      if (basis.empty()) continue;
      nonsplit.push_back(pullback_conflation(env, c, random_combo(c, es.next, basis)).conflation);
    }
  }
  std::vector<Conflation> out = std::move(nonsplit);
  out.insert(out.end(), split.begin(), split.end());
  if (out.size() > max_count) out.resize(max_count);
  const std::size_t base = out.size();
  if (base == 0) return out;
  std::uniform_int_distribution<std::size_t> which(0, base - 1);
  while (out.size() < max_count) {
    const Conflation& x = out[which(rng)];
    const Conflation& y = out[which(rng)];
    out.push_back(direct_sum(x, y));
  }
  return out;
}

}  // namespace cotlab::homalg
