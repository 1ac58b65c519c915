#include "cotlab/bqa.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "cotlab/error.hpp"

namespace cotlab::bqa {

using linfield::complete_basis;
using linfield::column_space;
using linfield::echelon;
using linfield::inverse;
using linfield::rank;
using linfield::rank_kernel;
using linfield::solve_linear;

std::size_t BoundQuiver::vertex_index(const std::string& id) const {
  auto it = std::find(vertices.begin(), vertices.end(), id);
  if (it == vertices.end()) throw MalformedInput("unknown vertex '" + id + "'");
  return static_cast<std::size_t>(it - vertices.begin());
}

std::size_t BoundQuiver::arrow_index(const std::string& id) const {
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i].id == id) return i;
  }
  throw MalformedInput("unknown arrow '" + id + "'");
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

std::shared_ptr<const Algebra> Algebra::create(PrimeField field,
                                               BoundQuiver quiver) {
  std::shared_ptr<Algebra> a(new Algebra(field, std::move(quiver)));
  a->compute_basis();
  return a;
}

namespace {

constexpr std::size_t kMaxPaths = 20000;

using ArrowList = std::vector<std::size_t>;

struct PathLevels {
  const BoundQuiver& q;
  // levels[L] = paths of length L, lexicographically ordered (L >= 1).
  std::vector<std::vector<ArrowList>> levels{{}};
  std::size_t total = 0;

  void ensure(std::size_t n) {
    while (levels.size() <= n) {
      std::vector<ArrowList> next;
      if (levels.size() == 1) {
        for (std::size_t a = 0; a < q.arrows.size(); ++a) next.push_back({a});
      } else {
        for (const ArrowList& p : levels.back()) {
          const std::size_t end = q.arrows[p.back()].tgt;
          for (std::size_t a = 0; a < q.arrows.size(); ++a) {
            if (q.arrows[a].src != end) continue;
            ArrowList e = p;
            e.push_back(a);
            next.push_back(std::move(e));
          }
        }
      }
      total += next.size();
      if (total > kMaxPaths) {
        throw CapExceeded("path enumeration exceeded " + std::to_string(kMaxPaths) +
                          " paths while computing the path basis");
      }
      levels.push_back(std::move(next));
    }
  }
  std::size_t src(const ArrowList& p) const { return q.arrows[p.front()].src; }
  std::size_t tgt(const ArrowList& p) const { return q.arrows[p.back()].tgt; }
};

struct RelationInfo {
  std::size_t src, tgt, min_len, max_len;
};

// Paths (possibly trivial, encoded as empty list + vertex) of length <= len
// ending at vertex v / starting at vertex v.
std::vector<ArrowList> paths_ending(const PathLevels& pl, std::size_t v,
                                    std::size_t len) {
  std::vector<ArrowList> out{{}};
  for (std::size_t l = 1; l <= len && l < pl.levels.size(); ++l) {
    for (const ArrowList& p : pl.levels[l]) {
      if (pl.tgt(p) == v) out.push_back(p);
    }
  }
  return out;
}

std::vector<ArrowList> paths_starting(const PathLevels& pl, std::size_t v,
                                      std::size_t len) {
  std::vector<ArrowList> out{{}};
  for (std::size_t l = 1; l <= len && l < pl.levels.size(); ++l) {
    for (const ArrowList& p : pl.levels[l]) {
      if (pl.src(p) == v) out.push_back(p);
    }
  }
  return out;
}

ArrowList concat(const ArrowList& a, const ArrowList& b, const ArrowList& c) {
  ArrowList r = a;
  r.insert(r.end(), b.begin(), b.end());
  r.insert(r.end(), c.begin(), c.end());
  return r;
}

}  // namespace

void Algebra::compute_basis() {
  const BoundQuiver& q = quiver_;
  const std::size_t nv = q.vertices.size();
  if (nv == 0) throw MalformedInput("algebra must be nonzero: quiver has no vertices");
  {
    std::set<std::string> seen(q.vertices.begin(), q.vertices.end());
    if (seen.size() != nv) throw MalformedInput("duplicate vertex id");
    std::set<std::string> aseen;
    for (const Arrow& a : q.arrows) {
      if (a.src >= nv || a.tgt >= nv) {
        throw MalformedInput("arrow '" + a.id + "' has an undeclared endpoint");
      }
      if (!aseen.insert(a.id).second) throw MalformedInput("duplicate arrow id " + a.id);
    }
  }

  // Normalise relations: merge repeated paths, drop zero terms, check shape.
  std::vector<Relation> rels;
  std::vector<RelationInfo> info;
  for (const Relation& r : q.relations) {
    std::map<ArrowList, Elem> merged;
    for (const PathTerm& t : r) {
      if (t.arrows.size() < 2) {
        throw MalformedInput("relation paths must have length >= 2");
      }
      for (std::size_t i = 0; i + 1 < t.arrows.size(); ++i) {
        if (t.arrows[i] >= q.arrows.size() || t.arrows[i + 1] >= q.arrows.size() ||
            q.arrows[t.arrows[i]].tgt != q.arrows[t.arrows[i + 1]].src) {
          throw MalformedInput("relation path is not composable");
        }
      }
      Elem& c = merged[t.arrows];
      c = field_.add(c, t.coeff);
    }
    Relation clean;
    for (auto& [path, c] : merged) {
      if (c != 0) clean.push_back({c, path});
    }
    if (clean.empty()) continue;
    RelationInfo ri{q.arrows[clean.front().arrows.front()].src,
                    q.arrows[clean.front().arrows.back()].tgt, SIZE_MAX, 0};
    for (const PathTerm& t : clean) {
      if (q.arrows[t.arrows.front()].src != ri.src ||
          q.arrows[t.arrows.back()].tgt != ri.tgt) {
        throw MalformedInput("relation mixes paths with different endpoints");
      }
      ri.min_len = std::min(ri.min_len, t.arrows.size());
      ri.max_len = std::max(ri.max_len, t.arrows.size());
    }
    rels.push_back(std::move(clean));
    info.push_back(ri);
  }

  std::size_t rel_len = 0;
  for (const RelationInfo& ri : info) rel_len += ri.max_len;
  const std::size_t cap = std::max<std::size_t>(2, 2 * (rel_len + q.arrows.size()));

  PathLevels pl{q};
  std::size_t m_found = 0;
  for (std::size_t n = 1; n <= cap && m_found == 0; ++n) {
    pl.ensure(n);
    // Index of each nontrivial path of length <= n.
    std::map<ArrowList, std::size_t> col;
    for (std::size_t l = 1; l <= n; ++l) {
      for (const ArrowList& p : pl.levels[l]) col.emplace(p, col.size());
    }
    std::vector<std::vector<std::pair<std::size_t, Elem>>> gens;
    for (std::size_t r = 0; r < rels.size(); ++r) {
      if (info[r].max_len > n) continue;
      const std::size_t slack = n - info[r].max_len;
      for (const ArrowList& u : paths_ending(pl, info[r].src, slack)) {
        for (const ArrowList& v : paths_starting(pl, info[r].tgt, slack - u.size())) {
          std::vector<std::pair<std::size_t, Elem>> g;
          for (const PathTerm& t : rels[r]) g.emplace_back(col.at(concat(u, t.arrows, v)), t.coeff);
          gens.push_back(std::move(g));
        }
      }
    }
    std::set<std::size_t> in_ideal;
    if (!gens.empty()) {
      Mat g(field_, gens.size(), col.size());
      for (std::size_t i = 0; i < gens.size(); ++i) {
        for (auto [c, e] : gens[i]) g(i, c) = field_.add(g(i, c), e);
      }
      linfield::Echelon e = echelon(g);
      for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        bool unit = true;
        for (std::size_t c = 0; c < col.size() && unit; ++c) {
          if (c != e.pivots[i] && e.rref(i, c) != 0) unit = false;
        }
        if (unit) in_ideal.insert(e.pivots[i]);
      }
    }
    for (std::size_t m = 1; m <= n; ++m) {
      bool all = true;
      for (const ArrowList& p : pl.levels[m]) {
        if (!in_ideal.count(col.at(p))) {
          all = false;
          break;
        }
      }
      if (all) {
        m_found = m;
        break;
      }
    }
  }
  if (m_found == 0) {
    throw NonAdmissibleIdeal("no power of the arrow ideal lies in the relation ideal "
                             "within path length " + std::to_string(cap));
  }
  nil_index_ = m_found;

  // Quotient of paths of length < m by the truncated ideal.
  const std::size_t m = m_found;
  pl.ensure(m > 0 ? m - 1 : 0);
  std::vector<ArrowList> paths;  // path order: length, then lexicographic
  for (std::size_t l = 1; l < m; ++l) {
    for (const ArrowList& p : pl.levels[l]) paths.push_back(p);
  }
  std::map<ArrowList, std::size_t> pidx;
  for (std::size_t i = 0; i < paths.size(); ++i) pidx.emplace(paths[i], i);
  const std::size_t np = paths.size();
  // Columns in reverse path order so that pivots land on the longest paths
  // and the residue basis prefers short paths.
  auto column_of = [np](std::size_t path_index) { return np - 1 - path_index; };

  std::vector<std::vector<std::pair<std::size_t, Elem>>> gens;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    if (info[r].min_len >= m) continue;
    const std::size_t slack = m - 1 - info[r].min_len;
    for (const ArrowList& u : paths_ending(pl, info[r].src, slack)) {
      for (const ArrowList& v : paths_starting(pl, info[r].tgt, slack - u.size())) {
        std::vector<std::pair<std::size_t, Elem>> g;
        for (const PathTerm& t : rels[r]) {
          if (u.size() + t.arrows.size() + v.size() >= m) continue;
          g.emplace_back(column_of(pidx.at(concat(u, t.arrows, v))), t.coeff);
        }
        if (!g.empty()) gens.push_back(std::move(g));
      }
    }
  }
  std::vector<bool> pivot_col(np, false);
  linfield::Echelon ech{Mat(field_, 0, np), {}};
  if (!gens.empty() && np > 0) {
    Mat g(field_, gens.size(), np);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (auto [c, e] : gens[i]) g(i, c) = field_.add(g(i, c), e);
    }
    ech = echelon(g);
    for (std::size_t c : ech.pivots) pivot_col[c] = true;
  }

  basis_.clear();
  for (std::size_t v = 0; v < nv; ++v) basis_.push_back({v, v, {}});
  std::vector<std::size_t> basis_of_path(np, SIZE_MAX);
  for (std::size_t i = 0; i < np; ++i) {
    if (!pivot_col[column_of(i)]) {
      basis_of_path[i] = basis_.size();
      basis_.push_back({pl.src(paths[i]), pl.tgt(paths[i]), paths[i]});
    }
  }
  reduction_.clear();
  for (std::size_t i = 0; i < np; ++i) {
    Coords c;
    if (basis_of_path[i] != SIZE_MAX) {
      c.emplace_back(basis_of_path[i], 1);
    } else {
      const std::size_t pc = column_of(i);
      std::size_t row = 0;
      while (ech.pivots[row] != pc) ++row;
      for (std::size_t cc = 0; cc < np; ++cc) {
        if (cc == pc || ech.rref(row, cc) == 0) continue;
        const std::size_t path_index = np - 1 - cc;
        c.emplace_back(basis_of_path[path_index], field_.neg(ech.rref(row, cc)));
      }
      std::sort(c.begin(), c.end());
    }
    reduction_.emplace(paths[i], std::move(c));
  }

  between_.assign(nv * nv, {});
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    between_[basis_[b].src * nv + basis_[b].tgt].push_back(b);
  }
  const std::size_t d = basis_.size();
  mult_.assign(d * d, {});
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t r = 0; r < d; ++r) {
      if (basis_[p].tgt != basis_[r].src) continue;
      ArrowList cat = basis_[p].arrows;
      cat.insert(cat.end(), basis_[r].arrows.begin(), basis_[r].arrows.end());
      mult_[p * d + r] = reduce(basis_[p].src, cat);
    }
  }
  canonical_ = algebra_to_json(*this).dump();
}

Coords Algebra::reduce(std::size_t src, std::span<const std::size_t> arrows) const {
  if (arrows.empty()) return {{src, 1}};
  if (arrows.size() >= nil_index_) return {};
  auto it = reduction_.find(ArrowList(arrows.begin(), arrows.end()));
  if (it == reduction_.end()) throw MalformedInput("path is not composable");
  return it->second;
}

std::string Algebra::path_name(const Path& p) const {
  if (p.arrows.empty()) return "e" + quiver_.vertices[p.src];
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += "*";
    s += quiver_.arrows[p.arrows[i]].id;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Module
// ---------------------------------------------------------------------------

Module::Module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Mat> maps)
    : alg_(std::move(alg)), dims_(std::move(dims)), maps_(std::move(maps)) {
  if (!alg_) throw MalformedInput("module without algebra");
  const BoundQuiver& q = alg_->quiver();
  if (dims_.size() != q.vertices.size()) {
    throw MalformedInput("module dims do not match the number of vertices");
  }
  if (maps_.size() != q.arrows.size()) {
    throw MalformedInput("module maps do not match the number of arrows");
  }
  for (std::size_t a = 0; a < maps_.size(); ++a) {
    const Arrow& ar = q.arrows[a];
    if (maps_[a].field() != alg_->field() || maps_[a].rows() != dims_[ar.tgt] ||
        maps_[a].cols() != dims_[ar.src]) {
      throw MalformedInput("arrow map for '" + ar.id + "' has the wrong shape");
    }
  }
  if (!satisfies_relations(*alg_, dims_, maps_)) throw MalformedInput("module violates a relation");
}

Module Module::zero(AlgebraPtr alg) {
  const BoundQuiver& q = alg->quiver();
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) maps.emplace_back(alg->field(), 0, 0);
  return Module(alg, std::vector<std::size_t>(q.vertices.size(), 0), std::move(maps));
}

Module Module::simple(AlgebraPtr alg, std::size_t v) {
  const BoundQuiver& q = alg->quiver();
  std::vector<std::size_t> dims(q.vertices.size(), 0);
  dims[v] = 1;
  std::vector<Mat> maps;
  for (const Arrow& a : q.arrows) maps.emplace_back(alg->field(), dims[a.tgt], dims[a.src]);
  return Module(alg, std::move(dims), std::move(maps));
}

std::size_t Module::total_dim() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

Mat Module::path_action(std::size_t src, std::span<const std::size_t> arrows) const {
  Mat acc = Mat::identity(alg_->field(), dims_[src]);
  for (std::size_t a : arrows) acc = maps_[a] * acc;
  return acc;
}

Mat Module::basis_action(std::size_t b) const {
  return path_action(alg_->basis()[b]);
}

std::string Module::key() const {
  std::string k;
  k.reserve(2 * dims_.size() + 64);
  for (std::size_t d : dims_) {
    k.push_back(static_cast<char>(d & 0xff));
    k.push_back(static_cast<char>((d >> 8) & 0xff));
  }
  k.push_back('|');
  for (const Mat& m : maps_) {
    for (Elem e : m.entries()) k.push_back(static_cast<char>(e));
  }
  return k;
}

bool satisfies_relations(const Algebra& a, const std::vector<std::size_t>& dims,
                         const std::vector<Mat>& maps) {
  const BoundQuiver& q = a.quiver();
  for (const Relation& r : q.relations) {
    if (r.empty()) continue;
    const std::size_t s = q.arrows[r.front().arrows.front()].src;
    const std::size_t t = q.arrows[r.front().arrows.back()].tgt;
    Mat acc(a.field(), dims[t], dims[s]);
    for (const PathTerm& term : r) {
      Mat act = Mat::identity(a.field(), dims[s]);
      for (std::size_t x : term.arrows) act = maps[x] * act;
      acc = acc + act.scaled(term.coeff);
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

void require_same_algebra(const Module& m, const Module& n) {
  if (!m.algebra_ptr() || !n.algebra_ptr() || !same_algebra(m.algebra(), n.algebra())) {
    throw IncompatibleInput("modules over different algebras");
  }
}

bool is_module_map(const Module& dom, const Module& cod, const ModuleMap& f) {
  const Algebra& a = dom.algebra();
  if (f.blocks.size() != a.num_vertices()) return false;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    if (f.blocks[v].rows() != cod.dim(v) || f.blocks[v].cols() != dom.dim(v)) return false;
  }
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const Arrow& ar = a.quiver().arrows[i];
    if (!(cod.arrow_map(i) * f.blocks[ar.src] == f.blocks[ar.tgt] * dom.arrow_map(i))) {
      return false;
    }
  }
  return true;
}

ModuleMap identity_map(const Module& m) {
  ModuleMap f;
  for (std::size_t d : m.dims()) f.blocks.push_back(Mat::identity(m.field(), d));
  return f;
}

ModuleMap zero_map(const Module& dom, const Module& cod) {
  ModuleMap f;
  for (std::size_t v = 0; v < dom.dims().size(); ++v) {
    f.blocks.emplace_back(dom.field(), cod.dim(v), dom.dim(v));
  }
  return f;
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (g.blocks.size() != f.blocks.size()) throw IncompatibleInput("compose: vertex count");
  ModuleMap h;
  for (std::size_t v = 0; v < f.blocks.size(); ++v) h.blocks.push_back(g.blocks[v] * f.blocks[v]);
  return h;
}

ModuleMap add(const ModuleMap& f, const ModuleMap& g) {
  ModuleMap h;
  for (std::size_t v = 0; v < f.blocks.size(); ++v) h.blocks.push_back(f.blocks[v] + g.blocks[v]);
  return h;
}

ModuleMap scale(const ModuleMap& f, Elem s) {
  ModuleMap h;
  for (const Mat& b : f.blocks) h.blocks.push_back(b.scaled(s));
  return h;
}

ModuleMap linear_combination(const Module& dom, const Module& cod,
                             std::span<const ModuleMap> basis,
                             std::span<const Elem> coeffs) {
  ModuleMap acc = zero_map(dom, cod);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t v = 0; v < acc.blocks.size(); ++v) {
      acc.blocks[v] = acc.blocks[v] + basis[i].blocks[v].scaled(coeffs[i]);
    }
  }
  return acc;
}

bool is_zero_map(const ModuleMap& f) {
  return std::all_of(f.blocks.begin(), f.blocks.end(), [](const Mat& b) { return b.is_zero(); });
}

bool is_injective(const ModuleMap& f) {
  return std::all_of(f.blocks.begin(), f.blocks.end(),
                     [](const Mat& b) { return rank(b) == b.cols(); });
}

bool is_surjective(const ModuleMap& f) {
  return std::all_of(f.blocks.begin(), f.blocks.end(),
                     [](const Mat& b) { return rank(b) == b.rows(); });
}

bool is_bijective(const ModuleMap& f) {
  return std::all_of(f.blocks.begin(), f.blocks.end(), [](const Mat& b) {
    return b.is_square() && rank(b) == b.rows();
  });
}

std::optional<ModuleMap> inverse_map(const ModuleMap& f) {
  ModuleMap g;
  for (const Mat& b : f.blocks) {
    auto inv = inverse(b);
    if (!inv) return std::nullopt;
    g.blocks.push_back(std::move(*inv));
  }
  return g;
}

Mat flatten(const ModuleMap& f, const PrimeField& field) {
  std::vector<Elem> v;
  for (const Mat& b : f.blocks) v.insert(v.end(), b.entries().begin(), b.entries().end());
  const std::size_t n = v.size();
  return Mat(field, n, 1, std::move(v));
}

std::vector<ModuleMap> hom_space(const Module& m, const Module& n) {
  require_same_algebra(m, n);
  const Algebra& a = m.algebra();
  const PrimeField& f = a.field();
  const std::size_t nv = a.num_vertices();
  std::vector<std::size_t> offset(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) offset[v + 1] = offset[v] + n.dim(v) * m.dim(v);
  const std::size_t unknowns = offset[nv];
  if (unknowns == 0) return {};
  std::size_t eqs = 0;
  for (const Arrow& ar : a.quiver().arrows) eqs += n.dim(ar.tgt) * m.dim(ar.src);
  Mat sys(f, eqs, unknowns);
  std::size_t row = 0;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const Arrow& ar = a.quiver().arrows[i];
    const Mat& na = n.arrow_map(i);
    const Mat& ma = m.arrow_map(i);
    const std::size_t ds = m.dim(ar.src), dt = n.dim(ar.tgt);
    const std::size_t ns = n.dim(ar.src), mt = m.dim(ar.tgt);
    for (std::size_t r = 0; r < dt; ++r) {
      for (std::size_t c = 0; c < ds; ++c, ++row) {
        // (N_a f_s)[r][c] = sum_k N_a[r][k] f_s[k][c]
        for (std::size_t k = 0; k < ns; ++k) {
          Elem& e = sys(row, offset[ar.src] + k * ds + c);
          e = f.add(e, na(r, k));
        }
        // -(f_t M_a)[r][c] = -sum_k f_t[r][k] M_a[k][c]
        for (std::size_t k = 0; k < mt; ++k) {
          Elem& e = sys(row, offset[ar.tgt] + r * mt + k);
          e = f.sub(e, ma(k, c));
        }
      }
    }
  }
  const Mat kb = rank_kernel(sys).kernel_basis;
  std::vector<ModuleMap> out;
  out.reserve(kb.cols());
  for (std::size_t j = 0; j < kb.cols(); ++j) {
    ModuleMap g;
    for (std::size_t v = 0; v < nv; ++v) {
      Mat b(f, n.dim(v), m.dim(v));
      for (std::size_t r = 0; r < n.dim(v); ++r) {
        for (std::size_t c = 0; c < m.dim(v); ++c) b(r, c) = kb(offset[v] + r * m.dim(v) + c, j);
      }
      g.blocks.push_back(std::move(b));
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::size_t hom_dim(const Module& m, const Module& n) { return hom_space(m, n).size(); }

// ---------------------------------------------------------------------------
// Sums, sub- and quotient modules
// ---------------------------------------------------------------------------

DirectSum direct_sum(std::span<const Module> parts) {
  if (parts.empty()) throw MalformedInput("direct_sum of nothing");
  const AlgebraPtr& alg = parts.front().algebra_ptr();
  for (const Module& p : parts) require_same_algebra(parts.front(), p);
  const Algebra& a = *alg;
  const PrimeField& f = a.field();
  const std::size_t nv = a.num_vertices();
  std::vector<std::size_t> dims(nv, 0);
  for (const Module& p : parts) {
    for (std::size_t v = 0; v < nv; ++v) dims[v] += p.dim(v);
  }
  std::vector<Mat> maps;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const Arrow& ar = a.quiver().arrows[i];
    Mat big(f, dims[ar.tgt], dims[ar.src]);
    std::size_t r0 = 0, c0 = 0;
    for (const Module& p : parts) {
      big.set_block(r0, c0, p.arrow_map(i));
      r0 += p.dim(ar.tgt);
      c0 += p.dim(ar.src);
    }
    maps.push_back(std::move(big));
  }
  DirectSum out{Module(alg, dims, std::move(maps)), {}, {}};
  std::vector<std::size_t> off(nv, 0);
  for (const Module& p : parts) {
    ModuleMap inc, proj;
    for (std::size_t v = 0; v < nv; ++v) {
      Mat in(f, dims[v], p.dim(v));
      Mat pr(f, p.dim(v), dims[v]);
      for (std::size_t k = 0; k < p.dim(v); ++k) {
        in(off[v] + k, k) = 1;
        pr(k, off[v] + k) = 1;
      }
      inc.blocks.push_back(std::move(in));
      proj.blocks.push_back(std::move(pr));
      off[v] += p.dim(v);
    }
    out.inclusions.push_back(std::move(inc));
    out.projections.push_back(std::move(proj));
  }
  return out;
}

Module direct_sum(const Module& a, const Module& b) {
  std::vector<Module> parts{a, b};
  return direct_sum(parts).sum;
}

ModuleMap direct_sum_map(const ModuleMap& a, const ModuleMap& b) {
  ModuleMap h;
  for (std::size_t v = 0; v < a.blocks.size(); ++v) {
    h.blocks.push_back(linfield::diag(a.blocks[v], b.blocks[v]));
  }
  return h;
}

ModuleMap row_map(std::span<const ModuleMap> parts) {
  ModuleMap h = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    for (std::size_t v = 0; v < h.blocks.size(); ++v) {
      h.blocks[v] = linfield::hstack(h.blocks[v], parts[i].blocks[v]);
    }
  }
  return h;
}

ModuleMap column_map(std::span<const ModuleMap> parts) {
  ModuleMap h = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    for (std::size_t v = 0; v < h.blocks.size(); ++v) {
      h.blocks[v] = linfield::vstack(h.blocks[v], parts[i].blocks[v]);
    }
  }
  return h;
}

std::pair<Module, ModuleMap> submodule(const Module& m, const std::vector<Mat>& bases) {
  const Algebra& a = m.algebra();
  std::vector<Mat> b;
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    b.push_back(column_space(bases[v]));
    dims.push_back(b.back().cols());
  }
  std::vector<Mat> maps;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const Arrow& ar = a.quiver().arrows[i];
    Mat rhs = m.arrow_map(i) * b[ar.src];
    auto x = solve_linear(b[ar.tgt], rhs);
    if (!x) throw MalformedInput("submodule: spans are not closed under the arrows");
    maps.push_back(std::move(*x));
  }
  Module sub(m.algebra_ptr(), std::move(dims), std::move(maps));
  return {std::move(sub), ModuleMap{std::move(b)}};
}

Quotient quotient(const Module& m, const std::vector<Mat>& spans) {
  const Algebra& a = m.algebra();
  const PrimeField& f = a.field();
  std::vector<Mat> proj, sect;
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    const std::size_t n = m.dim(v);
    Mat u = spans[v].cols() ? column_space(spans[v]) : Mat(f, n, 0);
    Mat t = complete_basis(u);
    Mat tinv = *inverse(t);
    const std::size_t r = u.cols();
    proj.push_back(tinv.block(r, 0, n - r, n));
    sect.push_back(t.block(0, r, n, n - r));
    dims.push_back(n - r);
  }
  std::vector<Mat> maps;
  for (std::size_t i = 0; i < a.num_arrows(); ++i) {
    const Arrow& ar = a.quiver().arrows[i];
    maps.push_back(proj[ar.tgt] * m.arrow_map(i) * sect[ar.src]);
  }
  Module q(m.algebra_ptr(), std::move(dims), std::move(maps));
  return {std::move(q), ModuleMap{std::move(proj)}, std::move(sect)};
}

std::pair<Module, ModuleMap> kernel(const Module& dom, const Module& cod, const ModuleMap& f) {
  require_same_algebra(dom, cod);
  std::vector<Mat> k;
  for (const Mat& b : f.blocks) k.push_back(rank_kernel(b).kernel_basis);
  return submodule(dom, k);
}

Quotient cokernel(const Module& dom, const Module& cod, const ModuleMap& f) {
  require_same_algebra(dom, cod);
  return quotient(cod, f.blocks);
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

std::optional<ModuleMap> isomorphism_of_indecomposables(const Module& m, const Module& n) {
  require_same_algebra(m, n);
  if (m.dims() != n.dims()) return std::nullopt;
  if (m.is_zero()) return identity_map(m);
  for (ModuleMap& f : hom_space(m, n)) {
    if (is_bijective(f)) return std::move(f);
  }
  return std::nullopt;
}

IsoResult is_isomorphic(const Module& m, const Module& n) {
  require_same_algebra(m, n);
  if (m.dims() != n.dims()) return {std::nullopt, true};
  if (m.is_zero()) return {identity_map(m), true};
  if (m == n) return {identity_map(m), true};
  const auto basis = hom_space(m, n);
  const std::size_t d = basis.size();
  if (d == 0) return {std::nullopt, true};
  // Necessary conditions: all four Hom dimensions agree.
  const std::size_t e_m = hom_dim(m, m), e_n = hom_dim(n, n), back = hom_dim(n, m);
  if (e_m != d || e_n != d || back != d) return {std::nullopt, true};
  for (const ModuleMap& f : basis) {
    if (is_bijective(f)) return {f, true};
  }
  const unsigned p = m.field().p();
  std::vector<Elem> coeffs(d, 0);
  std::mt19937_64 rng(0x5eed0000ULL + d * 131 + m.total_dim());
  std::uniform_int_distribution<unsigned> pick(0, p - 1);
  auto try_random = [&](std::size_t trials) -> std::optional<ModuleMap> {
    for (std::size_t t = 0; t < trials; ++t) {
      for (Elem& c : coeffs) c = static_cast<Elem>(pick(rng));
      ModuleMap g = linear_combination(m, n, basis, coeffs);
      if (is_bijective(g)) return g;
    }
    return std::nullopt;
  };
  if (auto g = try_random(4 * d)) return {std::move(*g), true};

  double space = 1.0;
  for (std::size_t i = 0; i < d; ++i) space *= p;
  if (space <= 531441.0) {  // 3^12
    std::fill(coeffs.begin(), coeffs.end(), Elem{0});
    while (true) {
      std::size_t i = 0;
      while (i < d && coeffs[i] == p - 1) coeffs[i++] = 0;
      if (i == d) break;
      ++coeffs[i];
      ModuleMap g = linear_combination(m, n, basis, coeffs);
      if (is_bijective(g)) return {std::move(g), true};
    }
    return {std::nullopt, true};
  }
  if (auto g = try_random(8 * d)) return {std::move(*g), true};
  return {std::nullopt, false};
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {
std::string id_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("identifier must be a string or integer");
}

template <typename F>
auto wrap_parse(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}
}  // namespace

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(unsigned{m(r, c)});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const PrimeField& f, const Json& j, std::size_t rows, std::size_t cols) {
  return wrap_parse([&] {
    if (!j.is_array() || j.size() != rows) {
      throw MalformedInput("matrix has " + std::to_string(j.is_array() ? j.size() : 0) +
                           " rows, expected " + std::to_string(rows));
    }
    Mat m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) {
        throw MalformedInput("matrix row has wrong length, expected " + std::to_string(cols));
      }
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.reduce(j[r][c].get<long long>());
    }
    return m;
  });
}

std::shared_ptr<const Algebra> parse_algebra(const Json& desc) {
  return wrap_parse([&] {
    if (!desc.is_object()) throw ParseError("algebra description must be an object");
    PrimeField f(desc.at("field").get<unsigned>());
    BoundQuiver q;
    for (const Json& v : desc.at("vertices")) q.vertices.push_back(id_string(v));
    if (desc.contains("arrows")) {
      for (const Json& a : desc.at("arrows")) {
        q.arrows.push_back({id_string(a.at("id")), q.vertex_index(id_string(a.at("src"))),
                            q.vertex_index(id_string(a.at("tgt")))});
      }
    }
    if (desc.contains("relations")) {
      for (const Json& r : desc.at("relations")) {
        if (!r.is_array()) throw ParseError("relation must be an array of terms");
        Relation rel;
        for (const Json& t : r) {
          PathTerm term;
          term.coeff = f.reduce(t.contains("coeff") ? t.at("coeff").get<long long>() : 1);
          for (const Json& a : t.at("path")) term.arrows.push_back(q.arrow_index(id_string(a)));
          rel.push_back(std::move(term));
        }
        q.relations.push_back(std::move(rel));
      }
    }
    return Algebra::create(f, std::move(q));
  });
}

Json algebra_to_json(const Algebra& a) {
  const BoundQuiver& q = a.quiver();
  Json j;
  j["field"] = a.field().p();
  j["vertices"] = q.vertices;
  Json arrows = Json::array();
  for (const Arrow& ar : q.arrows) {
    arrows.push_back({{"id", ar.id}, {"src", q.vertices[ar.src]}, {"tgt", q.vertices[ar.tgt]}});
  }
  j["arrows"] = std::move(arrows);
  Json rels = Json::array();
  for (const Relation& r : q.relations) {
    Json terms = Json::array();
    for (const PathTerm& t : r) {
      Json path = Json::array();
      for (std::size_t x : t.arrows) path.push_back(q.arrows[x].id);
      terms.push_back({{"coeff", unsigned{t.coeff}}, {"path", std::move(path)}});
    }
    rels.push_back(std::move(terms));
  }
  j["relations"] = std::move(rels);
  return j;
}

Module parse_module(const AlgebraPtr& alg, const Json& desc) {
  return wrap_parse([&] {
    const BoundQuiver& q = alg->quiver();
    std::vector<std::size_t> dims(q.vertices.size(), 0);
    const Json& jd = desc.at("dims");
    if (jd.is_array()) {
      if (jd.size() != dims.size()) throw MalformedInput("dims array has wrong length");
      for (std::size_t v = 0; v < dims.size(); ++v) dims[v] = jd[v].get<std::size_t>();
    } else {
      for (auto it = jd.begin(); it != jd.end(); ++it) {
        dims[q.vertex_index(it.key())] = it.value().get<std::size_t>();
      }
    }
    std::vector<Mat> maps;
    for (const Arrow& ar : q.arrows) {
      const Json* jm = nullptr;
      if (desc.contains("arrows") && desc.at("arrows").contains(ar.id)) jm = &desc.at("arrows").at(ar.id);
      maps.push_back(jm ? mat_from_json(alg->field(), *jm, dims[ar.tgt], dims[ar.src])
                        : Mat(alg->field(), dims[ar.tgt], dims[ar.src]));
    }
    return Module(alg, std::move(dims), std::move(maps));
  });
}

Json module_to_json(const Module& m) {
  const BoundQuiver& q = m.algebra().quiver();
  Json j;
  Json dims = Json::object();
  for (std::size_t v = 0; v < q.vertices.size(); ++v) dims[q.vertices[v]] = m.dim(v);
  j["dims"] = std::move(dims);
  Json arrows = Json::object();
  for (std::size_t a = 0; a < q.arrows.size(); ++a) arrows[q.arrows[a].id] = mat_to_json(m.arrow_map(a));
  j["arrows"] = std::move(arrows);
  return j;
}

ModuleMap parse_map(const Module& dom, const Module& cod, const Json& desc) {
  return wrap_parse([&] {
    const BoundQuiver& q = dom.algebra().quiver();
    ModuleMap f;
    for (std::size_t v = 0; v < q.vertices.size(); ++v) {
      const Json& jb = desc.at("blocks");
      f.blocks.push_back(jb.contains(q.vertices[v])
                             ? mat_from_json(dom.field(), jb.at(q.vertices[v]), cod.dim(v), dom.dim(v))
                             : Mat(dom.field(), cod.dim(v), dom.dim(v)));
    }
    return f;
  });
}

Json map_to_json(const Module& dom, const ModuleMap& f) {
  const BoundQuiver& q = dom.algebra().quiver();
  Json blocks = Json::object();
  for (std::size_t v = 0; v < q.vertices.size(); ++v) blocks[q.vertices[v]] = mat_to_json(f.blocks[v]);
  return Json{{"blocks", std::move(blocks)}};
}

}  // namespace cotlab::bqa
