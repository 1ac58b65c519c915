#include "cotlab/universe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "cotlab/error.hpp"

namespace cotlab::universe {

using bqa::Elem;
using bqa::Mat;
using homalg::indecomposable_injective;
using homalg::indecomposable_projective;

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void dimension_vectors(std::size_t nv, std::size_t total, std::vector<std::size_t>& cur,
                       std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == nv) {
    std::size_t s = 0;
    for (std::size_t d : cur) s += d;
    if (s == total) out.push_back(cur);
    return;
  }
  std::size_t used = 0;
  for (std::size_t d : cur) used += d;
  for (std::size_t d = 0; d + used <= total; ++d) {
    cur.push_back(d);
    dimension_vectors(nv, total, cur, out);
    cur.pop_back();
  }
}

// Support vertices joined by nonzero arrow maps form a connected graph.
bool connected_support(const bqa::Algebra& a, const std::vector<std::size_t>& dims,
                       const std::vector<Mat>& maps) {
  const std::size_t nv = dims.size();
  std::vector<std::size_t> parent(nv);
  for (std::size_t v = 0; v < nv; ++v) parent[v] = v;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].empty() || maps[i].is_zero()) continue;
    const bqa::Arrow& ar = a.quiver().arrows[i];
    parent[find(ar.src)] = find(ar.tgt);
  }
  std::size_t root = SIZE_MAX;
  for (std::size_t v = 0; v < nv; ++v) {
    if (dims[v] == 0) continue;
    if (root == SIZE_MAX) {
      root = find(v);
    } else if (find(v) != root) {
      return false;
    }
  }
  return true;
}

struct Invariant {
  std::vector<std::size_t> top, soc, ranks;
  friend bool operator==(const Invariant&, const Invariant&) = default;
};

Invariant invariant_of(const Module& m) {
  Invariant inv{homalg::top_dims(m), homalg::socle_dims(m), {}};
  for (const Mat& x : m.arrow_maps()) inv.ranks.push_back(linfield::rank(x));
  return inv;
}

std::vector<Module> enumerate_dimvec(const bqa::AlgebraPtr& alg, const std::vector<std::size_t>& dims) {
  const bqa::Algebra& a = *alg;
  const bqa::PrimeField& f = a.field();
  const unsigned p = f.p();
  std::vector<std::size_t> offsets{0};
  for (const bqa::Arrow& ar : a.quiver().arrows) {
    offsets.push_back(offsets.back() + dims[ar.src] * dims[ar.tgt]);
  }
  const std::size_t entries = offsets.back();
  std::vector<Elem> digits(entries, 0);
  std::vector<Module> found;
  std::vector<Invariant> found_inv;
  while (true) {
    std::vector<Mat> maps;
    for (std::size_t i = 0; i < a.num_arrows(); ++i) {
      const bqa::Arrow& ar = a.quiver().arrows[i];
      std::vector<Elem> e(digits.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                          digits.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
      maps.emplace_back(f, dims[ar.tgt], dims[ar.src], std::move(e));
    }
    if (bqa::satisfies_relations(a, dims, maps) && connected_support(a, dims, maps)) {
      Module m(alg, dims, std::move(maps));
      Invariant inv = invariant_of(m);
      bool duplicate = false;
      for (std::size_t k = 0; k < found.size() && !duplicate; ++k) {
        if (found_inv[k] == inv && bqa::isomorphism_of_indecomposables(found[k], m)) duplicate = true;
      }
      if (!duplicate && homalg::is_indecomposable(m)) {
        found.push_back(std::move(m));
        found_inv.push_back(std::move(inv));
      }
    }
    std::size_t i = 0;
    while (i < entries && digits[i] == p - 1) digits[i++] = 0;
    if (i == entries) break;
    ++digits[i];
  }
  return found;
}

std::optional<std::string> cache_directory(const EnumerateOptions& opts) {
  if (opts.cache_dir) {
    if (opts.cache_dir->empty()) return std::nullopt;
    return opts.cache_dir;
  }
  if (const char* env = std::getenv("COTLAB_CACHE_DIR"); env && *env) return std::string(env);
  return std::nullopt;
}

std::size_t total_dim_of_projective(const bqa::Algebra& a, std::size_t v) {
  std::size_t s = 0;
  for (std::size_t j = 0; j < a.num_vertices(); ++j) s += a.basis_between(v, j).size();
  return s;
}

std::size_t total_dim_of_injective(const bqa::Algebra& a, std::size_t v) {
  std::size_t s = 0;
  for (std::size_t j = 0; j < a.num_vertices(); ++j) s += a.basis_between(j, v).size();
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

Universe::Universe(AlgebraPtr alg, std::size_t max_dim, Provenance prov, std::vector<Module> indecs)
    : alg_(std::move(alg)),
      max_dim_(max_dim),
      provenance_(prov),
      indecs_(std::move(indecs)),
      resolver_(std::make_unique<homalg::Resolver>(alg_)) {
  const bqa::Algebra& a = *alg_;
  const std::size_t nv = a.num_vertices();
  labels_.assign(indecs_.size(), "");
  auto vname = [&](std::size_t v) { return a.quiver().vertices[v]; };
  for (std::size_t v = 0; v < nv; ++v) {
    auto i = locate(Module::simple(alg_, v));
    if (i && labels_[*i].empty()) labels_[*i] = "S(" + vname(v) + ")";
  }
  for (std::size_t v = 0; v < nv; ++v) {
    auto i = locate(indecomposable_projective(alg_, v));
    if (!i) throw Error("universe misses the indecomposable projective at vertex " + vname(v));
    proj_.push_back(*i);
    if (labels_[*i].empty()) labels_[*i] = "P(" + vname(v) + ")";
  }
  for (std::size_t v = 0; v < nv; ++v) {
    auto i = locate(indecomposable_injective(alg_, v));
    if (!i) throw Error("universe misses the indecomposable injective at vertex " + vname(v));
    inj_.push_back(*i);
    if (labels_[*i].empty()) labels_[*i] = "I(" + vname(v) + ")";
  }
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t i = 0; i < indecs_.size(); ++i) {
    if (!labels_[i].empty()) continue;
    std::string s = "M[";
    for (std::size_t v = 0; v < nv; ++v) s += (v ? "," : "") + std::to_string(indecs_[i].dim(v));
    s += "]";
    const std::size_t k = seen[indecs_[i].dims()]++;
    labels_[i] = s + static_cast<char>('a' + static_cast<char>(k % 26)) + (k >= 26 ? std::to_string(k / 26) : "");
  }
  std::sort(proj_.begin(), proj_.end());
  proj_.erase(std::unique(proj_.begin(), proj_.end()), proj_.end());
  std::sort(inj_.begin(), inj_.end());
  inj_.erase(std::unique(inj_.begin(), inj_.end()), inj_.end());

  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, a.canonical_text());
  for (const Module& m : indecs_) h = fnv1a(h, bqa::module_to_json(m).dump());
  fingerprint_ = hex64(h);
}

UniversePtr Universe::enumerate(const AlgebraPtr& alg, std::size_t max_dim, const EnumerateOptions& opts) {
  const bqa::Algebra& a = *alg;
  std::size_t needed = 0;
  for (std::size_t v = 0; v < a.num_vertices(); ++v) {
    needed = std::max({needed, total_dim_of_projective(a, v), total_dim_of_injective(a, v)});
  }
  if (max_dim < needed) {
    throw PreconditionError("max_dim " + std::to_string(max_dim) +
                            " is below the largest indecomposable projective/injective; raise it to at least " +
                            std::to_string(needed));
  }
  std::vector<std::vector<std::size_t>> dimvecs;
  for (std::size_t t = 1; t <= max_dim; ++t) {
    std::vector<std::size_t> cur;
    dimension_vectors(a.num_vertices(), t, cur, dimvecs);
  }
  double candidates = 0;
  for (const auto& d : dimvecs) {
    double e = 0;
    for (const bqa::Arrow& ar : a.quiver().arrows) e += static_cast<double>(d[ar.src] * d[ar.tgt]);
    candidates += std::pow(static_cast<double>(a.field().p()), e);
  }
  if (candidates > opts.candidate_cap) {
    throw CapExceeded("enumeration would inspect about " + std::to_string(static_cast<long long>(candidates)) +
                      " candidate representations; lower max_dim or declare the universe");
  }

  std::optional<std::filesystem::path> cache_file;
  if (auto dir = cache_directory(opts)) {
    const std::uint64_t key = fnv1a(0xcbf29ce484222325ULL, a.canonical_text() + "#" + std::to_string(max_dim));
    cache_file = std::filesystem::path(*dir) / ("universe-" + hex64(key) + ".json");
    std::ifstream in(*cache_file);
    if (in) {
      try {
        Json j = Json::parse(in);
        std::vector<Module> mods;
        for (const Json& e : j.at("indecomposables")) mods.push_back(bqa::parse_module(alg, e.at("module")));
        UniversePtr u(new Universe(alg, max_dim, Provenance::enumerated, std::move(mods)));
        if (u->fingerprint() == j.at("fingerprint").get<std::string>()) return u;
      } catch (const std::exception&) {
        // Unreadable cache entries are recomputed.
      }
    }
  }

  std::vector<std::vector<Module>> per(dimvecs.size());
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, dimvecs.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < dimvecs.size(); ++i) per[i] = enumerate_dimvec(alg, dimvecs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < dimvecs.size(); i = next++) {
          try {
            per[i] = enumerate_dimvec(alg, dimvecs[i]);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<Module> all;
  for (auto& v : per) {
    for (Module& m : v) all.push_back(std::move(m));
  }
  UniversePtr u(new Universe(alg, max_dim, Provenance::enumerated, std::move(all)));
  if (cache_file) {
    std::error_code ec;
    std::filesystem::create_directories(cache_file->parent_path(), ec);
    std::ofstream out(*cache_file);
    if (out) out << u->to_json().dump(1) << "\n";
  }
  return u;
}

UniversePtr Universe::declare(const AlgebraPtr& alg, std::vector<Module> modules) {
  for (std::size_t i = 0; i < modules.size(); ++i) {
    bqa::require_same_algebra(modules[i], Module::zero(alg));
    if (!homalg::is_indecomposable(modules[i])) {
      throw MalformedInput("declared module #" + std::to_string(i) + " is not indecomposable");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (bqa::isomorphism_of_indecomposables(modules[j], modules[i])) {
        throw MalformedInput("declared modules #" + std::to_string(j) + " and #" + std::to_string(i) +
                             " are isomorphic");
      }
    }
  }
  auto present = [&](const Module& m) {
    return std::any_of(modules.begin(), modules.end(),
                       [&](const Module& x) { return bqa::isomorphism_of_indecomposables(x, m).has_value(); });
  };
  for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
    for (Module m : {indecomposable_projective(alg, v), indecomposable_injective(alg, v)}) {
      if (!present(m)) modules.push_back(std::move(m));
    }
  }
  std::size_t max_dim = 0;
  for (const Module& m : modules) max_dim = std::max(max_dim, m.total_dim());
  return UniversePtr(new Universe(alg, max_dim, Provenance::declared, std::move(modules)));
}

UniversePtr Universe::from_json(const AlgebraPtr& alg, const Json& j) {
  std::vector<Module> mods;
  try {
    const Json& list = j.is_array() ? j : j.at("indecomposables");
    for (const Json& e : list) mods.push_back(bqa::parse_module(alg, e.contains("module") ? e.at("module") : e));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed universe: ") + e.what());
  }
  return declare(alg, std::move(mods));
}

std::optional<std::size_t> Universe::index_of_id(const std::string& id) const {
  for (std::size_t i = 0; i < indecs_.size(); ++i) {
    if (this->id(i) == id || labels_[i] == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Universe::locate(const Module& m) const {
  for (std::size_t i = 0; i < indecs_.size(); ++i) {
    if (indecs_[i] == m) return i;
  }
  for (std::size_t i = 0; i < indecs_.size(); ++i) {
    if (indecs_[i].dims() != m.dims()) continue;
    if (bqa::isomorphism_of_indecomposables(indecs_[i], m)) return i;
  }
  return std::nullopt;
}

std::size_t Universe::ext(std::size_t i, std::size_t j, std::size_t deg) const {
  const auto key = std::make_tuple(i, j, deg);
  {
    std::lock_guard lock(table_mu_);
    auto it = ext_table_.find(key);
    if (it != ext_table_.end()) return it->second;
  }
  const std::size_t v = resolver_->ext_dim(indecs_[i], indecs_[j], deg);
  std::lock_guard lock(table_mu_);
  ext_table_.emplace(key, v);
  return v;
}

std::size_t Universe::hom(std::size_t i, std::size_t j) const { return ext(i, j, 0); }

Json Universe::to_json() const {
  Json j;
  j["algebra"] = bqa::algebra_to_json(*alg_);
  j["max_dim"] = max_dim_;
  j["provenance"] = provenance_ == Provenance::enumerated ? "enumerated" : "declared";
  j["fingerprint"] = fingerprint_;
  Json list = Json::array();
  for (std::size_t i = 0; i < indecs_.size(); ++i) {
    list.push_back({{"id", id(i)}, {"label", labels_[i]}, {"module", bqa::module_to_json(indecs_[i])}});
  }
  j["indecomposables"] = std::move(list);
  return j;
}

// ---------------------------------------------------------------------------
// ObjectClass
// ---------------------------------------------------------------------------

ObjectClass::ObjectClass(UniversePtr u, std::vector<bool> members) : u_(std::move(u)), members_(std::move(members)) {
  if (!u_ || members_.size() != u_->size()) throw MalformedInput("class does not match its universe");
}

ObjectClass ObjectClass::all(const UniversePtr& u) { return {u, std::vector<bool>(u->size(), true)}; }
ObjectClass ObjectClass::none(const UniversePtr& u) { return {u, std::vector<bool>(u->size(), false)}; }

ObjectClass ObjectClass::of(const UniversePtr& u, const std::vector<std::size_t>& indices) {
  std::vector<bool> m(u->size(), false);
  for (std::size_t i : indices) {
    if (i >= u->size()) throw MalformedInput("class member index out of range");
    m[i] = true;
  }
  return {u, std::move(m)};
}

ObjectClass ObjectClass::projectives(const UniversePtr& u) { return of(u, u->projective_indices()); }
ObjectClass ObjectClass::injectives(const UniversePtr& u) { return of(u, u->injective_indices()); }

std::size_t ObjectClass::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> ObjectClass::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i]) out.push_back(i);
  }
  return out;
}

Tri ObjectClass::contains_module(const Module& m) const {
  if (m.is_zero()) return Tri::yes;
  for (std::size_t i = 0; i < u_->size(); ++i) {
    if (u_->indec(i) == m) return members_[i] ? Tri::yes : Tri::no;
  }
  const std::vector<homalg::Piece>* pieces = nullptr;
  try {
    pieces = &u_->resolver().pieces(m);
  } catch (const UndecidedDecomposition&) {
    return Tri::unknown;
  }
  bool unknown = false;
  for (const homalg::Piece& p : *pieces) {
    auto i = u_->locate(p.module);
    if (!i) {
      unknown = true;
    } else if (!members_[*i]) {
      return Tri::no;
    }
  }
  return unknown ? Tri::unknown : Tri::yes;
}

bool ObjectClass::subset_of(const ObjectClass& other) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] && !other.members_[i]) return false;
  }
  return true;
}

ObjectClass operator&(const ObjectClass& a, const ObjectClass& b) {
  std::vector<bool> m(a.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.members_[i] && b.members_[i];
  return {a.u_, std::move(m)};
}

ObjectClass operator|(const ObjectClass& a, const ObjectClass& b) {
  std::vector<bool> m(a.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.members_[i] || b.members_[i];
  return {a.u_, std::move(m)};
}

std::string ObjectClass::to_string() const {
  std::string s = "{";
  bool first = true;
  for (std::size_t i : indices()) {
    if (!first) s += ", ";
    s += u_->label(i);
    first = false;
  }
  return s + "}";
}

Json ObjectClass::to_json() const {
  Json arr = Json::array();
  for (std::size_t i : indices()) arr.push_back(u_->id(i));
  return arr;
}

ObjectClass orthogonal(const ObjectClass& c, Perp side) {
  const UniversePtr& u = c.universe();
  std::vector<bool> m(u->size(), true);
  for (std::size_t j = 0; j < u->size(); ++j) {
    for (std::size_t x : c.indices()) {
      const std::size_t e = side == Perp::right ? u->ext(x, j, 1) : u->ext(j, x, 1);
      if (e != 0) {
        m[j] = false;
        break;
      }
    }
  }
  return {u, std::move(m)};
}

}  // namespace cotlab::universe
