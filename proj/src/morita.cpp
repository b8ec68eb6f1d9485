#include "kd/morita.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// The gluing predicate: the one validate(Multimodule) uses for side matching.
bool glues(const DgAlgebra& a, const DgAlgebra& b) {
  return a.name == b.name && a.underlying == b.underlying;
}

// Full structural equality, enough for the identity map to be multiplicative.
bool same_data(const DgAlgebra& a, const DgAlgebra& b) {
  return glues(a, b) && a.unit == b.unit && a.augmentation == b.augmentation &&
         a.product == b.product;
}

bool same_data(const DgBimodule& m, const DgBimodule& n) {
  return m.underlying == n.underlying && glues(m.left_algebra, n.left_algebra) &&
         glues(m.right_algebra, n.right_algebra) && m.left_action == n.left_action &&
         m.right_action == n.right_action;
}

struct Checker {
  ValidationReport rep;

  void check(const std::string& axiom, bool ok, const std::string& violation = "") {
    rep.checks.push_back({axiom, ok, ok ? "" : violation});
  }
};

// f(a.x) = phiL(a).f(x) and f(x.b) = f(x).phiR(b), degreewise.
bool edge_equivariant(const DgBimodule& src, const DgBimodule& dst, const ChainMap& f,
                      const DgAlgebraMap& phi_l, const DgAlgebraMap& phi_r,
                      std::string* where = nullptr) {
  Window wm = src.underlying.window();
  Window wl = phi_l.src.underlying.window();
  Window wr = phi_r.src.underlying.window();
  for (int p = wl.lo; p <= wl.hi; ++p)
    for (int q = wm.lo; q <= wm.hi; ++q) {
      if (!wm.contains(p + q)) continue;
      SparseMatrix lhs = f.component(p + q) * src.left_action_at(p, q);
      SparseMatrix rhs =
          dst.left_action_at(p, q) * kron(phi_l.map.component(p), f.component(q));
      if (!(lhs == rhs)) {
        if (where) *where = "left (p,q)=(" + std::to_string(p) + "," + std::to_string(q) + ")";
        return false;
      }
    }
  for (int p = wr.lo; p <= wr.hi; ++p)
    for (int q = wm.lo; q <= wm.hi; ++q) {
      if (!wm.contains(p + q)) continue;
      SparseMatrix lhs = f.component(q + p) * src.right_action_at(q, p);
      SparseMatrix rhs =
          dst.right_action_at(q, p) * kron(f.component(q), phi_r.map.component(p));
      if (!(lhs == rhs)) {
        if (where) *where = "right (q,p)=(" + std::to_string(q) + "," + std::to_string(p) + ")";
        return false;
      }
    }
  return true;
}

// The map factoring through the unit algebra, eta_dst o eps_src.
DgAlgebraMap through_unit(const DgAlgebra& a, const DgAlgebra& b) {
  std::map<int, SparseMatrix> comps;
  comps.emplace(0, b.unit * a.augmentation);
  return make_algebra_map(a, b, comps);
}

bool same_components(const ChainMap& f, const ChainMap& g, Window w) {
  for (int d = w.lo; d <= w.hi; ++d)
    if (!(f.component(d) == g.component(d))) return false;
  return true;
}

std::vector<DgAlgebraMap> algebra_map_pool(const DgAlgebra& a, const DgAlgebra& b) {
  std::vector<DgAlgebraMap> pool;
  pool.push_back(through_unit(a, b));
  if (same_data(a, b)) {
    DgAlgebraMap id{a, b, ChainMap::identity(a.underlying)};
    if (!same_components(id.map, pool.front().map, a.underlying.window()))
      pool.push_back(std::move(id));
  }
  return pool;
}

std::vector<ChainMap> module_map_pool(const DgBimodule& m, const DgBimodule& n) {
  std::vector<ChainMap> pool;
  pool.push_back(ChainMap::zero(m.underlying, n.underlying));
  if (same_data(m, n) && m.underlying.total_dim() > 0)
    pool.push_back(ChainMap::identity(m.underlying));
  return pool;
}

std::vector<std::vector<int>> all_tuples(int universe, int len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(len), 0);
  while (true) {
    out.push_back(cur);
    int i = len - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == universe - 1) cur[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++cur[static_cast<size_t>(i)];
  }
  return out;
}

// sigma reindexed along m: tau_j = sigma_{m(j)}.
std::vector<int> reindex(const MonotoneMap& m, const std::vector<int>& sigma) {
  std::vector<int> tau(static_cast<size_t>(m.src + 1));
  for (int j = 0; j <= m.src; ++j) tau[static_cast<size_t>(j)] = sigma.at(static_cast<size_t>(m(j)));
  return tau;
}

}  // namespace

Multimodule alpha_push(const Multimodule& f, const MonotoneMap& alpha, Window w) {
  validate(alpha);
  require_valid(f);
  int n = static_cast<int>(f.algebras.size()) - 1;
  if (alpha.tgt != n)
    fail("alpha_push: the map lands in [" + std::to_string(alpha.tgt) +
         "] but the multimodule is indexed by [" + std::to_string(n) + "]");
  Multimodule out;
  for (int i = 0; i <= alpha.src; ++i)
    out.algebras.push_back(f.algebras[static_cast<size_t>(alpha(i))]);
  for (int i = 0; i < alpha.src; ++i) {
    int lo = alpha(i), hi = alpha(i + 1);
    if (lo == hi) {
      out.bimodules.push_back(regular_bimodule(f.algebras[static_cast<size_t>(lo)]));
      continue;
    }
    DgBimodule acc = f.bimodules[static_cast<size_t>(lo)];
    for (int j = lo + 1; j < hi; ++j)
      acc = relative_tensor(acc, f.algebras[static_cast<size_t>(j)],
                            f.bimodules[static_cast<size_t>(j)], w)
                .bimodule;
    out.bimodules.push_back(std::move(acc));
  }
  return out;
}

ValidationReport validate(const MultimoduleMorphism& h, const Multimodule& src,
                          const Multimodule& dst) {
  Checker ck;
  bool arity = src.algebras.size() == dst.algebras.size() &&
               h.on_algebras.size() == src.algebras.size() &&
               h.on_modules.size() == src.bimodules.size() &&
               src.bimodules.size() + 1 == src.algebras.size();
  ck.check("arity", arity);
  if (!arity) return ck.rep;
  for (size_t i = 0; i < h.on_algebras.size(); ++i) {
    const DgAlgebraMap& phi = h.on_algebras[i];
    ck.check("vertex endpoints " + std::to_string(i),
             glues(phi.src, src.algebras[i]) && glues(phi.dst, dst.algebras[i]));
    ValidationReport sub = validate(phi);
    ck.check("vertex map " + std::to_string(i), sub.ok(), sub.ok() ? "" : sub.str());
  }
  for (size_t i = 0; i < h.on_modules.size(); ++i) {
    const ChainMap& f = h.on_modules[i];
    bool shapes = f.src() == src.bimodules[i].underlying && f.dst() == dst.bimodules[i].underlying;
    ck.check("edge shapes " + std::to_string(i), shapes);
    if (!shapes) continue;
    std::string where;
    bool eq = edge_equivariant(src.bimodules[i], dst.bimodules[i], f, h.on_algebras[i],
                               h.on_algebras[i + 1], &where);
    ck.check("edge equivariance " + std::to_string(i), eq, where);
  }
  return ck.rep;
}

SegalReport segal_check(int n, const MoritaSample& sample) {
  if (n < 2) fail("segal_check requires n >= 2");
  SegalReport rep;
  rep.n = n;
  for (const DgAlgebra& a : sample.algebras) {
    ValidationReport r = validate(a);
    if (!r.ok()) rep.failures.push_back("universe algebra '" + a.name + "' is invalid");
  }
  for (size_t i = 0; i < sample.bimodules.size(); ++i) {
    ValidationReport r = validate(sample.bimodules[i]);
    if (!r.ok()) rep.failures.push_back("universe bimodule #" + std::to_string(i) + " is invalid");
  }
  if (!rep.failures.empty()) return rep;

  const std::vector<DgBimodule>& bs = sample.bimodules;
  std::vector<std::vector<int>> chains;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      chains.push_back(cur);
      return;
    }
    for (int b = 0; b < static_cast<int>(bs.size()); ++b) {
      if (pos > 0 && !glues(bs[static_cast<size_t>(cur.back())].right_algebra,
                            bs[static_cast<size_t>(b)].left_algebra))
        continue;
      cur.push_back(b);
      rec(pos + 1);
      cur.pop_back();
    }
  };
  rec(0);
  rep.glued_chains = static_cast<int>(chains.size());

  // Object level: a chain assembles through the universe algebras matching its
  // endpoints; the Segal map is bijective iff the match is unique throughout.
  std::vector<std::vector<int>> nodes_of;  // per chain, universe index per vertex
  for (const std::vector<int>& ch : chains) {
    std::vector<int> nodes;
    long long preimages = 1;
    for (int k = 0; k <= n; ++k) {
      const DgAlgebra& end = k == 0 ? bs[static_cast<size_t>(ch[0])].left_algebra
                                    : bs[static_cast<size_t>(ch[static_cast<size_t>(k - 1)])]
                                          .right_algebra;
      int hits = 0, hit = -1;
      for (int a = 0; a < static_cast<int>(sample.algebras.size()); ++a)
        if (glues(sample.algebras[static_cast<size_t>(a)], end)) {
          ++hits;
          hit = a;
        }
      if (hits == 0)
        rep.failures.push_back("glued chain has no assembling multimodule: algebra '" + end.name +
                               "' is missing from the universe");
      if (hits > 1)
        rep.failures.push_back("glued chain has an ambiguous preimage: algebra '" + end.name +
                               "' occurs " + std::to_string(hits) + " times in the universe");
      preimages *= hits;
      nodes.push_back(hit);
    }
    rep.multimodules += static_cast<int>(preimages);
    if (preimages == 1) {
      Multimodule mm;
      for (int k = 0; k <= n; ++k)
        mm.algebras.push_back(sample.algebras[static_cast<size_t>(nodes[static_cast<size_t>(k)])]);
      for (int b : ch) mm.bimodules.push_back(bs[static_cast<size_t>(b)]);
      ValidationReport r = validate(mm);
      if (!r.ok())
        rep.failures.push_back("assembled multimodule fails validation:\n" + r.str());
    }
    nodes_of.push_back(std::move(nodes));
  }
  if (!rep.failures.empty()) return rep;

  // Morphism level: pools of algebra maps per vertex pair and module map
  // candidates per edge pair, with validity memoized per phi choice.
  int na = static_cast<int>(sample.algebras.size());
  std::map<std::pair<int, int>, std::vector<DgAlgebraMap>> apool;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      apool.emplace(std::make_pair(i, j),
                    algebra_map_pool(sample.algebras[static_cast<size_t>(i)],
                                     sample.algebras[static_cast<size_t>(j)]));
  std::map<std::pair<int, int>, std::vector<ChainMap>> mpool;
  for (int i = 0; i < static_cast<int>(bs.size()); ++i)
    for (int j = 0; j < static_cast<int>(bs.size()); ++j)
      mpool.emplace(std::make_pair(i, j),
                    module_map_pool(bs[static_cast<size_t>(i)], bs[static_cast<size_t>(j)]));
  // valid candidate count per (edge src, edge dst, phiL index, phiR index)
  std::map<std::array<int, 6>, int> memo;
  auto local_count = [&](int b, int c, int li, int lj, int pl, int ri, int rj, int pr) {
    std::array<int, 6> key{b, c, pl, pr, li * na + lj, ri * na + rj};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const DgAlgebraMap& phi_l = apool.at({li, lj})[static_cast<size_t>(pl)];
    const DgAlgebraMap& phi_r = apool.at({ri, rj})[static_cast<size_t>(pr)];
    int count = 0;
    for (const ChainMap& f : mpool.at({b, c}))
      if (edge_equivariant(bs[static_cast<size_t>(b)], bs[static_cast<size_t>(c)], f, phi_l,
                           phi_r))
        ++count;
    memo.emplace(key, count);
    return count;
  };

  bool validator_checked = false;
  for (size_t ci = 0; ci < chains.size(); ++ci)
    for (size_t cj = 0; cj < chains.size(); ++cj) {
      const std::vector<int>& src_nodes = nodes_of[ci];
      const std::vector<int>& dst_nodes = nodes_of[cj];
      std::vector<int> pool_sizes;
      for (int k = 0; k <= n; ++k)
        pool_sizes.push_back(static_cast<int>(
            apool.at({src_nodes[static_cast<size_t>(k)], dst_nodes[static_cast<size_t>(k)]})
                .size()));
      // global side: enumerate full phi tuples, multiply edge counts
      std::vector<int> phi(static_cast<size_t>(n + 1), 0);
      long long global = 0;
      while (true) {
        long long prod = 1;
        for (int k = 0; k < n && prod > 0; ++k)
          prod *= local_count(chains[ci][static_cast<size_t>(k)],
                              chains[cj][static_cast<size_t>(k)],
                              src_nodes[static_cast<size_t>(k)], dst_nodes[static_cast<size_t>(k)],
                              phi[static_cast<size_t>(k)], src_nodes[static_cast<size_t>(k + 1)],
                              dst_nodes[static_cast<size_t>(k + 1)],
                              phi[static_cast<size_t>(k + 1)]);
        global += prod;
        if (!validator_checked && prod > 0) {
          // assemble one witness and run it through the public validator
          MultimoduleMorphism h;
          Multimodule ms, md;
          for (int k = 0; k <= n; ++k) {
            ms.algebras.push_back(
                sample.algebras[static_cast<size_t>(src_nodes[static_cast<size_t>(k)])]);
            md.algebras.push_back(
                sample.algebras[static_cast<size_t>(dst_nodes[static_cast<size_t>(k)])]);
            h.on_algebras.push_back(
                apool.at({src_nodes[static_cast<size_t>(k)], dst_nodes[static_cast<size_t>(k)]})
                    [static_cast<size_t>(phi[static_cast<size_t>(k)])]);
          }
          for (int k = 0; k < n; ++k) {
            int b = chains[ci][static_cast<size_t>(k)], c = chains[cj][static_cast<size_t>(k)];
            ms.bimodules.push_back(bs[static_cast<size_t>(b)]);
            md.bimodules.push_back(bs[static_cast<size_t>(c)]);
            for (const ChainMap& f : mpool.at({b, c}))
              if (edge_equivariant(bs[static_cast<size_t>(b)], bs[static_cast<size_t>(c)], f,
                                   h.on_algebras[static_cast<size_t>(k)],
                                   h.on_algebras[static_cast<size_t>(k + 1)])) {
                h.on_modules.push_back(f);
                break;
              }
          }
          ValidationReport r = validate(h, ms, md);
          if (!r.ok())
            rep.failures.push_back("counted morphism fails the validator:\n" + r.str());
          validator_checked = true;
        }
        int k = n;
        while (k >= 0 && phi[static_cast<size_t>(k)] == pool_sizes[static_cast<size_t>(k)] - 1)
          phi[static_cast<size_t>(k--)] = 0;
        if (k < 0) break;
        ++phi[static_cast<size_t>(k)];
      }
      rep.morphisms += static_cast<int>(global);

      // glued side: chain local counts with agreement at shared vertices
      std::vector<long long> ways(static_cast<size_t>(pool_sizes[0]), 1);
      for (int k = 0; k < n; ++k) {
        std::vector<long long> next(static_cast<size_t>(pool_sizes[static_cast<size_t>(k + 1)]),
                                    0);
        for (int pl = 0; pl < pool_sizes[static_cast<size_t>(k)]; ++pl)
          for (int pr = 0; pr < pool_sizes[static_cast<size_t>(k + 1)]; ++pr) {
            long long lc = local_count(
                chains[ci][static_cast<size_t>(k)], chains[cj][static_cast<size_t>(k)],
                src_nodes[static_cast<size_t>(k)], dst_nodes[static_cast<size_t>(k)], pl,
                src_nodes[static_cast<size_t>(k + 1)], dst_nodes[static_cast<size_t>(k + 1)], pr);
            next[static_cast<size_t>(pr)] += ways[static_cast<size_t>(pl)] * lc;
          }
        ways = std::move(next);
      }
      long long glued = 0;
      for (long long v : ways) glued += v;
      rep.glued_morphisms += static_cast<int>(glued);
    }
  if (rep.morphisms != rep.glued_morphisms)
    rep.failures.push_back("morphism counts disagree: " + std::to_string(rep.morphisms) +
                           " global vs " + std::to_string(rep.glued_morphisms) + " glued");
  if (rep.multimodules != rep.glued_chains)
    rep.failures.push_back("object counts disagree: " + std::to_string(rep.multimodules) +
                           " multimodules vs " + std::to_string(rep.glued_chains) + " chains");
  return rep;
}

DgBimodule horizontal_action(const DgBimodule& n, const DgBimodule& m, Window w) {
  if (!glues(n.left_algebra, n.right_algebra) || !same_data(n.left_algebra, n.right_algebra))
    fail("horizontal action needs an (A,A)-bimodule acting on the left");
  if (!glues(n.right_algebra, m.left_algebra))
    fail("side mismatch: the bimodules do not share the acting algebra");
  return relative_tensor(n, n.right_algebra, m, w).bimodule;
}

DecalageReport decalage_check(const MoritaSample& sample, int max_level) {
  if (max_level < 0) fail("decalage_check requires max_level >= 0");
  if (sample.algebras.empty()) fail("decalage_check needs a nonempty universe");
  DecalageReport rep;
  rep.max_level = max_level;
  int u = static_cast<int>(sample.algebras.size());
  long long d0 = 0;
  for (const DgAlgebra& a : sample.algebras) d0 += a.underlying.total_dim();

  std::vector<std::vector<std::vector<int>>> lvl;  // tuples of length k+1
  for (int len = 1; len <= max_level + 3; ++len) lvl.push_back(all_tuples(u, len));
  auto dims_of = [&](const std::vector<std::vector<int>>& tuples) {
    long long total = 0;
    for (const std::vector<int>& t : tuples)
      for (int a : t) total += sample.algebras[static_cast<size_t>(a)].underlying.total_dim();
    return total;
  };
  for (int k = 0; k <= max_level; ++k) {
    rep.level_sizes.push_back(static_cast<long long>(lvl[static_cast<size_t>(k)].size()));
    rep.level_dims.push_back(dims_of(lvl[static_cast<size_t>(k)]));
  }

  for (int k = 0; k <= max_level; ++k) {
    // product decomposition of Dec cosk0 at level k: tuples of length k + 2
    // split as (length k + 1 prefix, constant last coordinate)
    const auto& big = lvl[static_cast<size_t>(k + 1)];
    if (static_cast<long long>(big.size()) != rep.level_sizes[static_cast<size_t>(k)] * u)
      rep.failures.push_back("level " + std::to_string(k) + ": product size mismatch");
    std::set<std::pair<std::vector<int>, int>> seen;
    for (const std::vector<int>& sigma : big) {
      std::vector<int> prefix(sigma.begin(), sigma.end() - 1);
      if (!seen.emplace(std::move(prefix), sigma.back()).second)
        rep.failures.push_back("level " + std::to_string(k) + ": product split collides");
    }
    long long expect_dims = u * rep.level_dims[static_cast<size_t>(k)] +
                            rep.level_sizes[static_cast<size_t>(k)] * d0;
    if (dims_of(big) != expect_dims)
      rep.failures.push_back("level " + std::to_string(k) + ": dimension product mismatch");
  }

  // naturality: the structure maps of Dec cosk0 act on the prefix exactly as
  // the structure maps of cosk0 and never move the adjoined last coordinate
  auto natural = [&](int k, const MonotoneMap& base, const std::string& what) {
    MonotoneMap lifted = plus(base);
    for (const std::vector<int>& sigma : lvl[static_cast<size_t>(base.tgt + 1)]) {
      std::vector<int> dec = reindex(lifted, sigma);
      std::vector<int> prefix(sigma.begin(), sigma.end() - 1);
      std::vector<int> small = reindex(base, prefix);
      small.push_back(sigma.back());
      if (dec != small) {
        rep.failures.push_back("level " + std::to_string(k) + " " + what +
                               ": decalage action leaves the product");
        return;
      }
    }
  };
  for (int k = 1; k <= max_level; ++k)
    for (int i = 0; i <= k; ++i) natural(k, face_map(k, i), "face " + std::to_string(i));
  for (int k = 0; k + 1 <= max_level; ++k)
    for (int i = 0; i <= k; ++i)
      natural(k, degeneracy_map(k, i), "degeneracy " + std::to_string(i));
  return rep;
}

}  // namespace kd
