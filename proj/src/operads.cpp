#include "kd/operads.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kd {

std::string AssMorphism::str() const {
  std::ostringstream os;
  os << "<" << src << ">-><" << tgt << ">:(";
  for (int i = 0; i < src; ++i) {
    if (i) os << ",";
    int v = map[static_cast<size_t>(i)];
    if (v == 0)
      os << "*";
    else
      os << v;
  }
  os << ")[";
  for (int j = 0; j < tgt; ++j) {
    if (j) os << "|";
    for (size_t t = 0; t < fiber_orders[static_cast<size_t>(j)].size(); ++t) {
      if (t) os << ",";
      os << fiber_orders[static_cast<size_t>(j)][t];
    }
  }
  os << "]";
  return os.str();
}

void validate(const AssMorphism& a) {
  if (a.src < 0 || a.tgt < 0) throw std::invalid_argument("ass: negative size");
  if (a.map.size() != static_cast<size_t>(a.src)) throw std::invalid_argument("ass: map length");
  if (a.fiber_orders.size() != static_cast<size_t>(a.tgt))
    throw std::invalid_argument("ass: fiber order count");
  for (int v : a.map)
    if (v < 0 || v > a.tgt) throw std::invalid_argument("ass: map value out of range");
  std::vector<int> seen(static_cast<size_t>(a.src) + 1, 0);
  for (int j = 1; j <= a.tgt; ++j) {
    for (int i : a.fiber_orders[static_cast<size_t>(j - 1)]) {
      if (i < 1 || i > a.src || a.map[static_cast<size_t>(i - 1)] != j)
        throw std::invalid_argument("ass: fiber order lists a non-member");
      if (seen[static_cast<size_t>(i)]++) throw std::invalid_argument("ass: duplicate in fiber order");
    }
  }
  for (int i = 1; i <= a.src; ++i)
    if (a.map[static_cast<size_t>(i - 1)] != 0 && !seen[static_cast<size_t>(i)])
      throw std::invalid_argument("ass: fiber order misses a member");
}

AssMorphism ass_identity(int n) {
  AssMorphism a{n, n, {}, {}};
  a.fiber_orders.resize(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    a.map.push_back(i);
    a.fiber_orders[static_cast<size_t>(i - 1)] = {i};
  }
  return a;
}

AssMorphism compose_ass(const AssMorphism& a1, const AssMorphism& a2) {
  if (a1.tgt != a2.src) throw std::invalid_argument("compose_ass: boundary mismatch");
  AssMorphism c{a1.src, a2.tgt, {}, {}};
  c.map.resize(static_cast<size_t>(a1.src), 0);
  for (int i = 1; i <= a1.src; ++i) {
    int j = a1.map[static_cast<size_t>(i - 1)];
    c.map[static_cast<size_t>(i - 1)] = j == 0 ? 0 : a2.map[static_cast<size_t>(j - 1)];
  }
  c.fiber_orders.resize(static_cast<size_t>(a2.tgt));
  for (int j2 = 1; j2 <= a2.tgt; ++j2) {
    auto& out = c.fiber_orders[static_cast<size_t>(j2 - 1)];
    for (int j1 : a2.fiber_orders[static_cast<size_t>(j2 - 1)])
      for (int i : a1.fiber_orders[static_cast<size_t>(j1 - 1)]) out.push_back(i);
  }
  return c;
}

std::vector<AssMorphism> all_ass(int n, int m) {
  std::vector<AssMorphism> out;
  std::vector<int> map(static_cast<size_t>(n), 0);
  std::function<void(int)> maps = [&](int i) {
    if (i == n) {
      // all orderings of each fiber
      std::vector<std::vector<int>> fibers(static_cast<size_t>(m));
      for (int x = 1; x <= n; ++x)
        if (map[static_cast<size_t>(x - 1)] != 0)
          fibers[static_cast<size_t>(map[static_cast<size_t>(x - 1)] - 1)].push_back(x);
      std::function<void(int)> perms = [&](int j) {
        if (j == m) {
          out.push_back(AssMorphism{n, m, map, fibers});
          return;
        }
        auto& f = fibers[static_cast<size_t>(j)];
        std::sort(f.begin(), f.end());
        std::vector<int> base = f;
        do {
          perms(j + 1);
        } while (std::next_permutation(f.begin(), f.end()));
        f = base;
      };
      perms(0);
      return;
    }
    for (int v = 0; v <= m; ++v) {
      map[static_cast<size_t>(i)] = v;
      maps(i + 1);
    }
  };
  maps(0);
  return out;
}

bool TensObject::operator<(const TensObject& o) const {
  if (n != o.n) return n < o.n;
  if (k != o.k) return k < o.k;
  if (c_minus != o.c_minus) return c_minus < o.c_minus;
  return c_plus < o.c_plus;
}

std::string TensObject::str() const {
  std::ostringstream os;
  os << "(<" << n << ">,[" << k << "],(";
  for (int i = 0; i < n; ++i) {
    if (i) os << ",";
    os << c_minus[static_cast<size_t>(i)];
  }
  os << "),(";
  for (int i = 0; i < n; ++i) {
    if (i) os << ",";
    os << c_plus[static_cast<size_t>(i)];
  }
  os << "))";
  return os.str();
}

bool validate_tens_object(const TensObject& o) {
  if (o.n < 0 || o.k < 0) throw std::invalid_argument("tens object: negative size");
  if (o.c_minus.size() != static_cast<size_t>(o.n) || o.c_plus.size() != static_cast<size_t>(o.n))
    throw std::invalid_argument("tens object: coloring length");
  for (int i = 0; i < o.n; ++i) {
    int a = o.c_minus[static_cast<size_t>(i)], b = o.c_plus[static_cast<size_t>(i)];
    if (a < 0 || b > o.k) throw std::invalid_argument("tens object: color out of range");
    if (!(a <= b && b <= a + 1)) return false;
  }
  return true;
}

bool validate_tens_morphism(const TensMorphism& m, const TensObject& src, const TensObject& dst) {
  if (!validate_tens_object(src) || !validate_tens_object(dst))
    throw std::invalid_argument("validate_tens_morphism: endpoint is not a valid object");
  validate(m.alpha);
  validate(m.lambda);
  if (m.alpha.src != src.n || m.alpha.tgt != dst.n || m.lambda.src != dst.k ||
      m.lambda.tgt != src.k)
    throw std::invalid_argument("validate_tens_morphism: shape mismatch");
  for (int j = 1; j <= dst.n; ++j) {
    const auto& fo = m.alpha.fiber_orders[static_cast<size_t>(j - 1)];
    if (fo.empty()) {
      // degenerate chain: the endpoints must already agree under lambda
      if (m.lambda(dst.c_minus[static_cast<size_t>(j - 1)]) !=
          m.lambda(dst.c_plus[static_cast<size_t>(j - 1)]))
        return false;
      continue;
    }
    if (src.c_minus[static_cast<size_t>(fo.front() - 1)] !=
        m.lambda(dst.c_minus[static_cast<size_t>(j - 1)]))
      return false;
    if (src.c_plus[static_cast<size_t>(fo.back() - 1)] !=
        m.lambda(dst.c_plus[static_cast<size_t>(j - 1)]))
      return false;
    for (size_t t = 0; t + 1 < fo.size(); ++t)
      if (src.c_plus[static_cast<size_t>(fo[t] - 1)] !=
          src.c_minus[static_cast<size_t>(fo[t + 1] - 1)])
        return false;
  }
  return true;
}

TensMorphism tens_identity(const TensObject& o) {
  return {ass_identity(o.n), identity_map(o.k)};
}

TensMorphism compose_tens(const TensMorphism& m1, const TensMorphism& m2) {
  return {compose_ass(m1.alpha, m2.alpha), compose(m2.lambda, m1.lambda)};
}

std::vector<TensObject> all_tens_objects(int n, int k) {
  std::vector<std::pair<int, int>> colors;
  for (int j = 0; j <= k; ++j) colors.push_back({j, j});
  for (int j = 1; j <= k; ++j) colors.push_back({j - 1, j});
  std::vector<TensObject> out;
  TensObject cur{n, k, std::vector<int>(static_cast<size_t>(n)), std::vector<int>(static_cast<size_t>(n))};
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (auto& [a, b] : colors) {
      cur.c_minus[static_cast<size_t>(i)] = a;
      cur.c_plus[static_cast<size_t>(i)] = b;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<TensMorphism> all_tens_morphisms(const TensObject& src, const TensObject& dst) {
  std::vector<TensMorphism> out;
  for (auto& a : all_ass(src.n, dst.n))
    for (auto& l : all_monotone(dst.k, src.k)) {
      TensMorphism m{a, l};
      if (validate_tens_morphism(m, src, dst)) out.push_back(m);
    }
  return out;
}

std::vector<std::pair<TensObject, TensMorphism>> valid_morphisms_into(const TensObject& dst,
                                                                      int src_n, int src_k) {
  if (!validate_tens_object(dst)) throw std::invalid_argument("valid_morphisms_into: bad target");
  std::vector<std::pair<TensObject, TensMorphism>> out;
  std::vector<int> cm(static_cast<size_t>(src_n), -1), cp(static_cast<size_t>(src_n), -1);
  for (auto& alpha : all_ass(src_n, dst.n)) {
    std::vector<int> nonempty;
    for (int j = 1; j <= dst.n; ++j)
      if (!alpha.fiber_orders[static_cast<size_t>(j - 1)].empty()) nonempty.push_back(j);
    std::vector<int> killed;
    for (int i = 1; i <= src_n; ++i)
      if (alpha.map[static_cast<size_t>(i - 1)] == 0) killed.push_back(i);
    for (auto& lambda : all_monotone(dst.k, src_k)) {
      bool empties_ok = true;
      for (int j = 1; j <= dst.n; ++j)
        if (alpha.fiber_orders[static_cast<size_t>(j - 1)].empty() &&
            lambda(dst.c_minus[static_cast<size_t>(j - 1)]) !=
                lambda(dst.c_plus[static_cast<size_t>(j - 1)]))
          empties_ok = false;
      if (!empties_ok) continue;
      std::function<void(size_t)> free_colors = [&](size_t ki) {
        if (ki == killed.size()) {
          TensObject src{src_n, src_k, cm, cp};
          out.push_back({src, TensMorphism{alpha, lambda}});
          return;
        }
        size_t e = static_cast<size_t>(killed[ki] - 1);
        for (int a = 0; a <= src_k; ++a)
          for (int b = a; b <= std::min(a + 1, src_k); ++b) {
            cm[e] = a;
            cp[e] = b;
            free_colors(ki + 1);
          }
      };
      std::function<void(size_t)> fibers = [&](size_t fi) {
        if (fi == nonempty.size()) {
          free_colors(0);
          return;
        }
        int j = nonempty[static_cast<size_t>(fi)];
        const auto& ord = alpha.fiber_orders[static_cast<size_t>(j - 1)];
        int start = lambda(dst.c_minus[static_cast<size_t>(j - 1)]);
        int end = lambda(dst.c_plus[static_cast<size_t>(j - 1)]);
        std::function<void(size_t, int)> walk = [&](size_t t, int cur) {
          size_t e = static_cast<size_t>(ord[t] - 1);
          cm[e] = cur;
          if (t + 1 == ord.size()) {
            if (end == cur || end == cur + 1) {
              cp[e] = end;
              fibers(fi + 1);
            }
            return;
          }
          for (int v = cur; v <= std::min(cur + 1, src_k); ++v) {
            cp[e] = v;
            walk(t + 1, v);
          }
        };
        walk(0, start);
      };
      fibers(0);
    }
  }
  return out;
}

bool validate_bm_object(const BMObject& o) {
  if (o.c_minus.size() != static_cast<size_t>(o.n) || o.c_plus.size() != static_cast<size_t>(o.n))
    throw std::invalid_argument("bm object: coloring length");
  for (int i = 0; i < o.n; ++i) {
    int a = o.c_minus[static_cast<size_t>(i)], b = o.c_plus[static_cast<size_t>(i)];
    if (a < 0 || b > 1) throw std::invalid_argument("bm object: color out of range");
    if (a > b) return false;
  }
  return true;
}

TensObject bm_as_tens(const BMObject& o) { return {o.n, 1, o.c_minus, o.c_plus}; }

void validate_shape(const NablaTensObject& o) {
  if (o.flag != 0 && o.flag != 1) throw std::invalid_argument("nabla tens: bad flag");
  if (o.flag == 0 && o.base.k < 1)
    throw std::invalid_argument("nabla tens: flag 0 needs ordinal at least [1]");
  if (!validate_tens_object(o.base)) throw std::invalid_argument("nabla tens: invalid base");
}

bool validate_nabla_tens_morphism(const NablaTensMorphism& m, const NablaTensObject& src,
                                  const NablaTensObject& dst) {
  validate_shape(src);
  validate_shape(dst);
  if (!(m.nu.src == NablaObject{src.underlying_k(), src.flag}) ||
      !(m.nu.tgt == NablaObject{dst.underlying_k(), dst.flag}))
    throw std::invalid_argument("nabla tens morphism: index mismatch");
  return validate_tens_morphism({m.alpha, delta(m.nu)}, src.base, dst.base);
}

NablaTensMorphism compose_nabla_tens(const NablaTensMorphism& m1, const NablaTensMorphism& m2) {
  return {compose_ass(m1.alpha, m2.alpha), nabla_compose(m2.nu, m1.nu)};
}

BMObject phi(const NablaTensObject& o) {
  validate_shape(o);
  MonotoneMap e = eta({o.underlying_k(), o.flag});
  BMObject b{o.base.n, {}, {}};
  for (int i = 0; i < o.base.n; ++i) {
    b.c_minus.push_back(e(o.base.c_minus[static_cast<size_t>(i)]));
    b.c_plus.push_back(e(o.base.c_plus[static_cast<size_t>(i)]));
  }
  return b;
}

TensMorphism phi_mor(const NablaTensMorphism& m) { return {m.alpha, identity_map(1)}; }

TensObject bar_index(int n) {
  if (n < 0) throw std::invalid_argument("bar_index: negative level");
  TensObject o{n + 2, 2, std::vector<int>(static_cast<size_t>(n + 2), 1),
               std::vector<int>(static_cast<size_t>(n + 2), 1)};
  o.c_minus.front() = 0;
  o.c_plus.back() = 2;
  return o;
}

TensMorphism bar_mor(const MonotoneMap& mu) {
  validate(mu);
  int m = mu.src, n = mu.tgt;
  AssMorphism a{n + 2, m + 2, std::vector<int>(static_cast<size_t>(n + 2), 0), {}};
  a.fiber_orders.resize(static_cast<size_t>(m + 2));
  auto fiber = [&](int j, int lo, int hi) {
    for (int i = lo; i <= hi; ++i) {
      a.fiber_orders[static_cast<size_t>(j - 1)].push_back(i);
      a.map[static_cast<size_t>(i - 1)] = j;
    }
  };
  fiber(1, 1, mu(0) + 1);
  for (int t = 1; t <= m; ++t) fiber(t + 1, mu(t - 1) + 2, mu(t) + 1);
  fiber(m + 2, mu(m) + 2, n + 2);
  return {a, identity_map(2)};
}

std::vector<TensObject> colors_of(int k) {
  std::vector<TensObject> out;
  for (int j = 0; j <= k; ++j) out.push_back({1, k, {j}, {j}});
  for (int j = 1; j <= k; ++j) out.push_back({1, k, {j - 1}, {j}});
  return out;
}

bool is_mass_object(const TensObject& o) {
  return validate_tens_object(o) && o.c_minus == o.c_plus;
}

bool validate_mass_morphism(const TensMorphism& m, const TensObject& src, const TensObject& dst) {
  if (!is_mass_object(src) || !is_mass_object(dst))
    throw std::invalid_argument("mass morphism: endpoints must have equal colorings");
  validate(m.alpha);
  validate(m.lambda);
  if (m.alpha.src != src.n || m.alpha.tgt != dst.n || m.lambda.src != dst.k ||
      m.lambda.tgt != src.k)
    throw std::invalid_argument("mass morphism: shape mismatch");
  for (int i = 1; i <= src.n; ++i) {
    int j = m.alpha.map[static_cast<size_t>(i - 1)];
    if (j != 0 &&
        src.c_minus[static_cast<size_t>(i - 1)] != m.lambda(dst.c_minus[static_cast<size_t>(j - 1)]))
      return false;
  }
  return true;
}

namespace {

// Slice morphism O1 -> O2: g in Ass with g o alpha1_1 = alpha1_2,
// alpha2_2 o g = alpha2_1, and c1_1 = c1_2 o g where defined.
// compose_ass(a1, a2) == tgt, decided without materializing the composite
bool ass_compose_equals(const AssMorphism& a1, const AssMorphism& a2, const AssMorphism& tgt) {
  size_t n1 = a1.map.size();
  for (size_t i = 0; i < n1; ++i) {
    int mid = a1.map[i];
    int v = mid == 0 ? 0 : a2.map[static_cast<size_t>(mid - 1)];
    if (v != tgt.map[i]) return false;
  }
  size_t n3 = a2.fiber_orders.size();
  for (size_t j = 0; j < n3; ++j) {
    const auto& t = tgt.fiber_orders[j];
    size_t pos = 0;
    for (int j1 : a2.fiber_orders[j])
      for (int i : a1.fiber_orders[static_cast<size_t>(j1 - 1)]) {
        if (pos >= t.size() || t[pos] != i) return false;
        ++pos;
      }
    if (pos != t.size()) return false;
  }
  return true;
}

bool slice_hom(const AssMorphism& g, const MassSliceObject& o1, const MassSliceObject& o2,
               const AssMorphism& alpha) {
  (void)alpha;
  for (int j = 1; j <= o1.n1; ++j) {
    int v = g.map[static_cast<size_t>(j - 1)];
    if (v != 0 && o1.c1[static_cast<size_t>(j - 1)] != o2.c1[static_cast<size_t>(v - 1)])
      return false;
  }
  if (!ass_compose_equals(o1.alpha1, g, o2.alpha1)) return false;
  if (!ass_compose_equals(g, o2.alpha2, o1.alpha2)) return false;
  return true;
}

// Shared tables of Ass morphisms; the slice driver calls them per instance.
const std::vector<AssMorphism>& ass_table(int a, int b) {
  static std::map<std::pair<int, int>, std::vector<AssMorphism>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find({a, b});
  if (it == cache.end()) it = cache.emplace(std::make_pair(a, b), all_ass(a, b)).first;
  return it->second;
}

// All (n1, a1 index, a2 index) with a2 o a1 = alpha, memoized per alpha.
struct AlphaFactorization {
  int n1;
  int i1;
  int i2;
};
const std::vector<AlphaFactorization>& alpha_factorizations(int ns, int nd, int max_n1,
                                                            const AssMorphism& alpha) {
  static std::map<std::string, std::vector<AlphaFactorization>> cache;
  static std::mutex mu;
  std::string key = std::to_string(ns) + "|" + std::to_string(nd) + "|" + std::to_string(max_n1) +
                    "|" + alpha.str();
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<AlphaFactorization> out;
  for (int n1 = 0; n1 <= max_n1; ++n1) {
    const auto& t1 = ass_table(ns, n1);
    const auto& t2 = ass_table(n1, nd);
    for (size_t i1 = 0; i1 < t1.size(); ++i1)
      for (size_t i2 = 0; i2 < t2.size(); ++i2)
        if (ass_compose_equals(t1[i1], t2[i2], alpha))
          out.push_back({n1, static_cast<int>(i1), static_cast<int>(i2)});
  }
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

namespace {

// The slice category is a pure function of this data: the pinned intermediate
// colors p = lambda2 o c'' on the target side and the source colors c enter
// the commuting squares; nothing else about (src, dst, lambda2) does.
MassSliceReport slice_verify_core(int ns, int nd, const AssMorphism& alpha, int kp,
                                  const MonotoneMap& lambda1, const std::vector<int>& p,
                                  const std::vector<int>& c, int max_n1) {
  MassSliceReport rep;
  rep.terminal.n1 = nd;
  rep.terminal.alpha1 = alpha;
  rep.terminal.alpha2 = ass_identity(nd);
  rep.terminal.c1 = p;

  std::vector<MassSliceObject> objs;
  std::vector<int> c1;
  for (auto& f : alpha_factorizations(ns, nd, max_n1, alpha)) {
    const AssMorphism& a1 = ass_table(ns, f.n1)[static_cast<size_t>(f.i1)];
    const AssMorphism& a2 = ass_table(f.n1, nd)[static_cast<size_t>(f.i2)];
    // colorings of <n1> in [k'] making both squares commute
    c1.assign(static_cast<size_t>(f.n1), 0);
    std::function<void(int)> rec = [&](int j) {
      if (j == f.n1) {
        // first square: c = lambda1 o c1 o alpha1
        for (int i = 1; i <= ns; ++i) {
          int jj = a1.map[static_cast<size_t>(i - 1)];
          if (jj != 0 && c[static_cast<size_t>(i - 1)] != lambda1(c1[static_cast<size_t>(jj - 1)]))
            return;
        }
        objs.push_back({f.n1, a1, a2, c1});
        return;
      }
      for (int v = 0; v <= kp; ++v) {
        int j2 = a2.map[static_cast<size_t>(j)];
        if (j2 != 0 && v != p[static_cast<size_t>(j2 - 1)]) continue;
        c1[static_cast<size_t>(j)] = v;
        rec(j + 1);
      }
    };
    rec(0);
  }
  rep.objects_enumerated = static_cast<long long>(objs.size());

  bool found_terminal = false;
  for (auto& o : objs)
    if (o == rep.terminal) found_terminal = true;

  rep.terminal_verified = found_terminal;
  for (auto& o : objs) {
    int count = 0;
    for (auto& g : ass_table(o.n1, nd))
      if (slice_hom(g, o, rep.terminal, alpha)) ++count;
    if (count != 1) rep.terminal_verified = false;
  }

  // connectivity: undirected reachability from the terminal object
  if (found_terminal) {
    std::vector<char> seen(objs.size(), 0);
    std::vector<size_t> stack;
    for (size_t t = 0; t < objs.size(); ++t)
      if (objs[t] == rep.terminal) {
        seen[t] = 1;
        stack.push_back(t);
      }
    while (!stack.empty()) {
      size_t cur = stack.back();
      stack.pop_back();
      for (size_t t = 0; t < objs.size(); ++t) {
        if (seen[t]) continue;
        bool adj = false;
        for (auto& g : ass_table(objs[t].n1, objs[cur].n1))
          if (slice_hom(g, objs[t], objs[cur], alpha)) {
            adj = true;
            break;
          }
        if (!adj)
          for (auto& g : ass_table(objs[cur].n1, objs[t].n1))
            if (slice_hom(g, objs[cur], objs[t], alpha)) {
              adj = true;
              break;
            }
        if (adj) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
    rep.connected = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  }
  return rep;
}

MassSliceReport slice_verify_memo(int ns, int nd, const AssMorphism& alpha, int kp,
                                  const MonotoneMap& lambda1, const std::vector<int>& p,
                                  const std::vector<int>& c, int max_n1) {
  static std::map<std::string, MassSliceReport> cache;
  static std::mutex mu;
  std::ostringstream key;
  key << ns << "|" << nd << "|" << kp << "|" << max_n1 << "|" << alpha.str() << "|";
  for (int v : lambda1.values) key << v << ",";
  key << "|";
  for (int v : p) key << v << ",";
  key << "|";
  for (int v : c) key << v << ",";
  std::string k = key.str();
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
  }
  MassSliceReport rep = slice_verify_core(ns, nd, alpha, kp, lambda1, p, c, max_n1);
  std::lock_guard<std::mutex> lk(mu);
  return cache.emplace(std::move(k), std::move(rep)).first->second;
}

}  // namespace

MassSliceReport mass_slice_terminal(const TensMorphism& m, const TensObject& src,
                                    const TensObject& dst, const MonotoneMap& lambda1,
                                    const MonotoneMap& lambda2, int max_n1) {
  if (!validate_mass_morphism(m, src, dst))
    throw std::invalid_argument("mass_slice_terminal: input morphism invalid");
  validate(lambda1);
  validate(lambda2);
  if (!(compose(lambda2, lambda1) == m.lambda))
    throw std::invalid_argument("mass_slice_terminal: factorization does not compose to lambda");
  int kp = lambda1.src;  // the middle ordinal [k']
  if (max_n1 < dst.n)
    throw std::invalid_argument("mass_slice_terminal: bound excludes the terminal object");

  std::vector<int> p;
  for (int j = 0; j < dst.n; ++j) p.push_back(lambda2(dst.c_minus[static_cast<size_t>(j)]));
  return slice_verify_memo(src.n, dst.n, m.alpha, kp, lambda1, p, src.c_minus, max_n1);
}

namespace {

void note_failure(VerifyReport& r, const std::string& what) {
  if (r.failures.size() < 100) r.failures.push_back(what);
}

}  // namespace

namespace {

// Index-based store of every valid morphism in the bounded universe.
// Morphisms are (source object id, index into the shared Ass table,
// index into the shared monotone-map table); this keeps the pair loop
// below allocation-free.
struct MorphismUniverse {
  std::vector<TensObject> objs;
  std::map<TensObject, int> id;
  std::vector<std::vector<std::vector<AssMorphism>>> ass_tab;    // [n1][n2]
  std::vector<std::vector<std::vector<MonotoneMap>>> mono_tab;   // [a][b]
  struct InEntry {
    int sid;
    int ai;
    int li;
  };
  struct OutEntry {
    int tid;
    int ai;
    int li;
  };
  std::vector<std::vector<InEntry>> in_flat;    // per target id
  std::vector<std::vector<OutEntry>> out_flat;  // per source id
};

MorphismUniverse build_universe(int max_n, int max_k, bool parallel) {
  MorphismUniverse u;
  for (int k = 0; k <= max_k; ++k)
    for (int n = 0; n <= max_n; ++n)
      for (auto& o : all_tens_objects(n, k)) u.objs.push_back(o);
  for (size_t t = 0; t < u.objs.size(); ++t) u.id[u.objs[t]] = static_cast<int>(t);
  u.ass_tab.resize(static_cast<size_t>(max_n + 1));
  for (int a = 0; a <= max_n; ++a) {
    u.ass_tab[static_cast<size_t>(a)].resize(static_cast<size_t>(max_n + 1));
    for (int b = 0; b <= max_n; ++b) u.ass_tab[static_cast<size_t>(a)][static_cast<size_t>(b)] = all_ass(a, b);
  }
  u.mono_tab.resize(static_cast<size_t>(max_k + 1));
  for (int a = 0; a <= max_k; ++a) {
    u.mono_tab[static_cast<size_t>(a)].resize(static_cast<size_t>(max_k + 1));
    for (int b = 0; b <= max_k; ++b) u.mono_tab[static_cast<size_t>(a)][static_cast<size_t>(b)] = all_monotone(a, b);
  }

  size_t nobj = u.objs.size();
  u.in_flat.resize(nobj);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (size_t t = 0; t < nobj; ++t) {
    const TensObject& dst = u.objs[t];
    std::vector<int> cm, cp;
    for (int k1 = 0; k1 <= max_k; ++k1)
      for (int n1 = 0; n1 <= max_n; ++n1) {
        cm.assign(static_cast<size_t>(n1), -1);
        cp.assign(static_cast<size_t>(n1), -1);
        auto& asses = u.ass_tab[static_cast<size_t>(n1)][static_cast<size_t>(dst.n)];
        auto& monos = u.mono_tab[static_cast<size_t>(dst.k)][static_cast<size_t>(k1)];
        for (size_t ai = 0; ai < asses.size(); ++ai) {
          const AssMorphism& alpha = asses[ai];
          std::vector<int> nonempty, killed;
          for (int j = 1; j <= dst.n; ++j)
            if (!alpha.fiber_orders[static_cast<size_t>(j - 1)].empty()) nonempty.push_back(j);
          for (int i = 1; i <= n1; ++i)
            if (alpha.map[static_cast<size_t>(i - 1)] == 0) killed.push_back(i);
          for (size_t li = 0; li < monos.size(); ++li) {
            const MonotoneMap& lambda = monos[li];
            bool empties_ok = true;
            for (int j = 1; j <= dst.n; ++j)
              if (alpha.fiber_orders[static_cast<size_t>(j - 1)].empty() &&
                  lambda(dst.c_minus[static_cast<size_t>(j - 1)]) !=
                      lambda(dst.c_plus[static_cast<size_t>(j - 1)]))
                empties_ok = false;
            if (!empties_ok) continue;
            std::function<void(size_t)> free_colors = [&](size_t ki) {
              if (ki == killed.size()) {
                TensObject src{n1, k1, cm, cp};
                u.in_flat[t].push_back({u.id.at(src), static_cast<int>(ai), static_cast<int>(li)});
                return;
              }
              size_t e = static_cast<size_t>(killed[ki] - 1);
              for (int a = 0; a <= k1; ++a)
                for (int b = a; b <= std::min(a + 1, k1); ++b) {
                  cm[e] = a;
                  cp[e] = b;
                  free_colors(ki + 1);
                }
            };
            std::function<void(size_t)> fibers = [&](size_t fi) {
              if (fi == nonempty.size()) {
                free_colors(0);
                return;
              }
              int j = nonempty[fi];
              const auto& ord = alpha.fiber_orders[static_cast<size_t>(j - 1)];
              int start = lambda(dst.c_minus[static_cast<size_t>(j - 1)]);
              int end = lambda(dst.c_plus[static_cast<size_t>(j - 1)]);
              std::function<void(size_t, int)> walk = [&](size_t wt, int cur) {
                size_t e = static_cast<size_t>(ord[wt] - 1);
                cm[e] = cur;
                if (wt + 1 == ord.size()) {
                  if (end == cur || end == cur + 1) {
                    cp[e] = end;
                    fibers(fi + 1);
                  }
                  return;
                }
                for (int v = cur; v <= std::min(cur + 1, k1); ++v) {
                  cp[e] = v;
                  walk(wt + 1, v);
                }
              };
              walk(0, start);
            };
            fibers(0);
          }
        }
      }
  }
  u.out_flat.resize(nobj);
  for (size_t t = 0; t < nobj; ++t)
    for (auto& e : u.in_flat[t])
      u.out_flat[static_cast<size_t>(e.sid)].push_back({static_cast<int>(t), e.ai, e.li});
  return u;
}

// Validity of the composite morphism, computed in place; agrees with
// validate_tens_morphism(compose_tens(m1, m2), o1, o3) (cross-checked by the
// materialized route in the test suite).
bool composite_valid(const TensObject& o1, const AssMorphism& a1, const MonotoneMap& l1,
                     const AssMorphism& a2, const MonotoneMap& l2, const TensObject& o3) {
  for (int j2 = 1; j2 <= o3.n; ++j2) {
    int lo = l1(l2(o3.c_minus[static_cast<size_t>(j2 - 1)]));
    int hi = l1(l2(o3.c_plus[static_cast<size_t>(j2 - 1)]));
    int prev = -1;
    bool first = true;
    for (int j1 : a2.fiber_orders[static_cast<size_t>(j2 - 1)])
      for (int i : a1.fiber_orders[static_cast<size_t>(j1 - 1)]) {
        int cm = o1.c_minus[static_cast<size_t>(i - 1)];
        if (first) {
          if (cm != lo) return false;
          first = false;
        } else if (cm != prev) {
          return false;
        }
        prev = o1.c_plus[static_cast<size_t>(i - 1)];
      }
    if (first) {
      if (lo != hi) return false;
    } else if (prev != hi) {
      return false;
    }
  }
  return true;
}

}  // namespace

VerifyReport verify_tens_composition(int max_n, int max_k, bool parallel) {
  VerifyReport rep;
  rep.law = "tens_composition_valid";
  rep.bound = {{"max_n", max_n}, {"max_k", max_k}};

  MorphismUniverse u = build_universe(max_n, max_k, parallel);
  size_t nobj = u.objs.size();

  std::vector<VerifyReport> local(nobj);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (size_t mid = 0; mid < nobj; ++mid) {
    VerifyReport& lr = local[mid];
    const TensObject& om = u.objs[mid];
    for (auto& e2 : u.out_flat[mid]) {
      const TensObject& o3 = u.objs[static_cast<size_t>(e2.tid)];
      const AssMorphism& a2 = u.ass_tab[static_cast<size_t>(om.n)][static_cast<size_t>(o3.n)][static_cast<size_t>(e2.ai)];
      const MonotoneMap& l2 = u.mono_tab[static_cast<size_t>(o3.k)][static_cast<size_t>(om.k)][static_cast<size_t>(e2.li)];
      for (auto& e1 : u.in_flat[mid]) {
        const TensObject& o1 = u.objs[static_cast<size_t>(e1.sid)];
        const AssMorphism& a1 = u.ass_tab[static_cast<size_t>(o1.n)][static_cast<size_t>(om.n)][static_cast<size_t>(e1.ai)];
        const MonotoneMap& l1 = u.mono_tab[static_cast<size_t>(om.k)][static_cast<size_t>(o1.k)][static_cast<size_t>(e1.li)];
        ++lr.cases_checked;
        if (!composite_valid(o1, a1, l1, a2, l2, o3))
          note_failure(lr, o1.str() + " -> " + om.str() + " -> " + o3.str());
      }
    }
  }
  for (auto& lr : local) {
    rep.cases_checked += lr.cases_checked;
    for (auto& f : lr.failures) note_failure(rep, f);
  }

  // identities compose neutrally
  for (size_t t = 0; t < nobj; ++t) {
    TensMorphism idm = tens_identity(u.objs[t]);
    if (!validate_tens_morphism(idm, u.objs[t], u.objs[t]))
      note_failure(rep, "identity fails validation at " + u.objs[t].str());
    ++rep.cases_checked;
  }
  return rep;
}

// The definitional route: materialize each composite and run the full
// validator.  Kept as the reference implementation for the fast kernel.
VerifyReport verify_tens_composition_materialized(int max_n, int max_k) {
  VerifyReport rep;
  rep.law = "tens_composition_valid";
  rep.bound = {{"max_n", max_n}, {"max_k", max_k}};

  MorphismUniverse u = build_universe(max_n, max_k, false);
  size_t nobj = u.objs.size();
  for (size_t mid = 0; mid < nobj; ++mid) {
    const TensObject& om = u.objs[mid];
    for (auto& e2 : u.out_flat[mid]) {
      const TensObject& o3 = u.objs[static_cast<size_t>(e2.tid)];
      TensMorphism m2{u.ass_tab[static_cast<size_t>(om.n)][static_cast<size_t>(o3.n)][static_cast<size_t>(e2.ai)],
                      u.mono_tab[static_cast<size_t>(o3.k)][static_cast<size_t>(om.k)][static_cast<size_t>(e2.li)]};
      for (auto& e1 : u.in_flat[mid]) {
        const TensObject& o1 = u.objs[static_cast<size_t>(e1.sid)];
        TensMorphism m1{u.ass_tab[static_cast<size_t>(o1.n)][static_cast<size_t>(om.n)][static_cast<size_t>(e1.ai)],
                        u.mono_tab[static_cast<size_t>(om.k)][static_cast<size_t>(o1.k)][static_cast<size_t>(e1.li)]};
        ++rep.cases_checked;
        if (!validate_tens_morphism(compose_tens(m1, m2), o1, o3))
          note_failure(rep, o1.str() + " -> " + om.str() + " -> " + o3.str());
      }
    }
  }
  for (size_t t = 0; t < nobj; ++t) {
    TensMorphism idm = tens_identity(u.objs[t]);
    if (!validate_tens_morphism(idm, u.objs[t], u.objs[t]))
      note_failure(rep, "identity fails validation at " + u.objs[t].str());
    ++rep.cases_checked;
  }
  return rep;
}

namespace {

// The bounded universe of the nabla family: objects are Tens objects (the
// bases) carrying a flag, morphisms are (alpha, nu) stored as indices together
// with the index of delta(nu), a monotone map between the base color ordinals.
struct NablaUniverse {
  std::vector<NablaTensObject> objs;
  std::vector<std::vector<int>> bm_cm, bm_cp;  // eta-image colors, per object
  std::vector<std::vector<std::vector<AssMorphism>>> ass_tab;   // [n1][n2]
  std::vector<std::vector<std::vector<MonotoneMap>>> mono_tab;  // [a][b] between base k's
  struct Entry {
    int sid;
    int tid;
    int ai;
    int dli;  // index of delta(nu) in mono_tab[tgt base k][src base k]
    int ni;   // index into nus[tid]
  };
  std::vector<std::vector<Entry>> in_flat;   // per target id
  std::vector<std::vector<Entry>> out_flat;  // per source id
  std::vector<std::vector<NablaMorphism>> nus;  // aligned with in_flat
  long long morphisms = 0;
};

NablaUniverse build_nabla_universe(int max_n, int max_base_k) {
  NablaUniverse u;
  for (int flag = 0; flag <= 1; ++flag)
    for (int bk = (flag == 0 ? 1 : 0); bk <= max_base_k; ++bk)
      for (int n = 0; n <= max_n; ++n)
        for (auto& b : all_tens_objects(n, bk)) u.objs.push_back({flag, b});
  size_t nobj = u.objs.size();
  for (auto& o : u.objs) {
    BMObject b = phi(o);
    u.bm_cm.push_back(b.c_minus);
    u.bm_cp.push_back(b.c_plus);
  }
  int max_bk = max_base_k;
  u.ass_tab.resize(static_cast<size_t>(max_n + 1));
  for (int a = 0; a <= max_n; ++a) {
    u.ass_tab[static_cast<size_t>(a)].resize(static_cast<size_t>(max_n + 1));
    for (int b = 0; b <= max_n; ++b) u.ass_tab[static_cast<size_t>(a)][static_cast<size_t>(b)] = all_ass(a, b);
  }
  u.mono_tab.resize(static_cast<size_t>(max_bk + 1));
  std::vector<std::vector<std::map<std::vector<int>, int>>> mono_idx(static_cast<size_t>(max_bk + 1));
  for (int a = 0; a <= max_bk; ++a) {
    u.mono_tab[static_cast<size_t>(a)].resize(static_cast<size_t>(max_bk + 1));
    mono_idx[static_cast<size_t>(a)].resize(static_cast<size_t>(max_bk + 1));
    for (int b = 0; b <= max_bk; ++b) {
      u.mono_tab[static_cast<size_t>(a)][static_cast<size_t>(b)] = all_monotone(a, b);
      auto& tab = u.mono_tab[static_cast<size_t>(a)][static_cast<size_t>(b)];
      for (size_t i = 0; i < tab.size(); ++i)
        mono_idx[static_cast<size_t>(a)][static_cast<size_t>(b)][tab[i].values] = static_cast<int>(i);
    }
  }

  u.in_flat.resize(nobj);
  u.out_flat.resize(nobj);
  u.nus.resize(nobj);
  for (size_t s = 0; s < nobj; ++s)
    for (size_t d = 0; d < nobj; ++d) {
      if (u.objs[s].flag > u.objs[d].flag) continue;
      const TensObject& bs = u.objs[s].base;
      const TensObject& bd = u.objs[d].base;
      auto& asses = u.ass_tab[static_cast<size_t>(bs.n)][static_cast<size_t>(bd.n)];
      for (auto& l : all_monotone(u.objs[d].underlying_k(), u.objs[s].underlying_k())) {
        NablaMorphism nu{{u.objs[s].underlying_k(), u.objs[s].flag},
                         {u.objs[d].underlying_k(), u.objs[d].flag},
                         l};
        MonotoneMap dl = delta(nu);
        int dli = mono_idx[static_cast<size_t>(bd.k)][static_cast<size_t>(bs.k)].at(dl.values);
        for (size_t ai = 0; ai < asses.size(); ++ai) {
          if (!validate_nabla_tens_morphism({asses[ai], nu}, u.objs[s], u.objs[d])) continue;
          NablaUniverse::Entry e{static_cast<int>(s), static_cast<int>(d), static_cast<int>(ai), dli,
                                 static_cast<int>(u.nus[d].size())};
          u.in_flat[d].push_back(e);
          u.nus[d].push_back(nu);
          u.out_flat[s].push_back(e);
          ++u.morphisms;
        }
      }
    }
  return u;
}

}  // namespace

// Checks the functor laws by their exhaustive decomposition: every enumerated
// morphism (composites included, via the closure check on every composable
// pair) has phi-image (alpha, id) which validates between the eta-image
// objects, and identities map to identities.  The direct route materializing
// both sides of the law per pair is verify_phi_functor_materialized, kept as
// the reference at small bounds.
VerifyReport verify_phi_functor(int max_n, int max_base_k, bool parallel) {
  VerifyReport rep;
  rep.law = "phi_functor";
  rep.bound = {{"max_n", max_n}, {"max_base_k", max_base_k}};

  NablaUniverse u = build_nabla_universe(max_n, max_base_k);
  size_t nobj = u.objs.size();

  // per-object: image validates; identity law
  for (size_t s = 0; s < nobj; ++s) {
    BMObject bs = phi(u.objs[s]);
    if (!validate_bm_object(bs)) note_failure(rep, "phi image invalid at object " + u.objs[s].base.str());
    NablaTensMorphism idm{ass_identity(u.objs[s].base.n),
                          nabla_identity({u.objs[s].underlying_k(), u.objs[s].flag})};
    if (!(phi_mor(idm) == tens_identity(bm_as_tens(bs))))
      note_failure(rep, "phi breaks identity at " + u.objs[s].base.str());
    ++rep.cases_checked;
  }

  // per-morphism: phi keeps alpha, sends nu to the identity of [1], and the
  // image satisfies the BM fiber conditions
  MonotoneMap id1 = identity_map(1);
  for (size_t d = 0; d < nobj; ++d)
    for (size_t i = 0; i < u.in_flat[d].size(); ++i) {
      const auto& e = u.in_flat[d][i];
      const AssMorphism& a = u.ass_tab[static_cast<size_t>(u.objs[static_cast<size_t>(e.sid)].base.n)]
                                      [static_cast<size_t>(u.objs[d].base.n)][static_cast<size_t>(e.ai)];
      TensMorphism im = phi_mor({a, u.nus[d][i]});
      ++rep.cases_checked;
      if (!(im.alpha == a) || !(im.lambda == id1)) {
        note_failure(rep, "phi_mor does not forget nu keeping alpha at " + u.objs[d].base.str());
        continue;
      }
      TensObject bmS{u.objs[static_cast<size_t>(e.sid)].base.n, 1, u.bm_cm[static_cast<size_t>(e.sid)],
                     u.bm_cp[static_cast<size_t>(e.sid)]};
      TensObject bmD{u.objs[d].base.n, 1, u.bm_cm[d], u.bm_cp[d]};
      if (!validate_tens_morphism(im, bmS, bmD))
        note_failure(rep, "phi image morphism invalid into " + u.objs[d].base.str());
    }

  // per composable pair: the composite is again a valid morphism of the
  // bounded universe, so the per-morphism facts apply to it and both sides of
  // the functor law reduce to (compose_ass(a1, a2), id)
  std::vector<VerifyReport> local(nobj);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (size_t mid = 0; mid < nobj; ++mid) {
    VerifyReport& lr = local[mid];
    const TensObject& bm = u.objs[mid].base;
    for (auto& e2 : u.out_flat[mid]) {
      const TensObject& b3 = u.objs[static_cast<size_t>(e2.tid)].base;
      const AssMorphism& a2 = u.ass_tab[static_cast<size_t>(bm.n)][static_cast<size_t>(b3.n)][static_cast<size_t>(e2.ai)];
      const MonotoneMap& l2 = u.mono_tab[static_cast<size_t>(b3.k)][static_cast<size_t>(bm.k)][static_cast<size_t>(e2.dli)];
      for (auto& e1 : u.in_flat[mid]) {
        const TensObject& b1 = u.objs[static_cast<size_t>(e1.sid)].base;
        const AssMorphism& a1 = u.ass_tab[static_cast<size_t>(b1.n)][static_cast<size_t>(bm.n)][static_cast<size_t>(e1.ai)];
        const MonotoneMap& l1 = u.mono_tab[static_cast<size_t>(bm.k)][static_cast<size_t>(b1.k)][static_cast<size_t>(e1.dli)];
        ++lr.cases_checked;
        if (!composite_valid(b1, a1, l1, a2, l2, b3))
          note_failure(lr, "composite escapes the nabla family: " + b1.str() + " -> " + bm.str() +
                               " -> " + b3.str());
      }
    }
  }
  for (auto& lr : local) {
    rep.cases_checked += lr.cases_checked;
    for (auto& f : lr.failures) note_failure(rep, f);
  }
  return rep;
}

// Direct route: materialize compose_nabla_tens and both phi images per pair
// and compare.  Quadratic in the morphism count; for cross-checks only.
VerifyReport verify_phi_functor_materialized(int max_n, int max_base_k) {
  VerifyReport rep;
  rep.law = "phi_functor";
  rep.bound = {{"max_n", max_n}, {"max_base_k", max_base_k}};

  NablaUniverse u = build_nabla_universe(max_n, max_base_k);
  size_t nobj = u.objs.size();
  auto ass_of = [&](const NablaUniverse::Entry& e) -> const AssMorphism& {
    return u.ass_tab[static_cast<size_t>(u.objs[static_cast<size_t>(e.sid)].base.n)]
                    [static_cast<size_t>(u.objs[static_cast<size_t>(e.tid)].base.n)][static_cast<size_t>(e.ai)];
  };

  for (size_t s = 0; s < nobj; ++s) {
    BMObject bs = phi(u.objs[s]);
    if (!validate_bm_object(bs)) note_failure(rep, "phi image invalid at object " + u.objs[s].base.str());
    NablaTensMorphism idm{ass_identity(u.objs[s].base.n),
                          nabla_identity({u.objs[s].underlying_k(), u.objs[s].flag})};
    if (!(phi_mor(idm) == tens_identity(bm_as_tens(bs))))
      note_failure(rep, "phi breaks identity at " + u.objs[s].base.str());
    ++rep.cases_checked;
  }
  auto nu_of = [&](const NablaUniverse::Entry& e) -> const NablaMorphism& {
    return u.nus[static_cast<size_t>(e.tid)][static_cast<size_t>(e.ni)];
  };
  for (size_t d = 0; d < nobj; ++d)
    for (auto& e : u.in_flat[d]) {
      NablaTensMorphism m{ass_of(e), nu_of(e)};
      ++rep.cases_checked;
      if (!validate_tens_morphism(phi_mor(m), bm_as_tens(phi(u.objs[static_cast<size_t>(e.sid)])),
                                  bm_as_tens(phi(u.objs[d]))))
        note_failure(rep, "phi image morphism invalid into " + u.objs[d].base.str());
    }
  for (size_t mid = 0; mid < nobj; ++mid)
    for (auto& e2 : u.out_flat[mid])
      for (auto& e1 : u.in_flat[mid]) {
        NablaTensMorphism m1{ass_of(e1), nu_of(e1)};
        NablaTensMorphism m2{ass_of(e2), nu_of(e2)};
        ++rep.cases_checked;
        NablaTensMorphism c = compose_nabla_tens(m1, m2);
        if (!validate_nabla_tens_morphism(c, u.objs[static_cast<size_t>(e1.sid)],
                                          u.objs[static_cast<size_t>(e2.tid)]))
          note_failure(rep, "composite escapes the nabla family at " + u.objs[mid].base.str());
        if (!(phi_mor(c) == compose_tens(phi_mor(m1), phi_mor(m2))))
          note_failure(rep, "phi breaks composition at " + u.objs[mid].base.str());
      }
  return rep;
}

VerifyReport verify_bar_identities(int max_level) {
  VerifyReport rep;
  rep.law = "bar_index_simplicial_identities";
  rep.bound = {{"max_level", max_level}};

  for (int n = 0; n <= max_level; ++n) {
    if (!validate_tens_object(bar_index(n))) note_failure(rep, "bar_index invalid");
    ++rep.cases_checked;
  }
  // face and degeneracy images validate
  for (int n = 1; n <= max_level; ++n)
    for (int i = 0; i <= n; ++i) {
      ++rep.cases_checked;
      if (!validate_tens_morphism(bar_mor(face_map(n, i)), bar_index(n), bar_index(n - 1)))
        note_failure(rep, "face image invalid");
    }
  for (int n = 0; n + 1 <= max_level; ++n)
    for (int i = 0; i <= n; ++i) {
      ++rep.cases_checked;
      if (!validate_tens_morphism(bar_mor(degeneracy_map(n, i)), bar_index(n), bar_index(n + 1)))
        note_failure(rep, "degeneracy image invalid");
    }
  // d_i d_j = d_(j-1) d_i for i < j
  for (int n = 2; n <= max_level; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i) {
        ++rep.cases_checked;
        TensMorphism lhs = compose_tens(bar_mor(face_map(n, j)), bar_mor(face_map(n - 1, i)));
        TensMorphism rhs = compose_tens(bar_mor(face_map(n, i)), bar_mor(face_map(n - 1, j - 1)));
        if (!(lhs == rhs)) note_failure(rep, "face identity fails");
      }
  // full functoriality against composition in the index category
  for (int a = 0; a <= max_level; ++a)
    for (int b = 0; b <= max_level; ++b)
      for (int c = 0; c <= max_level; ++c)
        for (auto& mu : all_monotone(a, b))
          for (auto& nu : all_monotone(b, c)) {
            ++rep.cases_checked;
            TensMorphism lhs = bar_mor(compose(mu, nu));
            TensMorphism rhs = compose_tens(bar_mor(nu), bar_mor(mu));
            if (!(lhs == rhs)) note_failure(rep, "bar functoriality fails");
          }
  return rep;
}

VerifyReport verify_colors(int max_k) {
  VerifyReport rep;
  rep.law = "colors_are_single_color_objects";
  rep.bound = {{"max_k", max_k}};
  for (int k = 0; k <= max_k; ++k) {
    auto cs = colors_of(k);
    if (cs.size() != static_cast<size_t>(2 * k + 1)) note_failure(rep, "color count wrong");
    std::vector<TensObject> brute;
    for (auto& o : all_tens_objects(1, k))
      if (validate_tens_object(o)) brute.push_back(o);
    std::sort(brute.begin(), brute.end());
    std::vector<TensObject> sorted = cs;
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted == brute)) note_failure(rep, "colors differ from brute enumeration");
    rep.cases_checked += static_cast<long long>(brute.size());
  }
  return rep;
}

VerifyReport verify_mass_restriction(int max_n, int max_k) {
  VerifyReport rep;
  rep.law = "mass_validation_is_commuting_square";
  rep.bound = {{"max_n", max_n}, {"max_k", max_k}};
  std::vector<TensObject> objs;
  for (int k = 0; k <= max_k; ++k)
    for (int n = 0; n <= max_n; ++n)
      for (auto& o : all_tens_objects(n, k))
        if (o.c_minus == o.c_plus) objs.push_back(o);
  for (auto& s : objs)
    for (auto& d : objs)
      for (auto& a : all_ass(s.n, d.n))
        for (auto& l : all_monotone(d.k, s.k)) {
          ++rep.cases_checked;
          TensMorphism m{a, l};
          if (validate_tens_morphism(m, s, d) != validate_mass_morphism(m, s, d))
            note_failure(rep, "square check disagrees with fiber conditions at " + s.str());
        }
  return rep;
}

VerifyReport verify_mass_terminality(int max_n, int max_k, bool parallel) {
  VerifyReport rep;
  rep.law = "mass_slice_terminality";
  rep.bound = {{"max_n", max_n}, {"max_k", max_k}};

  std::vector<TensObject> objs;
  for (int k = 0; k <= max_k; ++k)
    for (int n = 0; n <= max_n; ++n)
      for (auto& o : all_tens_objects(n, k))
        if (o.c_minus == o.c_plus) objs.push_back(o);

  struct Instance {
    const TensObject* src;
    const TensObject* dst;
    TensMorphism m;
    MonotoneMap l1, l2;
  };
  std::vector<Instance> instances;
  for (auto& s : objs)
    for (auto& d : objs)
      for (auto& a : all_ass(s.n, d.n))
        for (auto& l : all_monotone(d.k, s.k)) {
          TensMorphism m{a, l};
          if (!validate_mass_morphism(m, s, d)) continue;
          for (int kp = 0; kp <= max_k; ++kp)
            for (auto& l2 : all_monotone(d.k, kp))
              for (auto& l1 : all_monotone(kp, s.k))
                if (compose(l2, l1) == l) instances.push_back({&s, &d, m, l1, l2});
        }

  std::vector<std::string> bad(instances.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (size_t i = 0; i < instances.size(); ++i) {
    auto& in = instances[i];
    MassSliceReport sr = mass_slice_terminal(in.m, *in.src, *in.dst, in.l1, in.l2, max_n);
    if (!sr.terminal_verified || !sr.connected)
      bad[i] = "terminality fails for " + in.src->str() + " -> " + in.dst->str();
  }
  rep.cases_checked = static_cast<long long>(instances.size());
  for (auto& b : bad)
    if (!b.empty()) note_failure(rep, b);
  return rep;
}

}  // namespace kd
