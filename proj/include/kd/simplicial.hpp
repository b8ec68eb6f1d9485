#pragma once

#include <string>
#include <vector>

namespace kd {

// The ordinal [n] = {0, ..., n}.
struct Ordinal {
  int n = 0;
  int size() const { return n + 1; }
  bool operator==(const Ordinal& o) const { return n == o.n; }
};

// Monotone map [src] -> [tgt], stored as the full value table.
struct MonotoneMap {
  int src = 0;
  int tgt = 0;
  std::vector<int> values;  // size src+1, weakly increasing, in [0, tgt]

  int operator()(int i) const { return values.at(static_cast<size_t>(i)); }
  bool operator==(const MonotoneMap& o) const {
    return src == o.src && tgt == o.tgt && values == o.values;
  }
  bool operator<(const MonotoneMap& o) const {
    if (src != o.src) return src < o.src;
    if (tgt != o.tgt) return tgt < o.tgt;
    return values < o.values;
  }
  std::string str() const;
};

// Throws std::invalid_argument on malformed data.
void validate(const MonotoneMap& f);

MonotoneMap identity_map(int n);
// f followed by g (returns g o f); throws on boundary mismatch.
MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g);
// Image is an interval of consecutive integers.
bool is_convex(const MonotoneMap& f);

// Cofaces and codegeneracies of Delta.
MonotoneMap face_map(int n, int i);        // [n-1] -> [n], skips i
MonotoneMap degeneracy_map(int n, int i);  // [n+1] -> [n], repeats i
MonotoneMap constant_map(int src, int tgt, int value);

// [k]+ adjoins a new maximum; f+ extends f by max -> max.
MonotoneMap plus(const MonotoneMap& f);

// Objects of the category used to index two-sided bar data: a pair
// ([k], flag) with flag in {0,1}; the simplex part is contravariant.
struct NablaObject {
  int k = 0;
  int flag = 0;
  bool operator==(const NablaObject& o) const { return k == o.k && flag == o.flag; }
};

// Morphism ([k],e) -> ([k'],e'): a monotone map [k'] -> [k] plus e <= e'.
struct NablaMorphism {
  NablaObject src;
  NablaObject tgt;
  MonotoneMap lambda;  // [tgt.k] -> [src.k]
};

void validate(const NablaMorphism& m);
NablaMorphism nabla_identity(const NablaObject& a);
NablaMorphism nabla_compose(const NablaMorphism& m2, const NablaMorphism& m1);

// delta sends ([k],0) to [k]+ and ([k],1) to [k]; contravariant on maps,
// so delta of m : A -> B is a monotone map delta_obj(B) -> delta_obj(A).
Ordinal delta_obj(const NablaObject& a);
MonotoneMap delta(const NablaMorphism& m);

// eta_A : delta_obj(A) -> [1]; flag 0 sends only the adjoined max to 1,
// flag 1 is constant 0.  Natural: eta_A o delta(m) = eta_B for m : A -> B.
MonotoneMap eta(const NablaObject& a);

// All monotone maps [a] -> [b] in lexicographic order.
std::vector<MonotoneMap> all_monotone(int a, int b);

}  // namespace kd
