#pragma once

#include "kd/matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace kd {

// Degree interval [lo, hi]; homological claims are reliable only at interior
// degrees, where both neighbours are inside the window.
struct Window {
  int lo = 0;
  int hi = 0;

  bool contains(int n) const { return lo <= n && n <= hi; }
  bool interior(int n) const { return lo <= n - 1 && n + 1 <= hi; }
  bool operator==(const Window&) const = default;
};

// Finite-type Z-graded chain complex over an exact field. The differential
// has degree -1; d_n : C_n -> C_{n-1}. d o d = 0 is checked at construction
// and at every operation that builds a complex.
class ChainComplex {
 public:
  // Zero complex over Q on the one-degree window; placeholder state.
  ChainComplex() : ChainComplex(Field::rationals(), Window{0, 0}) {}
  // Zero complex on the window.
  ChainComplex(const Field& f, Window w);
  // dims: degree -> dimension; diffs[n] has shape dims(n-1) x dims(n).
  // Missing differentials mean zero. Throws on shape or d^2 violations.
  static ChainComplex build(const Field& f, Window w, const std::map<int, int>& dims,
                            const std::map<int, SparseMatrix>& diffs, bool truncated = false);

  const Field& field() const { return f_; }
  const Window& window() const { return w_; }
  int dim(int n) const;
  // d_n : C_n -> C_{n-1}; zero matrix of the right shape when absent.
  SparseMatrix diff(int n) const;
  // Set when a tensor product pushed basis elements outside the window; homology
  // near the cut is then meaningless and reported degrees carry the edge flag.
  bool truncated() const { return truncated_; }
  long long total_dim() const;
  bool operator==(const ChainComplex& o) const;

 private:
  Field f_;
  Window w_;
  bool truncated_ = false;
  std::map<int, int> dims_;
  std::map<int, SparseMatrix> diffs_;
};

// The monoidal unit: the field in degree 0.
ChainComplex unit_complex(const Field& f, Window w);
// One-dimensional complex concentrated in the given degree.
ChainComplex point_complex(const Field& f, Window w, int degree);

struct HomologyResult {
  int degree;
  int rank;
  // set when a window edge (or a truncation) makes the rank unreliable
  bool edge_unreliable;
  // columns represent classes spanning H_n together with the boundaries
  SparseMatrix representatives;
};

// rank = dim ker d_n - rank d_{n+1}, by exact elimination.
HomologyResult homology(const ChainComplex& x, int n);

struct HomologyRow {
  int degree;
  int rank;
  bool edge_unreliable;
};

// One row per degree of the window. The parallel flag switches the OpenMP
// kernel; both paths produce identical tables.
std::vector<HomologyRow> homology_table(const ChainComplex& x, bool parallel = true);

// Degreewise map of complexes (degree 0); commutation with the differentials
// is checked at construction.
class ChainMap {
 public:
  static ChainMap build(const ChainComplex& src, const ChainComplex& dst,
                        const std::map<int, SparseMatrix>& components);
  static ChainMap identity(const ChainComplex& x);
  static ChainMap zero(const ChainComplex& src, const ChainComplex& dst);

  const ChainComplex& src() const { return src_; }
  const ChainComplex& dst() const { return dst_; }
  SparseMatrix component(int n) const;
  bool operator==(const ChainMap& o) const;

 private:
  ChainMap(ChainComplex s, ChainComplex d) : src_(std::move(s)), dst_(std::move(d)) {}
  ChainComplex src_;
  ChainComplex dst_;
  std::map<int, SparseMatrix> comp_;
};

ChainMap compose(const ChainMap& f, const ChainMap& g);  // g after f

// (X (x) Y)_n = (+)_p X_p (x) Y_{n-p}, blocks in ascending p, left factor
// index major inside a block; d(x(x)y) = dx(x)y + (-1)^{|x|} x(x)dy.
// Basis elements pushed outside the window set the truncation marker.
ChainComplex tensor(const ChainComplex& x, const ChainComplex& y);

// Public basis-order contract of tensor: the blocks of (X (x) Y)_n in order,
// ascending left degree p, skipping empty ones; inside a block the index is
// i * dim Y_{n-p} + j.
struct TensorBlock {
  int p;
  int offset;
};
std::vector<TensorBlock> tensor_blocks(const ChainComplex& x, const ChainComplex& y, int n);
// (f(x)g)(x(x)y) = (-1)^{|g||x|} f(x)(x)g(y); components here have degree 0,
// so the sign is trivial, but the formula is kept for the record.
ChainMap tensor_map(const ChainMap& f, const ChainMap& g);

// Coherence isomorphisms as explicit chain maps (exact permutation matrices).
// Throws if truncation makes the two sides differ.
ChainMap assoc_iso(const ChainComplex& x, const ChainComplex& y, const ChainComplex& z);
ChainMap left_unit_iso(const ChainComplex& x);   // 1 (x) X -> X
ChainMap right_unit_iso(const ChainComplex& x);  // X (x) 1 -> X

struct QuasiIsoRow {
  int degree;
  bool iso;
  bool edge_unreliable;
};

struct QuasiIsoReport {
  bool verdict;  // true iff iso at every interior degree
  std::vector<QuasiIsoRow> rows;
};

QuasiIsoReport is_quasi_iso(const ChainMap& f);

}  // namespace kd
