#include "kd/chains.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("chains: " + what); }

bool is_zero_matrix(const SparseMatrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!m.at(r, c).is_zero()) return false;
  return true;
}

}  // namespace

ChainComplex::ChainComplex(const Field& f, Window w) : f_(f), w_(w) {
  if (w.lo > w.hi) fail("empty window");
}

ChainComplex ChainComplex::build(const Field& f, Window w, const std::map<int, int>& dims,
                                 const std::map<int, SparseMatrix>& diffs, bool truncated) {
  ChainComplex x(f, w);
  x.truncated_ = truncated;
  for (auto& [n, d] : dims) {
    if (d < 0) fail("negative dimension");
    if (d > 0 && !w.contains(n)) fail("dimension outside window at degree " + std::to_string(n));
    if (d > 0) x.dims_[n] = d;
  }
  for (auto& [n, m] : diffs) {
    if (m.rows() != x.dim(n - 1) || m.cols() != x.dim(n))
      fail("differential shape mismatch at degree " + std::to_string(n));
    if (!is_zero_matrix(m)) x.diffs_.emplace(n, m);
  }
  for (auto& [n, m] : x.diffs_) {
    auto next = x.diffs_.find(n + 1);
    if (next == x.diffs_.end()) continue;
    if (!is_zero_matrix(m * next->second)) fail("d^2 != 0 at degree " + std::to_string(n + 1));
  }
  return x;
}

int ChainComplex::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

SparseMatrix ChainComplex::diff(int n) const {
  auto it = diffs_.find(n);
  if (it != diffs_.end()) return it->second;
  return SparseMatrix(f_, dim(n - 1), dim(n));
}

long long ChainComplex::total_dim() const {
  long long t = 0;
  for (auto& [n, d] : dims_) t += d;
  return t;
}

bool ChainComplex::operator==(const ChainComplex& o) const {
  if (!(f_ == o.f_) || !(w_ == o.w_) || truncated_ != o.truncated_ || dims_ != o.dims_) return false;
  for (auto& [n, d] : dims_)
    if (!(diff(n) == o.diff(n))) return false;
  return true;
}

ChainComplex unit_complex(const Field& f, Window w) { return point_complex(f, w, 0); }

ChainComplex point_complex(const Field& f, Window w, int degree) {
  return ChainComplex::build(f, w, {{degree, 1}}, {});
}

HomologyResult homology(const ChainComplex& x, int n) {
  bool edge = !x.window().interior(n) || x.truncated();
  if (x.dim(n) == 0) return {n, 0, edge, SparseMatrix(x.field(), 0, 0)};
  SparseMatrix cycles = x.diff(n).kernel();
  SparseMatrix boundaries = x.diff(n + 1);
  int rank_b = boundaries.rank();
  int rank = cycles.cols() - rank_b;
  // complete the boundaries by kernel columns to exhibit representatives
  SparseMatrix m = boundaries;
  int got = rank_b;
  std::vector<SparseMatrix::Entry> picked;
  int picked_cols = 0;
  for (int c = 0; c < cycles.cols() && picked_cols < rank; ++c) {
    MatrixBuilder cb(x.field(), x.dim(n), 1);
    for (int i = 0; i < x.dim(n); ++i)
      if (!cycles.at(i, c).is_zero()) cb.add(i, 0, cycles.at(i, c));
    SparseMatrix trial = hcat(m, cb.build());
    if (trial.rank() > got) {
      ++got;
      for (int i = 0; i < x.dim(n); ++i)
        if (!cycles.at(i, c).is_zero()) picked.push_back({i, picked_cols, cycles.at(i, c)});
      ++picked_cols;
      m = std::move(trial);
    }
  }
  return {n, rank, edge,
          SparseMatrix::from_entries(x.field(), x.dim(n), picked_cols, picked)};
}

std::vector<HomologyRow> homology_table(const ChainComplex& x, bool parallel) {
  int lo = x.window().lo, hi = x.window().hi;
  std::vector<HomologyRow> rows(hi - lo + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int n = lo; n <= hi; ++n) {
    HomologyResult h = homology(x, n);
    rows[n - lo] = {n, h.rank, h.edge_unreliable};
  }
  return rows;
}

ChainMap ChainMap::build(const ChainComplex& src, const ChainComplex& dst,
                         const std::map<int, SparseMatrix>& components) {
  ChainMap f(src, dst);
  for (auto& [n, m] : components) {
    if (m.rows() != dst.dim(n) || m.cols() != src.dim(n))
      fail("chain map shape mismatch at degree " + std::to_string(n));
    if (!is_zero_matrix(m)) f.comp_.emplace(n, m);
  }
  int lo = std::min(src.window().lo, dst.window().lo);
  int hi = std::max(src.window().hi, dst.window().hi);
  for (int n = lo; n <= hi; ++n) {
    if (!(dst.diff(n) * f.component(n) == f.component(n - 1) * src.diff(n)))
      fail("chain map does not commute with d at degree " + std::to_string(n));
  }
  return f;
}

ChainMap ChainMap::identity(const ChainComplex& x) {
  std::map<int, SparseMatrix> comps;
  for (int n = x.window().lo; n <= x.window().hi; ++n)
    if (x.dim(n) > 0) comps.emplace(n, SparseMatrix::identity(x.field(), x.dim(n)));
  return build(x, x, comps);
}

ChainMap ChainMap::zero(const ChainComplex& src, const ChainComplex& dst) {
  return build(src, dst, {});
}

SparseMatrix ChainMap::component(int n) const {
  auto it = comp_.find(n);
  if (it != comp_.end()) return it->second;
  return SparseMatrix(src_.field(), dst_.dim(n), src_.dim(n));
}

bool ChainMap::operator==(const ChainMap& o) const {
  if (!(src_ == o.src_) || !(dst_ == o.dst_)) return false;
  int lo = src_.window().lo, hi = src_.window().hi;
  for (int n = lo; n <= hi; ++n)
    if (!(component(n) == o.component(n))) return false;
  return true;
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
  if (!(f.dst() == g.src())) fail("compose: middle complexes differ");
  std::map<int, SparseMatrix> comps;
  const Window& w = f.src().window();
  for (int n = w.lo; n <= w.hi; ++n)
    if (f.src().dim(n) > 0 && g.dst().dim(n) > 0) comps.emplace(n, g.component(n) * f.component(n));
  return ChainMap::build(f.src(), g.dst(), comps);
}

std::vector<TensorBlock> tensor_blocks(const ChainComplex& x, const ChainComplex& y, int n) {
  std::vector<TensorBlock> blocks;
  int off = 0;
  for (int p = x.window().lo; p <= x.window().hi; ++p) {
    int q = n - p;
    if (!y.window().contains(q)) continue;
    int d = x.dim(p) * y.dim(q);
    if (d == 0) continue;
    blocks.push_back({p, off});
    off += d;
  }
  return blocks;
}

namespace {

int tensor_dim(const ChainComplex& x, const ChainComplex& y, int n) {
  int d = 0;
  for (auto& b : tensor_blocks(x, y, n)) d += x.dim(b.p) * y.dim(n - b.p);
  return d;
}

int block_offset(const std::vector<TensorBlock>& blocks, int p) {
  for (auto& b : blocks)
    if (b.p == p) return b.offset;
  return -1;
}

void place(MatrixBuilder& b, const SparseMatrix& m, int row_off, int col_off, const Scalar& sign) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      Scalar v = m.at(r, c);
      if (!v.is_zero()) b.add(row_off + r, col_off + c, v * sign);
    }
}

}  // namespace

ChainComplex tensor(const ChainComplex& x, const ChainComplex& y) {
  if (!(x.field() == y.field())) fail("tensor: field mismatch");
  const Field& f = x.field();
  Window w{std::max(x.window().lo, y.window().lo), std::min(x.window().hi, y.window().hi)};
  if (w.lo > w.hi) fail("tensor: windows do not overlap");
  bool truncated = x.truncated() || y.truncated();
  for (int p = x.window().lo; p <= x.window().hi && !truncated; ++p)
    for (int q = y.window().lo; q <= y.window().hi && !truncated; ++q)
      if (x.dim(p) > 0 && y.dim(q) > 0 && !w.contains(p + q)) truncated = true;

  std::map<int, int> dims;
  for (int n = w.lo; n <= w.hi; ++n) dims[n] = tensor_dim(x, y, n);
  std::map<int, SparseMatrix> diffs;
  Scalar one = Scalar::one(f), minus = Scalar::zero(f) - one;
  for (int n = w.lo + 1; n <= w.hi; ++n) {
    if (dims[n] == 0 || dims[n - 1] == 0) continue;
    auto src_blocks = tensor_blocks(x, y, n);
    auto dst_blocks = tensor_blocks(x, y, n - 1);
    MatrixBuilder b(f, dims[n - 1], dims[n]);
    for (auto& blk : src_blocks) {
      int p = blk.p, q = n - p;
      // d_X (x) id : block (p, q) -> (p-1, q)
      int row = block_offset(dst_blocks, p - 1);
      if (row >= 0 && x.dim(p - 1) > 0)
        place(b, kron(x.diff(p), SparseMatrix::identity(f, y.dim(q))), row, blk.offset, one);
      // (-1)^p id (x) d_Y : block (p, q) -> (p, q-1)
      row = block_offset(dst_blocks, p);
      if (row >= 0 && y.dim(q - 1) > 0)
        place(b, kron(SparseMatrix::identity(f, x.dim(p)), y.diff(q)), row, blk.offset,
              p % 2 == 0 ? one : minus);
    }
    diffs.emplace(n, b.build());
  }
  return ChainComplex::build(f, w, dims, diffs, truncated);
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g) {
  ChainComplex src = tensor(f.src(), g.src());
  ChainComplex dst = tensor(f.dst(), g.dst());
  std::map<int, SparseMatrix> comps;
  for (int n = src.window().lo; n <= src.window().hi; ++n) {
    if (src.dim(n) == 0 || dst.dim(n) == 0) continue;
    auto src_blocks = tensor_blocks(f.src(), g.src(), n);
    auto dst_blocks = tensor_blocks(f.dst(), g.dst(), n);
    MatrixBuilder b(src.field(), dst.dim(n), src.dim(n));
    for (auto& blk : src_blocks) {
      int p = blk.p, q = n - p;
      int row = block_offset(dst_blocks, p);
      if (row < 0) continue;
      place(b, kron(f.component(p), g.component(q)), row, blk.offset, Scalar::one(src.field()));
    }
    comps.emplace(n, b.build());
  }
  return ChainMap::build(src, dst, comps);
}

ChainMap assoc_iso(const ChainComplex& x, const ChainComplex& y, const ChainComplex& z) {
  ChainComplex xy = tensor(x, y);
  ChainComplex lhs = tensor(xy, z);
  ChainComplex yz = tensor(y, z);
  ChainComplex rhs = tensor(x, yz);
  if (lhs.truncated() || rhs.truncated())
    fail("assoc_iso: truncation makes the bracketings differ");
  std::map<int, SparseMatrix> comps;
  for (int n = lhs.window().lo; n <= lhs.window().hi; ++n) {
    if (lhs.dim(n) != rhs.dim(n)) fail("assoc_iso: dimension mismatch");
    if (lhs.dim(n) == 0) continue;
    auto outer_l = tensor_blocks(xy, z, n);
    auto outer_r = tensor_blocks(x, yz, n);
    std::vector<SparseMatrix::Entry> entries;
    for (auto& ol : outer_l) {
      int s = ol.p, r_deg = n - s;
      auto inner_l = tensor_blocks(x, y, s);
      for (auto& il : inner_l) {
        int p = il.p, q = s - p;
        int m_deg = q + r_deg;
        int col_base = ol.offset + il.offset * z.dim(r_deg);
        int row_outer = block_offset(outer_r, p);
        auto inner_r = tensor_blocks(y, z, m_deg);
        int row_inner = block_offset(inner_r, q);
        if (row_outer < 0 || row_inner < 0) fail("assoc_iso: missing block");
        for (int i = 0; i < x.dim(p); ++i)
          for (int j = 0; j < y.dim(q); ++j)
            for (int k = 0; k < z.dim(r_deg); ++k) {
              int col = col_base + (i * y.dim(q) + j) * z.dim(r_deg) + k;
              int row = row_outer + i * yz.dim(m_deg) + row_inner + j * z.dim(r_deg) + k;
              entries.push_back({row, col, Scalar::one(x.field())});
            }
      }
    }
    comps.emplace(n, SparseMatrix::from_entries(x.field(), rhs.dim(n), lhs.dim(n), entries));
  }
  return ChainMap::build(lhs, rhs, comps);
}

ChainMap left_unit_iso(const ChainComplex& x) {
  if (!x.window().contains(0)) fail("left_unit_iso: window misses degree 0");
  ChainComplex u = unit_complex(x.field(), x.window());
  ChainComplex ux = tensor(u, x);
  std::map<int, SparseMatrix> comps;
  for (int n = x.window().lo; n <= x.window().hi; ++n)
    if (ux.dim(n) > 0) comps.emplace(n, SparseMatrix::identity(x.field(), ux.dim(n)));
  return ChainMap::build(ux, x, comps);
}

ChainMap right_unit_iso(const ChainComplex& x) {
  if (!x.window().contains(0)) fail("right_unit_iso: window misses degree 0");
  ChainComplex u = unit_complex(x.field(), x.window());
  ChainComplex xu = tensor(x, u);
  std::map<int, SparseMatrix> comps;
  for (int n = x.window().lo; n <= x.window().hi; ++n)
    if (xu.dim(n) > 0) comps.emplace(n, SparseMatrix::identity(x.field(), xu.dim(n)));
  return ChainMap::build(xu, x, comps);
}

QuasiIsoReport is_quasi_iso(const ChainMap& f) {
  const ChainComplex& x = f.src();
  const ChainComplex& y = f.dst();
  Window w{std::max(x.window().lo, y.window().lo), std::min(x.window().hi, y.window().hi)};
  QuasiIsoReport rep;
  rep.verdict = true;
  for (int n = w.lo; n <= w.hi; ++n) {
    bool edge = !x.window().interior(n) || !y.window().interior(n) || x.truncated() || y.truncated();
    SparseMatrix kx = x.diff(n).kernel();
    int hx = kx.cols() - x.diff(n + 1).rank();
    SparseMatrix by = y.diff(n + 1);
    int rank_by = by.rank();
    int hy = y.diff(n).kernel().cols() - rank_by;
    int induced = hcat(by, f.component(n) * kx).rank() - rank_by;
    bool iso = (hx == hy) && (induced == hx);
    rep.rows.push_back({n, iso, edge});
    if (!edge && !iso) rep.verdict = false;
  }
  return rep;
}

}  // namespace kd
