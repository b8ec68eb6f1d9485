#include "kd/matrix.hpp"

#include <algorithm>
#include <list>

namespace kd {

namespace {

constexpr std::size_t kDenseLimit = 4000000;  // cells; above this, sparse elimination

void check_same_field(const Field& a, const Field& b) {
  if (!(a == b)) throw std::invalid_argument("matrix: mixed fields");
}

// Reduced row echelon form over the field, in place. Returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Scalar>>& m, const Field& f) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    Scalar inv = m[r][c].inv();
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Scalar coef = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - coef * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  (void)f;
  return pivots;
}

// Fraction-free Bareiss rank of an integer matrix (destroys its argument).
int bareiss_rank(std::vector<std::vector<BigInt>>& m) {
  if (m.empty() || m[0].empty()) return 0;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  std::vector<int> colp(cols);
  for (int j = 0; j < cols; ++j) colp[j] = j;
  BigInt prev = 1;
  int r = 0;
  while (r < rows && r < cols) {
    int pi = -1, pj = -1;
    for (int j = r; j < cols && pi < 0; ++j)
      for (int i = r; i < rows; ++i)
        if (m[i][colp[j]] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    std::swap(m[r], m[pi]);
    std::swap(colp[r], colp[pj]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = r + 1; j < cols; ++j) {
        BigInt t = m[r][colp[r]] * m[i][colp[j]] - m[i][colp[r]] * m[r][colp[j]];
        m[i][colp[j]] = t / prev;  // exact by Bareiss
      }
      m[i][colp[r]] = 0;
    }
    prev = m[r][colp[r]];
    ++r;
  }
  return r;
}

int gauss_rank_fp(std::vector<std::vector<std::uint64_t>>& m, std::uint64_t p) {
  if (m.empty() || m[0].empty()) return 0;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    // normalize pivot row
    std::uint64_t pv = m[r][c] % p, inv = 1, b = pv, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * b % p;
      b = b * b % p;
      e >>= 1;
    }
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] % p * inv % p;
    for (int i = r + 1; i < rows; ++i) {
      std::uint64_t coef = m[i][c] % p;
      if (!coef) continue;
      for (int j = c; j < cols; ++j) m[i][j] = (m[i][j] + (p - coef) * m[r][j]) % p;
    }
    ++r;
  }
  return r;
}

// Sparse exact elimination rank, shortest-row pivoting.
int sparse_rank(const std::vector<SparseMatrix::Entry>& entries, const Field& f) {
  std::list<std::map<int, Scalar>> rows;
  {
    std::map<int, std::map<int, Scalar>> byrow;
    for (const auto& e : entries) byrow[e.row][e.col] = e.val;
    for (auto& [r, m] : byrow) rows.push_back(std::move(m));
  }
  (void)f;
  int rank = 0;
  while (!rows.empty()) {
    auto best = rows.begin();
    for (auto it = rows.begin(); it != rows.end(); ++it)
      if (it->size() < best->size()) best = it;
    if (best->empty()) {
      rows.erase(best);
      continue;
    }
    ++rank;
    auto pivot = std::move(*best);
    rows.erase(best);
    int pc = pivot.begin()->first;
    Scalar pv = pivot.begin()->second;
    for (auto it = rows.begin(); it != rows.end();) {
      auto hit = it->find(pc);
      if (hit == it->end()) {
        ++it;
        continue;
      }
      Scalar coef = hit->second / pv;
      for (const auto& [c, v] : pivot) {
        auto cur = it->find(c);
        if (cur == it->end()) {
          Scalar nv = -(coef * v);
          if (!nv.is_zero()) (*it)[c] = nv;
        } else {
          cur->second = cur->second - coef * v;
          if (cur->second.is_zero()) it->erase(cur);
        }
      }
      if (it->empty())
        it = rows.erase(it);
      else
        ++it;
    }
  }
  return rank;
}

}  // namespace

SparseMatrix::SparseMatrix(const Field& f, int rows, int cols) : f_(f), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative shape");
}

SparseMatrix SparseMatrix::identity(const Field& f, int n) {
  std::vector<Entry> e;
  e.reserve(n);
  for (int i = 0; i < n; ++i) e.push_back({i, i, Scalar::one(f)});
  return from_entries(f, n, n, std::move(e));
}

SparseMatrix SparseMatrix::from_entries(const Field& f, int rows, int cols, std::vector<Entry> entries) {
  SparseMatrix m(f, rows, cols);
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  for (auto& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::invalid_argument("matrix: entry out of range");
    if (!m.e_.empty() && m.e_.back().row == e.row && m.e_.back().col == e.col) {
      m.e_.back().val = m.e_.back().val + e.val;
      if (m.e_.back().val.is_zero()) m.e_.pop_back();
    } else if (!e.val.is_zero()) {
      m.e_.push_back(std::move(e));
    }
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Field& f, const std::vector<std::vector<Scalar>>& d) {
  int rows = static_cast<int>(d.size());
  int cols = rows ? static_cast<int>(d[0].size()) : 0;
  std::vector<Entry> e;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!d[i][j].is_zero()) e.push_back({i, j, d[i][j]});
  return from_entries(f, rows, cols, std::move(e));
}

Scalar SparseMatrix::at(int r, int c) const {
  auto it = std::lower_bound(e_.begin(), e_.end(), std::pair(r, c), [](const Entry& a, const std::pair<int, int>& k) {
    return std::pair(a.row, a.col) < k;
  });
  if (it != e_.end() && it->row == r && it->col == c) return it->val;
  return Scalar::zero(f_);
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  check_same_field(f_, o.f_);
  if (cols_ != o.rows_) throw std::invalid_argument("matrix: shape mismatch in product");
  // group o's entries by row for lookup
  std::vector<std::pair<std::size_t, std::size_t>> rowspan(o.rows_, {0, 0});
  for (std::size_t i = 0; i < o.e_.size();) {
    std::size_t j = i;
    while (j < o.e_.size() && o.e_[j].row == o.e_[i].row) ++j;
    rowspan[o.e_[i].row] = {i, j};
    i = j;
  }
  MatrixBuilder b(f_, rows_, o.cols_);
  for (const auto& ea : e_) {
    auto [lo, hi] = rowspan[ea.col];
    for (std::size_t t = lo; t < hi; ++t) b.add(ea.row, o.e_[t].col, ea.val * o.e_[t].val);
  }
  return b.build();
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  check_same_field(f_, o.f_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix: shape mismatch in sum");
  std::vector<Entry> e = e_;
  e.insert(e.end(), o.e_.begin(), o.e_.end());
  return from_entries(f_, rows_, cols_, std::move(e));
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-Scalar::one(f_)); }

SparseMatrix SparseMatrix::scaled(const Scalar& s) const {
  std::vector<Entry> e;
  e.reserve(e_.size());
  for (const auto& x : e_) e.push_back({x.row, x.col, x.val * s});
  return from_entries(f_, rows_, cols_, std::move(e));
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Entry> e;
  e.reserve(e_.size());
  for (const auto& x : e_) e.push_back({x.col, x.row, x.val});
  return from_entries(f_, cols_, rows_, std::move(e));
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || e_.size() != o.e_.size() || !(f_ == o.f_)) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i].row != o.e_[i].row || e_[i].col != o.e_[i].col || e_[i].val != o.e_[i].val) return false;
  return true;
}

std::vector<Scalar> SparseMatrix::apply(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("matrix: vector length mismatch");
  std::vector<Scalar> r(rows_, Scalar::zero(f_));
  for (const auto& e : e_) r[e.row] = r[e.row] + e.val * v[e.col];
  return r;
}

int SparseMatrix::rank() const {
  if (e_.empty()) return 0;
  std::size_t cells = static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
  if (cells > kDenseLimit) return sparse_rank(e_, f_);
  if (f_.kind == Field::Kind::Fp) {
    std::vector<std::vector<std::uint64_t>> m(rows_, std::vector<std::uint64_t>(cols_, 0));
    for (const auto& e : e_) m[e.row][e.col] = e.val.residue();
    return gauss_rank_fp(m, f_.p);
  }
  // clear row denominators, then fraction-free elimination on integers
  std::vector<std::vector<BigInt>> m(rows_, std::vector<BigInt>(cols_, 0));
  for (int i = 0; i < rows_; ++i) {
    BigInt l = 1;
    for (const auto& e : e_)
      if (e.row == i) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(e.val.rat()));
    for (const auto& e : e_)
      if (e.row == i) {
        BigRat v = e.val.rat() * BigRat(l);
        m[i][e.col] = boost::multiprecision::numerator(v);
      }
  }
  return bareiss_rank(m);
}

SparseMatrix SparseMatrix::kernel() const {
  auto dense = to_dense();
  std::vector<int> pivots = rref(dense, f_);
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Entry> out;
  int k = 0;
  for (int c = 0; c < cols_; ++c) {
    if (is_pivot[c]) continue;
    out.push_back({c, k, Scalar::one(f_)});
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
      const Scalar& v = dense[pi][c];
      if (!v.is_zero()) out.push_back({pivots[pi], k, -v});
    }
    ++k;
  }
  return from_entries(f_, cols_, k, std::move(out));
}

std::vector<std::vector<Scalar>> SparseMatrix::to_dense() const {
  std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_, Scalar::zero(f_)));
  for (const auto& e : e_) d[e.row][e.col] = e.val;
  return d;
}

void MatrixBuilder::add(int r, int c, const Scalar& s) {
  if (s.is_zero()) return;
  auto [it, fresh] = m_.try_emplace({r, c}, s);
  if (!fresh) {
    it->second = it->second + s;
    if (it->second.is_zero()) m_.erase(it);
  }
}

SparseMatrix MatrixBuilder::build() const {
  std::vector<SparseMatrix::Entry> e;
  e.reserve(m_.size());
  for (const auto& [rc, v] : m_) e.push_back({rc.first, rc.second, v});
  return SparseMatrix::from_entries(f_, rows_, cols_, std::move(e));
}

SparseMatrix hcat(const SparseMatrix& a, const SparseMatrix& b) {
  check_same_field(a.field(), b.field());
  if (a.rows() != b.rows()) throw std::invalid_argument("matrix: hcat row mismatch");
  std::vector<SparseMatrix::Entry> e = a.entries();
  for (const auto& x : b.entries()) e.push_back({x.row, x.col + a.cols(), x.val});
  return SparseMatrix::from_entries(a.field(), a.rows(), a.cols() + b.cols(), std::move(e));
}

SparseMatrix vcat(const SparseMatrix& a, const SparseMatrix& b) {
  check_same_field(a.field(), b.field());
  if (a.cols() != b.cols()) throw std::invalid_argument("matrix: vcat col mismatch");
  std::vector<SparseMatrix::Entry> e = a.entries();
  for (const auto& x : b.entries()) e.push_back({x.row + a.rows(), x.col, x.val});
  return SparseMatrix::from_entries(a.field(), a.rows() + b.rows(), a.cols(), std::move(e));
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  check_same_field(a.field(), b.field());
  std::vector<SparseMatrix::Entry> e;
  e.reserve(a.nnz() * b.nnz());
  for (const auto& x : a.entries())
    for (const auto& y : b.entries())
      e.push_back({x.row * b.rows() + y.row, x.col * b.cols() + y.col, x.val * y.val});
  return SparseMatrix::from_entries(a.field(), a.rows() * b.rows(), a.cols() * b.cols(), std::move(e));
}

bool solve(const SparseMatrix& a, const std::vector<Scalar>& b, std::vector<Scalar>& x) {
  if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("matrix: solve shape mismatch");
  const Field& f = a.field();
  auto dense = a.to_dense();
  for (int i = 0; i < a.rows(); ++i) dense[i].push_back(b[i]);
  std::vector<int> pivots = rref(dense, f);
  // inconsistent iff some pivot sits in the augmented column
  for (int c : pivots)
    if (c == a.cols()) return false;
  x.assign(a.cols(), Scalar::zero(f));
  for (std::size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = dense[pi][a.cols()];
  return true;
}

ColumnSplit::ColumnSplit(const SparseMatrix& s) : f_(s.field()), n_(s.rows()) {
  // pivot columns of [S | I] after S's block give a complement of col(S)
  SparseMatrix aug = hcat(s, SparseMatrix::identity(f_, n_));
  auto dense = aug.to_dense();
  std::vector<int> pivots = rref(dense, f_);
  std::vector<int> s_cols;
  for (int c : pivots) {
    if (c < s.cols())
      s_cols.push_back(c);
    else
      comp_.push_back(c - s.cols());
  }
  // M = [S restricted to independent columns | complement identity columns]
  std::vector<SparseMatrix::Entry> me;
  int col = 0;
  for (int c : s_cols) {
    for (const auto& e : s.entries())
      if (e.col == c) me.push_back({e.row, col, e.val});
    ++col;
  }
  for (int i : comp_) me.push_back({i, col++, Scalar::one(f_)});
  SparseMatrix m = SparseMatrix::from_entries(f_, n_, col, std::move(me));
  if (col != n_) throw std::logic_error("matrix: column split failed to complete basis");
  // invert M by Gauss-Jordan on [M | I]
  auto inv = hcat(m, SparseMatrix::identity(f_, n_)).to_dense();
  std::vector<int> p2 = rref(inv, f_);
  if (static_cast<int>(p2.size()) != n_) throw std::logic_error("matrix: column split matrix singular");
  minv_rows_.assign(comp_.size(), {});
  std::size_t rank_s = s_cols.size();
  for (std::size_t k = 0; k < comp_.size(); ++k) {
    minv_rows_[k].assign(n_, Scalar::zero(f_));
    for (int j = 0; j < n_; ++j) minv_rows_[k][j] = inv[rank_s + k][n_ + j];
  }
}

std::vector<Scalar> ColumnSplit::project(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("matrix: project length mismatch");
  std::vector<Scalar> out(comp_.size(), Scalar::zero(f_));
  for (std::size_t k = 0; k < comp_.size(); ++k)
    for (int j = 0; j < n_; ++j)
      if (!minv_rows_[k][j].is_zero() && !v[j].is_zero()) out[k] = out[k] + minv_rows_[k][j] * v[j];
  return out;
}

}  // namespace kd
