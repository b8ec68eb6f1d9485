#pragma once

#include "kd/field.hpp"

#include <map>
#include <utility>
#include <vector>

namespace kd {

// Exact sparse matrix in coordinate-list form, canonically sorted by (row, col)
// with no stored zeros. Elimination uses a dense kernel below a size threshold
// and a sparse Markowitz-style path above it; both are exact.
class SparseMatrix {
 public:
  struct Entry {
    int row;
    int col;
    Scalar val;
  };

  SparseMatrix() : SparseMatrix(Field::rationals(), 0, 0) {}
  SparseMatrix(const Field& f, int rows, int cols);
  static SparseMatrix identity(const Field& f, int n);
  static SparseMatrix from_entries(const Field& f, int rows, int cols, std::vector<Entry> entries);
  static SparseMatrix from_dense(const Field& f, const std::vector<std::vector<Scalar>>& d);

  const Field& field() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return e_; }
  std::size_t nnz() const { return e_.size(); }

  Scalar at(int r, int c) const;
  bool is_zero() const { return e_.empty(); }

  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Scalar& s) const;
  SparseMatrix transposed() const;
  bool operator==(const SparseMatrix& o) const;

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  // Rank by exact elimination: fraction-free Bareiss over Q, Gaussian over Fp.
  int rank() const;
  // Columns form a basis of the null space.
  SparseMatrix kernel() const;

  std::vector<std::vector<Scalar>> to_dense() const;

 private:
  Field f_;
  int rows_;
  int cols_;
  std::vector<Entry> e_;  // sorted (row, col)
};

// Incremental construction; duplicate positions accumulate.
class MatrixBuilder {
 public:
  MatrixBuilder(const Field& f, int rows, int cols) : f_(f), rows_(rows), cols_(cols) {}
  void add(int r, int c, const Scalar& s);
  SparseMatrix build() const;

 private:
  Field f_;
  int rows_;
  int cols_;
  std::map<std::pair<int, int>, Scalar> m_;
};

SparseMatrix hcat(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix vcat(const SparseMatrix& a, const SparseMatrix& b);
// Kronecker product with row index r_a*o.rows+r_b, matching the flattened
// tensor basis order used throughout (left factor index major).
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

// Solves A x = b exactly; returns false when inconsistent.
bool solve(const SparseMatrix& a, const std::vector<Scalar>& b, std::vector<Scalar>& x);

// Splits k^n as col(S) (+) span{e_i : i in complement}: used for quotient
// complexes. project() returns complement coordinates of v along col(S).
class ColumnSplit {
 public:
  explicit ColumnSplit(const SparseMatrix& s);
  const std::vector<int>& complement() const { return comp_; }
  std::vector<Scalar> project(const std::vector<Scalar>& v) const;

 private:
  Field f_;
  int n_;
  std::vector<int> comp_;
  std::vector<std::vector<Scalar>> minv_rows_;  // complement rows of M^{-1}
};

}  // namespace kd
