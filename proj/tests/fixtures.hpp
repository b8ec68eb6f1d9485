#pragma once

// Small hand-checkable dg algebras and complexes shared across test binaries.
// The same structures ship as JSON in corpus/; these builders stay independent
// of the ingestion code so either side can cross-check the other.

#include "kd/dgalg.hpp"

namespace kd::fix {

// One square-zero generator x in the given degree: Lambda(x) for odd degree,
// k[x]/x^2 in degree 0 (then the basis is {1, x} in degree 0). Zero differential.
inline DgAlgebra square_zero(const Field& f, Window w, int deg) {
  DgAlgebra a;
  a.underlying = ChainComplex(f, w);
  Scalar one = Scalar::one(f), zero = Scalar::zero(f);
  if (deg == 0) {
    a.name = "k[x]/x^2";
    a.underlying = ChainComplex::build(f, w, {{0, 2}}, {});
    a.unit = SparseMatrix::from_dense(f, {{one}, {zero}});
    // columns (1,1),(1,x),(x,1),(x,x)
    a.product.emplace(std::pair{0, 0}, SparseMatrix::from_dense(f, {{one, zero, zero, zero},
                                                                    {zero, one, one, zero}}));
    a.augmentation = SparseMatrix::from_dense(f, {{one, zero}});
    a.basis_names[0] = {"1", "x"};
  } else {
    a.name = "Lambda(x," + std::to_string(deg) + ")";
    a.underlying = ChainComplex::build(f, w, {{0, 1}, {deg, 1}}, {});
    a.unit = SparseMatrix::identity(f, 1);
    a.product.emplace(std::pair{0, 0}, SparseMatrix::identity(f, 1));
    a.product.emplace(std::pair{0, deg}, SparseMatrix::identity(f, 1));
    a.product.emplace(std::pair{deg, 0}, SparseMatrix::identity(f, 1));
    if (w.contains(2 * deg)) a.product.emplace(std::pair{deg, deg}, SparseMatrix(f, 0, 1));
    a.augmentation = SparseMatrix::identity(f, 1);
    a.basis_names[0] = {"1"};
    a.basis_names[deg] = {"x"};
  }
  require_valid(a);
  return a;
}

inline DgAlgebra exterior(const Field& f, Window w) { return square_zero(f, w, 1); }
inline DgAlgebra dualnum(const Field& f, Window w) { return square_zero(f, w, 0); }

// Basis {1, x} in degree 0 and {y} in degree 1, all products of augmentation
// ideal elements zero, d(y) = x. Sign-sensitive: Leibniz forces the (-1)^|a|
// convention through every construction that touches it.
inline DgAlgebra mixed(const Field& f, Window w) {
  DgAlgebra a;
  a.name = "mixed";
  Scalar one = Scalar::one(f), zero = Scalar::zero(f);
  std::map<int, SparseMatrix> d;
  d.emplace(1, SparseMatrix::from_dense(f, {{zero}, {one}}));  // d(y) = x
  a.underlying = ChainComplex::build(f, w, {{0, 2}, {1, 1}}, d);
  a.unit = SparseMatrix::from_dense(f, {{one}, {zero}});
  a.product.emplace(std::pair{0, 0}, SparseMatrix::from_dense(f, {{one, zero, zero, zero},
                                                                  {zero, one, one, zero}}));
  // columns (1,y),(x,y) and (y,1),(y,x)
  a.product.emplace(std::pair{0, 1}, SparseMatrix::from_dense(f, {{one, zero}}));
  a.product.emplace(std::pair{1, 0}, SparseMatrix::from_dense(f, {{one, zero}}));
  a.augmentation = SparseMatrix::from_dense(f, {{one, zero}});
  a.basis_names[0] = {"1", "x"};
  a.basis_names[1] = {"y"};
  require_valid(a);
  return a;
}

// Generators x in degree 1 and y in degree 2 with d(y) = x and all products
// of augmentation ideal elements zero. Connected, so the Koszul dual stays in
// the cobar regime; the internal letter differential is exercised with signs.
inline DgAlgebra mixed2(const Field& f, Window w) {
  DgAlgebra a;
  a.name = "mixed2";
  Scalar one = Scalar::one(f);
  std::map<int, SparseMatrix> d;
  d.emplace(2, SparseMatrix::from_dense(f, {{one}}));  // d(y) = x
  a.underlying = ChainComplex::build(f, w, {{0, 1}, {1, 1}, {2, 1}}, d);
  a.unit = SparseMatrix::identity(f, 1);
  a.product.emplace(std::pair{0, 0}, SparseMatrix::identity(f, 1));
  for (int g = 1; g <= 2; ++g) {
    a.product.emplace(std::pair{0, g}, SparseMatrix::identity(f, 1));
    a.product.emplace(std::pair{g, 0}, SparseMatrix::identity(f, 1));
  }
  // products of x and y all vanish; omitted components are zero
  a.augmentation = SparseMatrix::identity(f, 1);
  a.basis_names[0] = {"1"};
  a.basis_names[1] = {"x"};
  a.basis_names[2] = {"y"};
  require_valid(a);
  return a;
}

// One basis element in each of degrees 0 and 1, zero differential.
inline ChainComplex e11(const Field& f, Window w) {
  return ChainComplex::build(f, w, {{0, 1}, {1, 1}}, {});
}

}  // namespace kd::fix
