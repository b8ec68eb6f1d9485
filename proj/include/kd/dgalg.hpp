#pragma once

#include "kd/chains.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kd {

struct AxiomCheck {
  std::string axiom;
  bool ok;
  std::string violation;  // first violating basis tuple, empty when ok
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;
  bool ok() const;
  std::string str() const;
};

// Augmented dg algebra given by structure constants on a chosen basis.
// product[{p,q}]: A_p (x) A_q -> A_{p+q}, shape dim(p+q) x dim(p)*dim(q),
// columns left-factor major; products landing outside the window are omitted.
struct DgAlgebra {
  std::string name;
  ChainComplex underlying;
  SparseMatrix unit;          // dim(0) x 1
  std::map<std::pair<int, int>, SparseMatrix> product;
  SparseMatrix augmentation;  // 1 x dim(0)
  std::map<int, std::vector<std::string>> basis_names;  // optional, for reports
  std::string sector = "a";   // ingestion namespace tag

  SparseMatrix product_at(int p, int q) const;
  std::string basis_name(int degree, int index) const;
};

// action[{p,q}]: A_p (x) M_q -> M_{p+q}
struct DgLeftModule {
  std::string name;
  DgAlgebra algebra;
  ChainComplex underlying;
  std::map<std::pair<int, int>, SparseMatrix> action;
  std::map<int, std::vector<std::string>> basis_names;
  std::string sector = "m";

  SparseMatrix action_at(int p, int q) const;
  std::string basis_name(int degree, int index) const;
};

// left_action[{p,q}]: A_p (x) M_q -> M_{p+q};
// right_action[{q,p}]: M_q (x) B_p -> M_{q+p}, columns module-factor major.
struct DgBimodule {
  std::string name;
  DgAlgebra left_algebra;
  DgAlgebra right_algebra;
  ChainComplex underlying;
  std::map<std::pair<int, int>, SparseMatrix> left_action;
  std::map<std::pair<int, int>, SparseMatrix> right_action;
  std::map<int, std::vector<std::string>> basis_names;
  std::string sector = "a";

  SparseMatrix left_action_at(int p, int q) const;
  SparseMatrix right_action_at(int q, int p) const;
  std::string basis_name(int degree, int index) const;
};

// A_0, M^{0,1}, A_1, M^{1,2}, ..., A_n with M^{i,i+1} an A_i-A_{i+1}-bimodule.
struct Multimodule {
  std::vector<DgAlgebra> algebras;
  std::vector<DgBimodule> bimodules;
};

ValidationReport validate(const DgAlgebra& a);
ValidationReport validate(const DgLeftModule& m);
ValidationReport validate(const DgBimodule& m);
ValidationReport validate(const Multimodule& m);

// Throws with the report text when a check fails.
void require_valid(const DgAlgebra& a);
void require_valid(const DgLeftModule& m);
void require_valid(const DgBimodule& m);
void require_valid(const Multimodule& m);

// Map of augmented dg algebras: a chain map respecting unit, product and
// augmentation; validated at construction.
struct DgAlgebraMap {
  DgAlgebra src;
  DgAlgebra dst;
  ChainMap map;
};
ValidationReport validate(const DgAlgebraMap& f);
DgAlgebraMap make_algebra_map(const DgAlgebra& src, const DgAlgebra& dst,
                              const std::map<int, SparseMatrix>& components);

// The field as the initial and terminal augmented algebra.
DgAlgebra unit_algebra(const Field& f, Window w);
DgAlgebraMap algebra_unit_map(const DgAlgebra& a);          // 1 -> A
DgAlgebraMap algebra_augmentation_map(const DgAlgebra& a);  // A -> 1

// A (x) E (x) B with the regular actions.
DgBimodule free_bimodule(const DgAlgebra& a, const ChainComplex& e, const DgAlgebra& b);
// A (x) E with the left regular action.
DgLeftModule free_left_module(const DgAlgebra& a, const ChainComplex& e);
// Same underlying complex, action through f.
DgLeftModule restrict_scalars(const DgAlgebraMap& f, const DgLeftModule& m);

// A as an A-A-bimodule via the product.
DgBimodule regular_bimodule(const DgAlgebra& a);
// The unit complex as an A-B-bimodule via the augmentations.
DgBimodule trivial_bimodule(const DgAlgebra& a, const DgAlgebra& b);
// The unit complex as a left A-module via the augmentation.
DgLeftModule trivial_left_module(const DgAlgebra& a);
// A left module as an A-1-bimodule.
DgBimodule as_bimodule(const DgLeftModule& m);

}  // namespace kd
