#pragma once

#include "kd/dgalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kd {

// ---------------------------------------------------------------------------
// Coalgebras and comodules
// ---------------------------------------------------------------------------

// Coaugmented dg coalgebra on a chosen basis.
// coproduct[{p,q}]: C_{p+q} -> C_p (x) C_q, shape dim(p)*dim(q) x dim(p+q),
// rows left-factor major; components landing outside the window are omitted.
struct DgCoalgebra {
  std::string name;
  ChainComplex underlying;
  std::map<std::pair<int, int>, SparseMatrix> coproduct;
  SparseMatrix counit;         // 1 x dim(0)
  SparseMatrix coaugmentation; // dim(0) x 1
  std::map<int, std::vector<std::string>> basis_names;

  SparseMatrix coproduct_at(int p, int q) const;
  std::string basis_name(int degree, int index) const;
};

// coaction[{p,q}]: Y_{p+q} -> C_p (x) Y_q, rows coalgebra-factor major.
struct DgComodule {
  std::string name;
  DgCoalgebra coalgebra;
  ChainComplex underlying;
  std::map<std::pair<int, int>, SparseMatrix> coaction;
  std::map<int, std::vector<std::string>> basis_names;

  SparseMatrix coaction_at(int p, int q) const;
  std::string basis_name(int degree, int index) const;
};

ValidationReport validate(const DgCoalgebra& c);
ValidationReport validate(const DgComodule& y);
void require_valid(const DgCoalgebra& c);
void require_valid(const DgComodule& y);

// ---------------------------------------------------------------------------
// Simplicial chain complexes and realization
// ---------------------------------------------------------------------------

// Truncated simplicial object in chain complexes: levels 0..L with all face
// and degeneracy maps present as chain maps.
struct SimplicialComplexObject {
  std::vector<ChainComplex> levels;
  std::vector<std::vector<ChainMap>> faces;        // faces[n][i]: n -> n-1, 0 <= i <= n
  std::vector<std::vector<ChainMap>> degeneracies; // degeneracies[n][i]: n -> n+1

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
};

// Checks every simplicial identity expressible within the stored levels.
ValidationReport validate(const SimplicialComplexObject& s);

SimplicialComplexObject constant_simplicial(const ChainComplex& x, int levels);

// Bar construction M (x) A^{(x)n} (x) N: face 0 is the right action on M,
// face n the left action on N, inner faces multiply adjacent letters;
// degeneracy i inserts the unit after slot i.
SimplicialComplexObject bar_simplicial(const DgBimodule& m, const DgAlgebra& a,
                                       const DgBimodule& n, int levels);

// Total complexes of a truncated simplicial object. The unnormalized total
// differential on level k in internal degree q is d_level + (-1)^q sum_i
// (-1)^i d_i; the normalized complex is the quotient by degeneracy images,
// realized on a standard-basis complement. Degrees above window.hi - are
// unaffected; degrees whose level-(k) contributions exceed the truncation
// level are marked truncated.
struct Realization {
  ChainComplex normalized;
  ChainComplex unnormalized;
  ChainMap comparison; // quotient map unnormalized -> normalized
};
Realization realize(const SimplicialComplexObject& s);

// ---------------------------------------------------------------------------
// Reduced bar complexes
// ---------------------------------------------------------------------------

// Shape of a reduced bar word m[a_1|...|a_w]n: degree of the m factor, the
// suspended letter degrees (|a_i| + 1, each >= 1) and the degree of the n
// factor. Basis order within a shape is mixed-radix with m most significant.
struct BarShape {
  int m_deg;
  std::vector<int> letters;
  int n_deg;

  int weight() const { return static_cast<int>(letters.size()); }
  int degree() const;
  bool operator==(const BarShape& o) const;
  bool operator<(const BarShape& o) const; // canonical order: weight, m_deg, letters
};

struct BarBlock {
  BarShape shape;
  int offset;
  int size;
};

// Normalized two-sided bar complex B(M, A, N) with its weight grading, the
// internal/simplicial splitting of the differential and the residual outer
// bimodule structure. Signs follow the suspension convention documented in
// the README sign table.
struct BarComplex {
  ChainComplex realization;
  std::map<int, std::vector<BarBlock>> blocks;   // per degree, canonical order
  std::map<int, SparseMatrix> d_internal;        // realization.diff = d_internal + d_simplicial
  std::map<int, SparseMatrix> d_simplicial;
  DgBimodule bimodule;                           // underlying == realization

  const BarBlock* find_block(int degree, const BarShape& shape) const;
  int weight_dim(int degree, int weight) const;
};

// Relative tensor product M (x)_A N as the normalized bar realization.
// Requires matching sectors; the result keeps the outer algebras.
BarComplex relative_tensor(const DgBimodule& m, const DgAlgebra& a,
                           const DgBimodule& n, Window w);

// External relative tensor product N (x)_A M of an (A,A)-bimodule in the
// algebra sector against a left module in the module sector; the residual
// left A-action comes from N's left action.
DgLeftModule external_relative_tensor(const DgBimodule& n, const DgLeftModule& m, Window w);

// X (x) M with the outer left action picking up the Koszul sign past X, and
// the inner right action unchanged; dually for N (x) Y.
DgBimodule complex_tensor_bimodule(const ChainComplex& x, const DgBimodule& m);
DgBimodule bimodule_tensor_complex(const DgBimodule& n, const ChainComplex& y);

// Canonical interchange |B(X(x)M, A, N(x)Y)| -> X (x) |B(M,A,N)| (x) Y.
// Over a field in finite type this is a degreewise isomorphism; the verdict
// is asserted exactly, not homologically.
struct CompatWitness {
  ChainMap map;
  bool degreewise_iso;
};
CompatWitness compat_witness(const ChainComplex& x, const DgBimodule& m,
                             const DgAlgebra& a, const DgBimodule& n,
                             const ChainComplex& y, Window w);

// ---------------------------------------------------------------------------
// Koszul duals
// ---------------------------------------------------------------------------

// B(A) = (+)_w (Abar[1])^{(x)w} with the deconcatenation coproduct, counit =
// weight-0 projection, coaugmentation = weight-0 inclusion.
DgCoalgebra koszul_dual_algebra(const DgAlgebra& a, Window w);

// B(A; 1, X) = (+)_w (Abar[1])^{(x)w} (x) X with the coaction that splits off
// left bar letters into koszul_dual_algebra(A).
DgComodule koszul_dual_module(const DgAlgebra& a, const DgLeftModule& x, Window w);

// ---------------------------------------------------------------------------
// Cobar
// ---------------------------------------------------------------------------

// Omega(C) = (+)_w (Cbar[-1])^{(x)w}, the tensor algebra on the desuspended
// coaugmentation coideal, with concatenation product and differential
// internal + letterwise reduced-coproduct splitting. Requires Cbar
// concentrated in degrees >= 2 (the dual finiteness regime).
DgAlgebra cobar(const DgCoalgebra& c, Window w);

// Omega(C; Y) = Omega(C) (x) Y with the extra coaction term on the last slot.
DgLeftModule cobar_module(const DgCoalgebra& c, const DgComodule& y, Window w);

// Counit Omega(B(A)) -> A: a letter goes to its weight-one component,
// extended multiplicatively. Validated as a map of augmented dg algebras.
DgAlgebraMap bar_cobar_counit(const DgAlgebra& a, Window w);

// ---------------------------------------------------------------------------
// Bar object comparison
// ---------------------------------------------------------------------------

// Compares 1 (x)_A X against a candidate bar object Z: homology ranks must
// agree on interior degrees, the weight-0 unit map X -> B(1,A,X) must be a
// chain map, and when X = A (x) E the composite with the augmentation
// projection must equal the projection A (x) E -> E on the nose.
struct BarObjectVerdict {
  bool ranks_match;
  bool unit_map_ok;
  std::vector<QuasiIsoRow> rows;
  std::string detail;

  bool ok() const { return ranks_match && unit_map_ok; }
};
BarObjectVerdict bar_object_check(const DgAlgebra& a, const DgLeftModule& x,
                                  const ChainComplex& z, Window w);

// Weight-0 inclusion X -> B(1,A,X) (the unit of the bar adjunction at the
// chain level).
ChainMap bar_unit_map(const DgAlgebra& a, const DgLeftModule& x, const BarComplex& b);

// For the free module A (x) E: the augmentation projection
// B(1, A, A (x) E) -> E is a chain map and its composite with the unit map
// equals the projection A (x) E -> E on the nose.
bool free_unit_projection_check(const DgAlgebra& a, const ChainComplex& e, Window w);

}  // namespace kd
