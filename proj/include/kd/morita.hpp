#pragma once

#include <string>
#include <vector>

#include "kd/bar.hpp"
#include "kd/simplicial.hpp"

namespace kd {

// Pushforward of an n-module along alpha: [m] -> [n], the underlying monotone
// map of a simplex morphism read in the opposite category. Algebras pull back,
// (alpha_push F)_i = F_{alpha(i)}, and each consecutive stretch of bimodules
// contracts to the iterated relative tensor product over the interior
// algebras. A convex alpha only reindexes: single steps copy the bimodule,
// a repeated index inserts the regular bimodule, and no tensor is formed.
Multimodule alpha_push(const Multimodule& f, const MonotoneMap& alpha, Window w);

// Generation universe for the Segal and decalage checks.
struct MoritaSample {
  std::vector<DgAlgebra> algebras;
  std::vector<DgBimodule> bimodules;
};

// A morphism of n-multimodules: algebra maps phi_i on the vertices and module
// maps f_i on the edges with f(a.x.b) = phi_{i-1}(a).f(x).phi_i(b).
struct MultimoduleMorphism {
  std::vector<DgAlgebraMap> on_algebras;
  std::vector<ChainMap> on_modules;
};
ValidationReport validate(const MultimoduleMorphism& h, const Multimodule& src,
                          const Multimodule& dst);

struct SegalReport {
  int n = 0;
  int multimodules = 0;     // assemblies of universe data into valid n-modules
  int glued_chains = 0;     // endpoint-compatible chains of n bimodules
  int morphisms = 0;        // validated multimodule morphisms over the sample
  int glued_morphisms = 0;  // glued chains of validated local morphisms
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// The Segal condition at level n over a finite universe: every
// endpoint-compatible chain of n bimodules assembles to exactly one valid
// n-multimodule, and multimodule morphisms are exactly the glued chains of
// local bimodule morphisms. Both directions are counted; any mismatch is a
// failure.
SegalReport segal_check(int n, const MoritaSample& sample);

// N (x)_A M for a horizontal endomorphism N of A acting on an (A,B)-bimodule.
DgBimodule horizontal_action(const DgBimodule& n, const DgBimodule& m, Window w);

struct DecalageReport {
  int max_level = 0;
  std::vector<long long> level_sizes;  // |cosk0|_k = |universe|^(k+1)
  std::vector<long long> level_dims;   // summed complex dimensions per level
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Levelwise product decomposition of the decalage of the algebra coskeleton:
// Dec cosk0 at level k is cosk0 at level k times the level-0 universe, the
// last tuple entry never moves under faces or degeneracies, and the summed
// dimensions follow the product formula. Checked by direct enumeration.
DecalageReport decalage_check(const MoritaSample& sample, int max_level);

}  // namespace kd
