#pragma once

#include <map>
#include <string>
#include <vector>

#include "kd/simplicial.hpp"

namespace kd {

// <n> = {*, 1, ..., n}.
struct PointedFinite {
  int n = 0;
  bool operator==(const PointedFinite& o) const { return n == o.n; }
};

// Morphism <src> -> <tgt> of the associative pattern: a pointed map together
// with a total order on each fiber.  Value 0 encodes the basepoint.
struct AssMorphism {
  int src = 0;
  int tgt = 0;
  std::vector<int> map;                        // size src, values in {0..tgt}
  std::vector<std::vector<int>> fiber_orders;  // size tgt; 1-based source indices

  bool operator==(const AssMorphism& o) const = default;
  std::string str() const;
};

void validate(const AssMorphism& a);  // throws on malformed data
AssMorphism ass_identity(int n);
// a1 followed by a2; fiber orders concatenate blockwise (outer order of a2,
// inner order of a1 within each block).
AssMorphism compose_ass(const AssMorphism& a1, const AssMorphism& a2);
std::vector<AssMorphism> all_ass(int n, int m);

struct TensObject {
  int n = 0;
  int k = 0;
  std::vector<int> c_minus;  // size n, values in [0,k]
  std::vector<int> c_plus;

  bool operator==(const TensObject& o) const = default;
  bool operator<(const TensObject& o) const;
  std::string str() const;
};

// False iff the pointwise color condition c- <= c+ <= c- + 1 fails;
// malformed shapes throw.
bool validate_tens_object(const TensObject& o);

// Morphism (<n>,[k],c) -> (<n'>,[k'],c'): alpha covariant, lambda [k']->[k].
struct TensMorphism {
  AssMorphism alpha;
  MonotoneMap lambda;

  bool operator==(const TensMorphism& o) const = default;
};

// Fiber conditions: along each fiber order (i0,...,im) of alpha over j,
//   c-(i0) = lambda(c'-(j)),  c+(im) = lambda(c'+(j)),  c+(it) = c-(i(t+1)),
// i.e. the fiber realizes a chain from lambda(c'-(j)) to lambda(c'+(j)).
// An empty fiber is the length-0 chain, so it requires
// lambda(c'-(j)) = lambda(c'+(j)); anything weaker breaks closure of
// composition.  Shape mismatches throw.
bool validate_tens_morphism(const TensMorphism& m, const TensObject& src, const TensObject& dst);
TensMorphism tens_identity(const TensObject& o);
TensMorphism compose_tens(const TensMorphism& m1, const TensMorphism& m2);  // m1 then m2

std::vector<TensObject> all_tens_objects(int n, int k);
std::vector<TensMorphism> all_tens_morphisms(const TensObject& src, const TensObject& dst);
// Constructive enumeration of every valid morphism into dst whose source has
// the given size and simplex ordinal; returns (source object, morphism) pairs.
std::vector<std::pair<TensObject, TensMorphism>> valid_morphisms_into(const TensObject& dst,
                                                                      int src_n, int src_k);

struct BMObject {
  int n = 0;
  std::vector<int> c_minus;  // values in [0,1]
  std::vector<int> c_plus;

  bool operator==(const BMObject& o) const = default;
};

bool validate_bm_object(const BMObject& o);
TensObject bm_as_tens(const BMObject& o);

// Object of the family over ([k], flag): flag plus a TensObject whose simplex
// ordinal is delta([k],flag) (so base.k = k+1 for flag 0, = k for flag 1).
struct NablaTensObject {
  int flag = 0;
  TensObject base;

  int underlying_k() const { return flag == 0 ? base.k - 1 : base.k; }
  bool operator==(const NablaTensObject& o) const = default;
};

void validate_shape(const NablaTensObject& o);  // throws

struct NablaTensMorphism {
  AssMorphism alpha;
  NablaMorphism nu;  // ([k],b) -> ([k'],b') of the index category
};

bool validate_nabla_tens_morphism(const NablaTensMorphism& m, const NablaTensObject& src,
                                  const NablaTensObject& dst);
NablaTensMorphism compose_nabla_tens(const NablaTensMorphism& m1, const NablaTensMorphism& m2);

// phi collapses the family to the two-color pattern: colors push forward
// along eta, morphisms keep alpha.
BMObject phi(const NablaTensObject& o);
TensMorphism phi_mor(const NablaTensMorphism& m);

// bar_index([n]) = (<n+2>, [2], (0,1,...,1), (1,...,1,2)): one left module
// color, n algebra colors, one right module color.
TensObject bar_index(int n);
// Image of mu: [m] -> [n] under the bar indexing functor, as a morphism
// bar_index(n) -> bar_index(m).
TensMorphism bar_mor(const MonotoneMap& mu);

// The 2k+1 single-color objects a_0..a_k, m_01..m_(k-1,k).
std::vector<TensObject> colors_of(int k);

bool is_mass_object(const TensObject& o);
// Commuting-square validation c = lambda o c' o alpha (plus valid Ass data).
bool validate_mass_morphism(const TensMorphism& m, const TensObject& src, const TensObject& dst);

struct MassSliceObject {
  int n1 = 0;
  AssMorphism alpha1;     // <n> -> <n1>
  AssMorphism alpha2;     // <n1> -> <n''>
  std::vector<int> c1;    // coloring of <n1> in [k']
  bool operator==(const MassSliceObject& o) const = default;
};

struct MassSliceReport {
  MassSliceObject terminal;
  long long objects_enumerated = 0;
  bool terminal_verified = false;  // exactly one slice morphism from each object
  bool connected = false;          // every enumerated object reaches the terminal one
};

// Slice-fiber category of a factorization lambda = lambda1 o lambda2 under a
// morphism (alpha, lambda): src -> dst of the c- = c+ pattern; returns the
// asserted terminal object and enumeration-backed verification up to max_n1.
MassSliceReport mass_slice_terminal(const TensMorphism& m, const TensObject& src,
                                    const TensObject& dst, const MonotoneMap& lambda1,
                                    const MonotoneMap& lambda2, int max_n1);

struct VerifyReport {
  std::string law;
  std::map<std::string, long long> bound;
  long long cases_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

VerifyReport verify_tens_composition(int max_n, int max_k, bool parallel = true);
// Definitional reference route (materializes every composite); used to
// cross-check the in-place kernel at small bounds.
VerifyReport verify_tens_composition_materialized(int max_n, int max_k);
// Bases range over the Tens objects with n <= max_n, k <= max_base_k, so the
// enumeration covers the same object range as verify_tens_composition.
VerifyReport verify_phi_functor(int max_n, int max_base_k, bool parallel = true);
VerifyReport verify_phi_functor_materialized(int max_n, int max_base_k);
VerifyReport verify_bar_identities(int max_level);
// Runs mass_slice_terminal on every valid MAss morphism with n <= max_n,
// k <= max_k and every factorization of its lambda through [k'], k' <= max_k.
VerifyReport verify_mass_terminality(int max_n, int max_k, bool parallel = true);
VerifyReport verify_colors(int max_k);
VerifyReport verify_mass_restriction(int max_n, int max_k);

}  // namespace kd
