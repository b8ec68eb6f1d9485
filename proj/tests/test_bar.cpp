#include <doctest.h>

#include "fixtures.hpp"
#include "kd/bar.hpp"
#include "oracles.hpp"

#include <functional>
#include <string>

using namespace kd;

namespace {

template <class F>
std::string thrown_message(F&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// 1 as a (1, A)- respectively (A, 1)-bimodule on A's window
DgBimodule left_unit_over(const DgAlgebra& a) {
  return trivial_bimodule(unit_algebra(a.underlying.field(), a.underlying.window()), a);
}
DgBimodule right_unit_over(const DgAlgebra& a) {
  return trivial_bimodule(a, unit_algebra(a.underlying.field(), a.underlying.window()));
}

int oracle_at(const std::map<int, int>& m, int n) {
  auto it = m.find(n);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("bar word dimensions match the counting oracle") {
  Field f = Field::rationals();
  Window w{-1, 9};
  DgAlgebra a = fix::mixed(f, w);
  BarComplex b = relative_tensor(regular_bimodule(a), a,
                                 trivial_bimodule(a, unit_algebra(f, w)), w);
  // letters are Abar[1]: x in suspended degree 1, y in suspended degree 2
  std::map<int, int> expect =
      oracle::bar_dims({{0, 2}, {1, 1}}, {{1, 1}, {2, 1}}, {{0, 1}}, 12);
  for (int n = w.lo; n <= w.hi; ++n) CHECK(b.realization.dim(n) == oracle_at(expect, n));
  CHECK(b.realization.truncated());

  // exterior generator: one word per weight, in degree 2k
  DgAlgebra e = fix::exterior(f, w);
  BarComplex be = relative_tensor(left_unit_over(e), e, right_unit_over(e), w);
  for (int k = 0; 2 * k <= w.hi; ++k) CHECK(be.weight_dim(2 * k, k) == 1);
  for (int n = 0; n <= w.hi; ++n) {
    int total = 0;
    for (int k = 0; k <= n; ++k) total += be.weight_dim(n, k);
    CHECK(total == be.realization.dim(n));
    CHECK(be.realization.dim(n) == (n % 2 == 0 ? 1 : 0));
  }

  // the weight-0 part is M (x) N on the nose
  ChainComplex mn = tensor(b.bimodule.left_algebra.underlying, unit_complex(f, w));
  for (int n = 0; n <= w.hi; ++n) CHECK(b.weight_dim(n, 0) == mn.dim(n));
}

TEST_CASE("relative tensor over the unit algebra is the identity") {
  Field f = Field::rationals();
  Window w{-1, 5};
  DgAlgebra one = unit_algebra(f, w);
  DgBimodule n = free_bimodule(one, fix::e11(f, w), one);
  BarComplex b = relative_tensor(trivial_bimodule(one, one), one, n, w);
  CHECK(b.realization == n.underlying);
  CHECK_FALSE(b.realization.truncated());
  for (int q = w.lo; q <= w.hi; ++q)
    for (int p = w.lo; p <= w.hi; ++p)
      if (w.contains(p + q)) {
        CHECK(b.bimodule.right_action_at(q, p) == n.right_action_at(q, p));
        CHECK(b.bimodule.left_action_at(p, q) == n.left_action_at(p, q));
      }
}

TEST_CASE("internal and simplicial differentials square to zero separately") {
  Field f = Field::rationals();
  Window w{-1, 7};
  DgAlgebra a = fix::mixed(f, w);
  BarComplex b = relative_tensor(regular_bimodule(a), a, regular_bimodule(a), w);
  for (int n = w.lo + 2; n <= w.hi; ++n) {
    const SparseMatrix& di1 = b.d_internal.at(n - 1);
    const SparseMatrix& di2 = b.d_internal.at(n);
    const SparseMatrix& de1 = b.d_simplicial.at(n - 1);
    const SparseMatrix& de2 = b.d_simplicial.at(n);
    CHECK((di1 * di2).is_zero());
    CHECK((de1 * de2).is_zero());
    CHECK((di1 * de2 + de1 * di2).is_zero());
    CHECK(b.realization.diff(n) == di2 + de2);
  }
}

TEST_CASE("koszul dual homology: frozen low-degree tables") {
  Field f = Field::rationals();
  Window w{-1, 11};
  {
    DgAlgebra a = fix::exterior(f, w);
    BarComplex b = relative_tensor(left_unit_over(a), a, right_unit_over(a), w);
    for (int n = 0; n <= 10; ++n)
      CHECK(homology(b.realization, n).rank == (n % 2 == 0 ? 1 : 0));
  }
  {
    DgAlgebra a = fix::dualnum(f, w);
    BarComplex b = relative_tensor(left_unit_over(a), a, right_unit_over(a), w);
    for (int n = 0; n <= 10; ++n) CHECK(homology(b.realization, n).rank == 1);
  }
  {
    DgAlgebra a = fix::square_zero(f, w, 2);
    BarComplex b = relative_tensor(left_unit_over(a), a, right_unit_over(a), w);
    for (int n = 0; n <= 10; ++n)
      CHECK(homology(b.realization, n).rank == (n % 3 == 0 ? 1 : 0));
  }
  {
    // mixed is quasi-isomorphic to the unit algebra
    DgAlgebra a = fix::mixed(f, w);
    BarComplex b = relative_tensor(left_unit_over(a), a, right_unit_over(a), w);
    for (int n = 0; n <= 10; ++n) CHECK(homology(b.realization, n).rank == (n == 0 ? 1 : 0));
  }
  {
    // same pattern over a prime field
    Field f5 = Field::prime(5);
    Window w5{-1, 6};
    DgAlgebra a = fix::exterior(f5, w5);
    BarComplex b = relative_tensor(left_unit_over(a), a, right_unit_over(a), w5);
    for (int n = 0; n <= 5; ++n)
      CHECK(homology(b.realization, n).rank == (n % 2 == 0 ? 1 : 0));
  }
}

TEST_CASE("extra degeneracy: A (x)_A N has the homology of N") {
  Field f = Field::rationals();
  {
    Window w{-1, 8};
    for (const DgAlgebra& a : {fix::exterior(f, w), fix::dualnum(f, w)}) {
      for (const DgBimodule& n :
           {regular_bimodule(a), trivial_bimodule(a, a), free_bimodule(a, fix::e11(f, w), a)}) {
        BarComplex b = relative_tensor(regular_bimodule(a), a, n, w);
        for (int deg = 0; deg <= w.hi - 1; ++deg)
          CHECK(homology(b.realization, deg).rank == homology(n.underlying, deg).rank);
      }
    }
  }
  {
    Window w{-1, 6};
    DgAlgebra a = fix::mixed(f, w);
    for (const DgBimodule& n : {regular_bimodule(a), trivial_bimodule(a, a)}) {
      BarComplex b = relative_tensor(regular_bimodule(a), a, n, w);
      for (int deg = 0; deg <= w.hi - 1; ++deg)
        CHECK(homology(b.realization, deg).rank == homology(n.underlying, deg).rank);
    }
  }
}

TEST_CASE("sectors: external relative tensor and its mismatches") {
  Field f = Field::rationals();
  Window w{-1, 6};
  DgAlgebra a = fix::exterior(f, w);
  DgLeftModule m = free_left_module(a, fix::e11(f, w));  // module sector
  DgBimodule n = regular_bimodule(a);                    // algebra sector
  DgLeftModule ext = external_relative_tensor(n, m, w);
  CHECK(ext.sector == "m");
  CHECK(ext.algebra.name == a.name);

  // same formula in one sector: a resectored copy agrees on the nose
  DgLeftModule m2 = m;
  m2.sector = "a";
  BarComplex rel = relative_tensor(n, a, as_bimodule(m2), w);
  CHECK(ext.underlying == rel.realization);
  for (int p = w.lo; p <= w.hi; ++p)
    for (int q = w.lo; q <= w.hi; ++q)
      if (w.contains(p + q)) CHECK(ext.action_at(p, q) == rel.bimodule.left_action_at(p, q));

  for (int deg = 0; deg <= w.hi - 1; ++deg)
    CHECK(homology(ext.underlying, deg).rank == homology(m.underlying, deg).rank);

  CHECK(thrown_message([&] { relative_tensor(n, a, as_bimodule(m), w); }).find("sector") !=
        std::string::npos);
  DgBimodule wrong = trivial_bimodule(a, fix::dualnum(f, w));
  CHECK(thrown_message([&] { external_relative_tensor(wrong, m, w); }).find("side mismatch") !=
        std::string::npos);
  DgBimodule resect = regular_bimodule(a);
  resect.sector = "m";
  CHECK(thrown_message([&] { external_relative_tensor(resect, m, w); }).find("sector") !=
        std::string::npos);
}

TEST_CASE("deconcatenation coproduct and its laws") {
  Field f = Field::rationals();
  Window w{-1, 8};
  DgCoalgebra c = koszul_dual_algebra(fix::exterior(f, w), w);
  CHECK(validate(c).ok());
  CHECK(c.underlying.dim(2) == 1);
  CHECK(c.basis_names.at(2)[0] == "[x]");
  CHECK(c.basis_names.at(4)[0] == "[x|x]");
  // Delta([x|x]) = [x|x] (x) 1 + [x] (x) [x] + 1 (x) [x|x]
  CHECK(c.coproduct_at(2, 2) == SparseMatrix::identity(f, 1));
  CHECK(c.coproduct_at(0, 4) == SparseMatrix::identity(f, 1));
  CHECK(c.coproduct_at(4, 0) == SparseMatrix::identity(f, 1));
  CHECK(c.coproduct_at(1, 3).rows() == 0);
  CHECK(c.counit * c.coaugmentation == SparseMatrix::identity(f, 1));

  // weight 6 and beyond for letters in degree 0 plus a differential
  Window w7{-1, 7};
  DgCoalgebra cm = koszul_dual_algebra(fix::mixed(f, w7), w7);
  CHECK(validate(cm).ok());
  DgCoalgebra cd = koszul_dual_algebra(fix::dualnum(f, w7), w7);
  CHECK(validate(cd).ok());
  for (int n = 0; n <= 7; ++n) CHECK(cd.underlying.dim(n) == 1);

  // dual module: coaction splits off left letters
  DgAlgebra a = fix::exterior(f, w);
  DgComodule y = koszul_dual_module(a, free_left_module(a, fix::e11(f, w)), w);
  CHECK(validate(y).ok());
  CHECK(y.coalgebra.underlying == c.underlying);
  DgComodule yt = koszul_dual_module(a, trivial_left_module(a), w);
  CHECK(validate(yt).ok());
  for (int n = w.lo; n <= w.hi; ++n) CHECK(yt.underlying.dim(n) == c.underlying.dim(n));
}

TEST_CASE("interchange witness is a degreewise isomorphism") {
  Field f = Field::rationals();
  Window w{-1, 5};
  DgAlgebra a = fix::exterior(f, w);
  DgBimodule m = regular_bimodule(a), n = regular_bimodule(a);
  {
    ChainComplex unit = unit_complex(f, w);
    CompatWitness cw = compat_witness(unit, m, a, n, unit, w);
    CHECK(cw.degreewise_iso);
    BarComplex mid = relative_tensor(m, a, n, w);
    for (int deg = w.lo; deg <= w.hi; ++deg)
      CHECK(cw.map.component(deg) == SparseMatrix::identity(f, mid.realization.dim(deg)));
  }
  {
    // a shift on the left: the witness is the corresponding permutation
    ChainComplex pt = point_complex(f, w, 1);
    CompatWitness cw = compat_witness(pt, m, a, n, unit_complex(f, w), w);
    CHECK(cw.degreewise_iso);
    BarComplex mid = relative_tensor(m, a, n, w);
    for (int deg = w.lo + 1; deg <= w.hi; ++deg)
      CHECK(cw.map.component(deg).rows() == mid.realization.dim(deg - 1));
  }
  {
    // differentials on both outer complexes, algebra with differential inside
    std::map<int, SparseMatrix> dx;
    dx.emplace(1, SparseMatrix::from_dense(f, {{Scalar::one(f)}}));
    ChainComplex x = ChainComplex::build(f, w, {{0, 1}, {1, 1}}, dx);
    DgAlgebra am = fix::mixed(f, w);
    CompatWitness cw = compat_witness(x, regular_bimodule(am), am,
                                      free_bimodule(am, fix::e11(f, w), am), fix::e11(f, w), w);
    CHECK(cw.degreewise_iso);
  }
}

TEST_CASE("cobar: regime guard and the counit quasi-isomorphism") {
  Field f = Field::rationals();
  Window w{-1, 8};
  // k[x]/x^2 puts letters in coalgebra degree 1: outside the dual regime
  DgCoalgebra bad = koszul_dual_algebra(fix::dualnum(f, w), w);
  CHECK(thrown_message([&] { cobar(bad, w); }).find("dual regime") != std::string::npos);

  // a cobar word of degree n can use a letter of coalgebra degree n + 1, so a
  // window-truncated coalgebra gives cobar homology only through hi - 2
  for (const DgAlgebra& a : {fix::exterior(f, w), fix::mixed2(f, w)}) {
    DgAlgebraMap phi = bar_cobar_counit(a, w);  // validated as an algebra map
    CHECK(phi.dst.name == a.name);
    QuasiIsoReport rep = is_quasi_iso(phi.map);
    for (const QuasiIsoRow& r : rep.rows)
      if (r.degree >= 0 && r.degree <= w.hi - 2) {
        INFO(a.name, " degree ", r.degree);
        CHECK(r.iso);
      }
  }

  // the cobar algebra itself validates and has the concatenation unit
  DgCoalgebra c = koszul_dual_algebra(fix::exterior(f, w), w);
  DgAlgebra om = cobar(c, w);
  CHECK(om.underlying.dim(0) == 1);
  CHECK(om.underlying.dim(1) == 1);  // the desuspended letter [x]
  CHECK(om.basis_names.at(1)[0] == "<[x]>");
}

TEST_CASE("cobar modules contract to the original module") {
  Field f = Field::rationals();
  Window w{-1, 7};
  DgAlgebra a = fix::exterior(f, w);
  DgCoalgebra c = koszul_dual_algebra(a, w);
  {
    DgComodule y = koszul_dual_module(a, trivial_left_module(a), w);
    DgLeftModule om = cobar_module(c, y, w);
    for (int deg = 0; deg <= w.hi - 2; ++deg)
      CHECK(homology(om.underlying, deg).rank == (deg == 0 ? 1 : 0));
  }
  {
    DgLeftModule x = free_left_module(a, fix::e11(f, w));
    DgComodule y = koszul_dual_module(a, x, w);
    DgLeftModule om = cobar_module(c, y, w);
    for (int deg = 0; deg <= w.hi - 2; ++deg)
      CHECK(homology(om.underlying, deg).rank == homology(x.underlying, deg).rank);
  }
  DgComodule mismatched = koszul_dual_module(a, trivial_left_module(a), w);
  mismatched.coalgebra.name = "other";
  CHECK(thrown_message([&] { cobar_module(c, mismatched, w); }).find("comodule") !=
        std::string::npos);
}

TEST_CASE("bar unit map and the free projection identity") {
  Field f = Field::rationals();
  Window w{-1, 6};
  for (const DgAlgebra& a : {fix::exterior(f, w), fix::mixed(f, w)})
    CHECK(free_unit_projection_check(a, fix::e11(f, w), w));

  DgAlgebra a = fix::exterior(f, w);
  DgLeftModule x = free_left_module(a, fix::e11(f, w));
  BarObjectVerdict good = bar_object_check(a, x, fix::e11(f, w), w);
  INFO(good.detail);
  CHECK(good.ok());
  BarObjectVerdict badv = bar_object_check(a, x, unit_complex(f, w), w);
  CHECK_FALSE(badv.ranks_match);
  CHECK(badv.unit_map_ok);
  CHECK(badv.detail.find("mismatch") != std::string::npos);
}

TEST_CASE("constant simplicial objects realize to their value") {
  Field f = Field::rationals();
  Window w{-1, 4};
  ChainComplex x = fix::e11(f, w);
  SimplicialComplexObject s = constant_simplicial(x, 3);
  ValidationReport rep = validate(s);
  INFO(rep.str());
  CHECK(rep.ok());
  Realization r = realize(s);
  CHECK(r.normalized == x);
  for (int n = w.lo; n <= w.hi; ++n) {
    int expect = 0;
    for (int k = 0; k <= 3; ++k) expect += w.contains(n - k) ? x.dim(n - k) : 0;
    CHECK(r.unnormalized.dim(n) == expect);
  }
  CHECK(r.unnormalized.truncated());  // deeper levels exist but are not stored
}

TEST_CASE("bar simplicial object: levels, identities, normalization") {
  Field f = Field::rationals();
  Window w{-1, 5};
  DgAlgebra a = fix::exterior(f, w);
  DgBimodule lt = left_unit_over(a), rt = right_unit_over(a);
  SimplicialComplexObject s = bar_simplicial(lt, a, rt, 6);
  ValidationReport rep = validate(s);
  INFO(rep.str());
  CHECK(rep.ok());

  // level k is A^(x)k with binomial dimensions
  for (int k = 0; k <= 6; ++k) {
    std::map<int, int> expect = oracle::word_dims({{0, 1}, {1, 1}}, k);
    for (int d = 0; d <= w.hi; ++d) CHECK(s.levels[k].dim(d) == oracle_at(expect, d));
  }

  Realization r = realize(s);
  BarComplex red = relative_tensor(lt, a, rt, w);
  for (int n = w.lo; n <= w.hi; ++n) CHECK(r.normalized.dim(n) == red.realization.dim(n));
  for (int n = 0; n <= 4; ++n)
    CHECK(homology(r.normalized, n).rank == homology(red.realization, n).rank);
  QuasiIsoReport cmp = is_quasi_iso(r.comparison);
  for (const QuasiIsoRow& row : cmp.rows)
    if (row.degree >= 0 && row.degree <= 4) {
      INFO("degree ", row.degree);
      CHECK(row.iso);
    }

  // sign-rich instance: differential in the algebra, regular module on the left
  Window w4{-1, 4};
  DgAlgebra am = fix::mixed(f, w4);
  SimplicialComplexObject sm =
      bar_simplicial(regular_bimodule(am), am, trivial_bimodule(am, am), 5);
  ValidationReport repm = validate(sm);
  INFO(repm.str());
  CHECK(repm.ok());
  Realization rm = realize(sm);
  BarComplex redm = relative_tensor(regular_bimodule(am), am, trivial_bimodule(am, am), w4);
  for (int n = w4.lo; n <= w4.hi; ++n) CHECK(rm.normalized.dim(n) == redm.realization.dim(n));
  for (int n = 0; n <= 3; ++n)
    CHECK(homology(rm.normalized, n).rank == homology(redm.realization, n).rank);
}

TEST_CASE("iterated relative tensors associate in homology") {
  Field f = Field::rationals();
  Window w{-1, 6};
  DgAlgebra a = fix::exterior(f, w);
  DgBimodule n1 = free_bimodule(a, point_complex(f, w, 0), a);
  DgBimodule n2 = free_bimodule(a, fix::e11(f, w), a);
  DgBimodule k = trivial_bimodule(a, a);
  BarComplex left = relative_tensor(relative_tensor(n1, a, n2, w).bimodule, a, k, w);
  BarComplex right = relative_tensor(n1, a, relative_tensor(n2, a, k, w).bimodule, w);
  // both contract to A (x) A (x) E: Kunneth gives ranks (1 + t)^3
  std::map<int, int> expect = {{0, 1}, {1, 3}, {2, 3}, {3, 1}};
  for (int deg = 0; deg <= w.hi - 1; ++deg) {
    CHECK(homology(left.realization, deg).rank == oracle_at(expect, deg));
    CHECK(homology(right.realization, deg).rank == oracle_at(expect, deg));
  }
}

TEST_CASE("window and side guards") {
  Field f = Field::rationals();
  DgAlgebra a = fix::exterior(f, {-1, 4});
  CHECK(thrown_message([&] {
          relative_tensor(left_unit_over(a), a, right_unit_over(a), Window{1, 4});
        }).find("window") != std::string::npos);
  DgAlgebra b = fix::dualnum(f, {-1, 4});
  CHECK(thrown_message([&] {
          relative_tensor(left_unit_over(a), b, right_unit_over(a), Window{-1, 4});
        }).find("side mismatch") != std::string::npos);
}
