#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "kd/operads.hpp"
#include "oracles.hpp"

using namespace kd;

TEST_CASE("ass morphism validation") {
  AssMorphism a{2, 1, {1, 1}, {{1, 2}}};
  CHECK_NOTHROW(validate(a));
  a.fiber_orders = {{1}};
  CHECK_THROWS_AS(validate(a), std::invalid_argument);  // misses 2
  a.fiber_orders = {{1, 1}};
  CHECK_THROWS_AS(validate(a), std::invalid_argument);  // duplicate
  a.fiber_orders = {{1, 2}};
  a.map = {1, 2};
  CHECK_THROWS_AS(validate(a), std::invalid_argument);  // value out of range
}

TEST_CASE("ass composition concatenates fiber orders blockwise") {
  AssMorphism a1{3, 2, {1, 1, 2}, {{2, 1}, {3}}};
  AssMorphism a2{2, 1, {1, 1}, {{2, 1}}};
  AssMorphism c = compose_ass(a1, a2);
  CHECK(c.map == std::vector<int>{1, 1, 1});
  CHECK(c.fiber_orders == std::vector<std::vector<int>>{{3, 2, 1}});
  CHECK(compose_ass(a1, ass_identity(2)) == a1);
  CHECK(compose_ass(ass_identity(3), a1) == a1);
}

TEST_CASE("all_ass counts: maps times fiber orderings") {
  // |Ass(<n>,<m>)| = sum_s C(n,s) s! C(s+m-1, m-1)
  CHECK(all_ass(0, 0).size() == 1);
  CHECK(all_ass(1, 1).size() == 2);
  CHECK(all_ass(2, 1).size() == 5);   // kill both, one of two, both ordered two ways
  CHECK(all_ass(3, 1).size() == 16);
  CHECK(all_ass(2, 2).size() == 11);
  CHECK(all_ass(3, 3).size() == 106);
  for (auto& a : all_ass(3, 2)) CHECK_NOTHROW(validate(a));
}

TEST_CASE("tens object color condition") {
  CHECK(validate_tens_object({1, 2, {1}, {1}}));
  CHECK(validate_tens_object({1, 2, {0}, {1}}));
  CHECK_FALSE(validate_tens_object({1, 2, {0}, {2}}));
  CHECK_THROWS_AS(validate_tens_object({1, 2, {0}, {3}}), std::invalid_argument);
  CHECK(all_tens_objects(3, 2).size() == 125);  // (2k+1)^n
}

TEST_CASE("tens morphism fiber conditions") {
  TensObject src{2, 1, {0, 0}, {0, 1}};
  TensObject dst{1, 1, {0}, {1}};
  TensMorphism m{{2, 1, {1, 1}, {{1, 2}}}, identity_map(1)};
  CHECK(validate_tens_morphism(m, src, dst));
  m.alpha.fiber_orders = {{2, 1}};
  CHECK_FALSE(validate_tens_morphism(m, src, dst));

  TensMorphism shape{{2, 1, {1, 1}, {{1, 2}}}, identity_map(0)};
  CHECK_THROWS_AS(validate_tens_morphism(shape, src, dst), std::invalid_argument);
}

// The definition is silent about empty fibers.  Reading them as fully
// vacuous breaks closure of composition: with dst below, the morphism
// <1> -> <2> hitting only the algebra slot (lambda = id) would be valid,
// yet its composite with the collapse <2> -> <1> fails the endpoint
// condition.  The degenerate-chain reading (empty fiber over j forces
// lambda(c'-(j)) = lambda(c'+(j))) restores closure and is what
// validate_tens_morphism implements.
TEST_CASE("empty fibers carry the degenerate chain condition") {
  TensObject unit{0, 1, {}, {}};
  TensObject algebra_slot{1, 1, {0}, {0}};
  TensObject module_slot{1, 1, {0}, {1}};
  // unit insertion into an algebra color is allowed
  TensMorphism m{{0, 1, {}, {{}}}, identity_map(1)};
  CHECK(validate_tens_morphism(m, unit, algebra_slot));
  // a module color cannot be inserted from nothing unless lambda collapses it
  CHECK_FALSE(validate_tens_morphism(m, unit, module_slot));
  TensMorphism collapsed{{0, 1, {}, {{}}}, constant_map(1, 1, 0)};
  CHECK(validate_tens_morphism(collapsed, unit, module_slot));

  // the closure counterexample under the vacuous reading
  TensObject o1{1, 1, {0}, {0}};
  TensObject o2{2, 1, {0, 0}, {0, 1}};
  TensObject o3{1, 1, {0}, {1}};
  TensMorphism m1{{1, 2, {1}, {{1}, {}}}, identity_map(1)};
  TensMorphism m2{{2, 1, {1, 1}, {{1, 2}}}, identity_map(1)};
  CHECK_FALSE(validate_tens_morphism(m1, o1, o2));  // empty fiber over the module slot
  CHECK(validate_tens_morphism(m2, o2, o3));
  CHECK_FALSE(validate_tens_morphism(compose_tens(m1, m2), o1, o3));
}

TEST_CASE("constructive enumeration agrees with the filtering oracle") {
  for (int k = 0; k <= 1; ++k)
    for (int n = 0; n <= 2; ++n)
      for (auto& dst : all_tens_objects(n, k)) {
        for (int k1 = 0; k1 <= 1; ++k1)
          for (int n1 = 0; n1 <= 2; ++n1) {
            std::vector<std::pair<TensObject, TensMorphism>> filtered;
            for (auto& s : all_tens_objects(n1, k1))
              for (auto& m : all_tens_morphisms(s, dst)) filtered.push_back({s, m});
            auto built = valid_morphisms_into(dst, n1, k1);
            REQUIRE(built.size() == filtered.size());
            auto key = [](const std::pair<TensObject, TensMorphism>& p) {
              return p.first.str() + p.second.alpha.str() + p.second.lambda.str();
            };
            std::vector<std::string> a, b;
            for (auto& p : filtered) a.push_back(key(p));
            for (auto& p : built) b.push_back(key(p));
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
          }
      }
}

TEST_CASE("composition of valid morphisms validates") {
  auto rep = verify_tens_composition(2, 1, false);
  CHECK(rep.ok());
  CHECK(rep.cases_checked > 1000);
  auto par = verify_tens_composition(2, 1, true);
  CHECK(par.cases_checked == rep.cases_checked);
  CHECK(par.failures == rep.failures);

  // the in-place kernel must agree with the definitional compose-and-validate
  // route, including the exact case count
  auto mat = verify_tens_composition_materialized(2, 1);
  CHECK(mat.ok());
  CHECK(mat.cases_checked == rep.cases_checked);

  // independent pair count from the public enumerator
  std::vector<TensObject> objs;
  for (int k = 0; k <= 1; ++k)
    for (int n = 0; n <= 2; ++n)
      for (auto& o : all_tens_objects(n, k)) objs.push_back(o);
  std::map<std::string, long long> in_count, out_count;
  for (auto& t : objs)
    for (int k1 = 0; k1 <= 1; ++k1)
      for (int n1 = 0; n1 <= 2; ++n1)
        for (auto& [s, m] : valid_morphisms_into(t, n1, k1)) {
          in_count[t.str()] += 1;
          out_count[s.str()] += 1;
        }
  long long expect = 0;
  for (auto& o : objs) expect += in_count[o.str()] * out_count[o.str()];
  expect += static_cast<long long>(objs.size());  // identity checks
  CHECK(rep.cases_checked == expect);
}

TEST_CASE("phi on objects") {
  NablaTensObject o1{1, {2, 1, {0, 1}, {1, 1}}};
  BMObject b1 = phi(o1);
  CHECK(b1.c_minus == std::vector<int>{0, 0});
  CHECK(b1.c_plus == std::vector<int>{0, 0});

  NablaTensObject o2{0, {1, 1, {0}, {1}}};  // over [0], flag 0; c+ hits the max
  BMObject b2 = phi(o2);
  CHECK(b2.c_minus == std::vector<int>{0});
  CHECK(b2.c_plus == std::vector<int>{1});
}

TEST_CASE("phi functor laws") {
  auto rep = verify_phi_functor(2, 1, false);
  CHECK(rep.ok());
  CHECK(rep.cases_checked > 100);
  auto par = verify_phi_functor(2, 1, true);
  CHECK(par.cases_checked == rep.cases_checked);
  CHECK(par.failures == rep.failures);

  // the factored law check must agree with the route that materializes both
  // sides of phi(m2.m1) = phi(m2).phi(m1) per pair, section by section
  auto mat = verify_phi_functor_materialized(2, 1);
  CHECK(mat.ok());
  CHECK(mat.cases_checked == rep.cases_checked);
  auto mat2 = verify_phi_functor_materialized(1, 2);
  auto fac2 = verify_phi_functor(1, 2, false);
  CHECK(mat2.ok());
  CHECK(fac2.ok());
  CHECK(mat2.cases_checked == fac2.cases_checked);
}

TEST_CASE("bar indexing") {
  CHECK(bar_index(0) == TensObject{2, 2, {0, 1}, {1, 2}});
  TensObject b2 = bar_index(2);
  int modules = 0, algebras = 0;
  for (int i = 0; i < b2.n; ++i)
    (b2.c_minus[static_cast<size_t>(i)] == b2.c_plus[static_cast<size_t>(i)] ? algebras : modules)++;
  CHECK(modules == 2);
  CHECK(algebras == 2);

  // d0 merges the left module slot with the first letter
  TensMorphism d0 = bar_mor(face_map(1, 0));
  CHECK(d0.alpha.fiber_orders == std::vector<std::vector<int>>{{1, 2}, {3}});
  // top face merges the last letter into the right module slot
  TensMorphism d1 = bar_mor(face_map(1, 1));
  CHECK(d1.alpha.fiber_orders == std::vector<std::vector<int>>{{1}, {2, 3}});
  // degeneracy inserts a unit slot
  TensMorphism s0 = bar_mor(degeneracy_map(0, 0));
  CHECK(s0.alpha.fiber_orders == std::vector<std::vector<int>>{{1}, {}, {2}});

  auto rep = verify_bar_identities(4);
  CHECK(rep.ok());
  CHECK(rep.cases_checked > 100);
}

TEST_CASE("colors") {
  CHECK(colors_of(0).size() == 1);
  CHECK(colors_of(1).size() == 3);
  CHECK(colors_of(3).size() == 7);
  CHECK(verify_colors(5).ok());
}

TEST_CASE("mass restriction reduces to commuting squares") {
  auto rep = verify_mass_restriction(2, 2);
  CHECK(rep.ok());
  CHECK(rep.cases_checked > 1000);
}

TEST_CASE("mass slice terminality: identity case") {
  TensObject c{1, 1, {0}, {0}};
  TensMorphism m = tens_identity(c);
  auto rep = mass_slice_terminal(m, c, c, identity_map(1), identity_map(1), 2);
  CHECK(rep.terminal.n1 == 1);
  CHECK(rep.terminal.alpha1 == ass_identity(1));
  CHECK(rep.terminal_verified);
  CHECK(rep.connected);
  CHECK(rep.objects_enumerated > 1);
}

TEST_CASE("mass slice terminality: collapse over a face factorization") {
  TensObject src{2, 1, {0, 0}, {0, 0}};
  TensObject dst{1, 0, {0}, {0}};
  MonotoneMap lam{0, 1, {0}};
  TensMorphism m{{2, 1, {1, 1}, {{1, 2}}}, lam};
  REQUIRE(validate_mass_morphism(m, src, dst));
  auto rep = mass_slice_terminal(m, src, dst, lam, identity_map(0), 3);
  CHECK(rep.terminal_verified);
  CHECK(rep.connected);
  CHECK(rep.objects_enumerated > 1);

  MonotoneMap wrong{0, 1, {1}};
  CHECK_THROWS_AS(mass_slice_terminal(m, src, dst, wrong, identity_map(0), 3),
                  std::invalid_argument);
}

TEST_CASE("verification reports carry their bounds") {
  auto rep = verify_colors(2);
  CHECK(rep.bound.at("max_k") == 2);
  CHECK(rep.law == "colors_are_single_color_objects");
}
