#include <doctest.h>

#include <stdexcept>

#include "kd/simplicial.hpp"
#include "oracles.hpp"

using namespace kd;

static MonotoneMap mm(int a, int b, std::vector<int> v) {
  MonotoneMap f{a, b, std::move(v)};
  validate(f);
  return f;
}

TEST_CASE("monotone map validation") {
  CHECK_NOTHROW(validate(mm(1, 2, {0, 2})));
  MonotoneMap bad{1, 2, {0}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = {1, 2, {2, 0}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = {1, 2, {0, 3}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("compose basics") {
  CHECK(compose(identity_map(2), identity_map(2)) == identity_map(2));
  auto f = mm(1, 0, {0, 0});
  auto g = mm(0, 1, {0});
  CHECK(compose(f, g) == mm(1, 1, {0, 0}));
  auto h = mm(2, 1, {0, 0, 1});
  CHECK_THROWS_AS(compose(f, h), std::invalid_argument);
}

TEST_CASE("enumeration matches the multiset count") {
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      auto maps = all_monotone(a, b);
      CHECK(BigInt(maps.size()) == oracle::monotone_count(a, b));
      for (auto& m : maps) CHECK_NOTHROW(validate(m));
    }
}

TEST_CASE("composition is associative and unital up to [4]") {
  const int bound = 4;  // configurable enumeration bound
  std::vector<std::vector<std::vector<MonotoneMap>>> hom(bound + 1);
  for (int a = 0; a <= bound; ++a) {
    hom[a].resize(bound + 1);
    for (int b = 0; b <= bound; ++b) hom[a][b] = all_monotone(a, b);
  }
  // units
  for (int a = 0; a <= bound; ++a)
    for (int b = 0; b <= bound; ++b)
      for (auto& f : hom[a][b]) {
        CHECK(compose(identity_map(a), f) == f);
        CHECK(compose(f, identity_map(b)) == f);
      }
  // associativity
  long long checked = 0;
  for (int a = 0; a <= bound; ++a)
    for (int b = 0; b <= bound; ++b)
      for (int c = 0; c <= bound; ++c)
        for (int d = 0; d <= bound; ++d)
          for (auto& f : hom[a][b])
            for (auto& g : hom[b][c]) {
              auto fg = compose(f, g);
              for (auto& h : hom[c][d]) {
                if (compose(fg, h) == compose(f, compose(g, h)))
                  ++checked;
                else
                  FAIL("associativity violated for ", f.str(), " ", g.str(), " ", h.str());
              }
            }
  CHECK(checked > 0);
}

TEST_CASE("convexity") {
  CHECK(is_convex(mm(1, 3, {1, 2})));
  CHECK_FALSE(is_convex(mm(1, 2, {0, 2})));
  CHECK(is_convex(mm(2, 2, {1, 1, 1})));
  for (int n = 0; n <= 4; ++n) CHECK(is_convex(identity_map(n)));
  // closed under composition
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c)
        for (auto& f : all_monotone(a, b))
          for (auto& g : all_monotone(b, c))
            if (is_convex(f) && is_convex(g)) CHECK(is_convex(compose(f, g)));
}

TEST_CASE("plus on examples and functoriality up to [3]") {
  CHECK(plus(identity_map(0)) == identity_map(1));
  CHECK(plus(mm(0, 1, {0})) == mm(1, 2, {0, 2}));
  CHECK(plus(mm(2, 1, {0, 0, 1})) == mm(3, 2, {0, 0, 1, 2}));
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c)
        for (auto& f : all_monotone(a, b))
          for (auto& g : all_monotone(b, c))
            CHECK(plus(compose(f, g)) == compose(plus(f), plus(g)));
}

TEST_CASE("delta on objects and pinned morphisms") {
  CHECK(delta_obj({2, 0}).n == 3);
  CHECK(delta_obj({2, 1}).n == 2);

  NablaMorphism m{{0, 0}, {0, 0}, identity_map(0)};
  CHECK(delta(m) == identity_map(1));

  m = {{0, 0}, {0, 1}, identity_map(0)};
  CHECK(delta(m) == mm(0, 1, {0}));

  // tau: ([1],0) -> ([0],0) over the map [0] -> [1] hitting 0
  NablaMorphism tau{{1, 0}, {0, 0}, mm(0, 1, {0})};
  CHECK(delta(tau) == mm(1, 2, {0, 2}));

  NablaMorphism bad{{0, 1}, {0, 0}, identity_map(0)};
  CHECK_THROWS_AS(delta(bad), std::invalid_argument);
}

static std::vector<NablaMorphism> nabla_homs(const NablaObject& a, const NablaObject& b) {
  std::vector<NablaMorphism> out;
  if (a.flag > b.flag) return out;
  for (auto& l : all_monotone(b.k, a.k)) out.push_back({a, b, l});
  return out;
}

TEST_CASE("delta is functorial up to [3]") {
  std::vector<NablaObject> objs;
  for (int k = 0; k <= 3; ++k)
    for (int e = 0; e <= 1; ++e) objs.push_back({k, e});
  for (auto& a : objs)
    for (auto& b : objs)
      for (auto& c : objs)
        for (auto& m1 : nabla_homs(a, b))
          for (auto& m2 : nabla_homs(b, c)) {
            auto big = delta(nabla_compose(m2, m1));
            CHECK(big == compose(delta(m2), delta(m1)));
          }
  // identities
  for (auto& a : objs) CHECK(delta(nabla_identity(a)) == identity_map(delta_obj(a).n));
}

TEST_CASE("eta values and naturality") {
  CHECK(eta({0, 1}) == mm(0, 1, {0}));
  CHECK(eta({1, 0}) == mm(2, 1, {0, 0, 1}));

  NablaMorphism tau{{1, 0}, {0, 0}, mm(0, 1, {0})};
  CHECK(compose(delta(tau), eta(tau.src)) == eta(tau.tgt));

  std::vector<NablaObject> objs;
  for (int k = 0; k <= 3; ++k)
    for (int e = 0; e <= 1; ++e) objs.push_back({k, e});
  for (auto& a : objs)
    for (auto& b : objs)
      for (auto& m : nabla_homs(a, b)) CHECK(compose(delta(m), eta(m.src)) == eta(m.tgt));
}
