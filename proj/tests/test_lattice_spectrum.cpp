#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "ttg/builtins.hpp"
#include "ttg/error.hpp"
#include "ttg/spectrum.hpp"
#include "ttg/thick_lattice.hpp"

using namespace ttg;

namespace {

OrbitSet set_of(const Presentation& p, std::initializer_list<const char*> names) {
  OrbitSet s;
  for (auto n : names) s.insert(static_cast<std::size_t>(*p.find_orbit(n)));
  return s;
}

}  // namespace

TEST_SUITE("thick-lattice") {

TEST_CASE("A2 closures") {
  const auto& p = builtin("a2").presentation;
  CHECK(thick_closure(p, set_of(p, {"S1", "S2"})) == p.all_orbits());
  CHECK(thick_closure(p, OrbitSet()) == OrbitSet());
  CHECK(thick_closure(p, set_of(p, {"P1"})) == set_of(p, {"P1"}));
  CHECK_THROWS_AS(ideal_closure(p, OrbitSet()), Error);
}

TEST_CASE("ideal closures") {
  const auto& kxk = builtin("kxk").presentation;
  CHECK(ideal_closure(kxk, set_of(kxk, {"P1"})) == set_of(kxk, {"P1"}));
  CHECK(ideal_closure(kxk, kxk.all_orbits()) == kxk.all_orbits());
  const auto& dn = builtin("dual_numbers").presentation;
  CHECK(ideal_closure(dn, set_of(dn, {"C"})) == dn.all_orbits());
}

TEST_CASE("lattice sizes") {
  const auto& a2 = builtin("a2").presentation;
  auto l = enumerate_thick(a2);
  REQUIRE(l.sets.size() == 5);
  CHECK(l.contains(OrbitSet()));
  CHECK(l.contains(set_of(a2, {"S1"})));
  CHECK(l.contains(set_of(a2, {"S2"})));
  CHECK(l.contains(set_of(a2, {"P1"})));
  CHECK(l.contains(a2.all_orbits()));
  CHECK(enumerate_ideals(builtin("kxk").presentation).sets.size() == 4);
  CHECK(enumerate_ideals(builtin("dual_numbers").presentation).sets.size() == 2);
  CHECK(enumerate_thick(builtin("k").presentation).sets.size() == 2);
  CHECK(enumerate_ideals(builtin("kxkxk").presentation).sets.size() == 8);
}

TEST_CASE("lattices agree with the brute-force scan") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    CHECK(enumerate_thick(p).sets == oracle::thick_sets(p));
    if (p.has_tensor()) CHECK(enumerate_ideals(p).sets == oracle::ideal_sets(p));
  }
}

TEST_CASE("closure is idempotent, extensive and monotone") {
  std::mt19937_64 rng(3);
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    const std::uint64_t full = p.all_orbits().bits();
    for (int t = 0; t < 200; ++t) {
      OrbitSet g(rng() & full), h(g.bits() | (rng() & full));
      OrbitSet cg = thick_closure(p, g);
      CHECK(g.subset_of(cg));
      CHECK(thick_closure(p, cg) == cg);
      CHECK(cg.subset_of(thick_closure(p, h)));
      if (p.has_tensor()) {
        OrbitSet ig = ideal_closure(p, g);
        CHECK(ideal_closure(p, ig) == ig);
        CHECK(ig.subset_of(ideal_closure(p, h)));
      }
    }
  }
}

TEST_CASE("lattice is closed under intersection") {
  for (const auto& name : builtin_names()) {
    auto l = enumerate_thick(builtin(name).presentation);
    for (auto s : l.sets)
      for (auto t : l.sets) CHECK(l.contains(s & t));
  }
}

TEST_CASE("next closure lists every fixpoint once") {
  auto close = [](OrbitSet s) { return s.contains(0) ? OrbitSet(s.bits() | 2) : s; };
  auto all = next_closure_all(3, close);
  CHECK(all.size() == 6);
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  for (auto s : all) CHECK(close(s) == s);
}

TEST_CASE("Balmer primality examples") {
  const auto& p = builtin("kxk").presentation;
  CHECK(is_prime_balmer(p, set_of(p, {"P1"})));
  CHECK_FALSE(is_prime_balmer(p, OrbitSet()));
  for (const auto& name : perf_builtin_names()) {
    const auto& q = builtin(name).presentation;
    CHECK_FALSE(is_prime_balmer(q, q.all_orbits()));
  }
}

TEST_CASE("pairwise primality agrees with the rank <= 3 definition") {
  for (const auto& name : perf_builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    auto objs = oracle::objects(p, 3, 0, 1);
    for (auto s : enumerate_ideals(p).sets) CHECK(is_prime_balmer(p, s) == oracle::prime_balmer(p, s, objs));
  }
}

TEST_CASE("Matsui primality on A2") {
  const auto& p = builtin("a2").presentation;
  auto l = enumerate_thick(p);
  CHECK(is_prime_matsui(l, set_of(p, {"S1"})));
  CHECK_FALSE(is_prime_matsui(l, OrbitSet()));
  CHECK_FALSE(is_prime_matsui(l, p.all_orbits()));
}

TEST_CASE("lattice json marks primes") {
  const auto& kxk = builtin("kxk").presentation;
  auto j = lattice_json(kxk, enumerate_ideals(kxk));
  CHECK(j["nodes"].size() == 4);
  CHECK(j["nodes"][0]["prime_balmer"] == false);
  const auto& a2 = builtin("a2").presentation;
  auto ja = lattice_json(a2, enumerate_thick(a2));
  CHECK(ja["nodes"][0]["prime_balmer"].is_null());
  CHECK(lattice_dot(a2, enumerate_thick(a2)).rfind("digraph", 0) == 0);
}

}  // TEST_SUITE

TEST_SUITE("spectrum") {

TEST_CASE("spectrum point counts") {
  CHECK(compute_spectrum(builtin("k").presentation, Variant::Balmer).space.size() == 1);
  auto kxk = compute_spectrum(builtin("kxk").presentation, Variant::Balmer);
  CHECK(kxk.space.size() == 2);
  CHECK(kxk.space.is_discrete());
  CHECK(kxk.space.opens().size() == 4);
  CHECK(compute_spectrum(builtin("kxkxk").presentation, Variant::Balmer).space.opens().size() == 8);
  auto dn = compute_spectrum(builtin("dual_numbers").presentation, Variant::Balmer);
  CHECK(dn.space.size() == 1);
  auto a2 = compute_spectrum(builtin("a2").presentation, Variant::Matsui);
  CHECK(a2.space.size() == 3);
  CHECK(a2.space.is_discrete());
  CHECK(a2.space.opens().size() == 8);
  CHECK_THROWS_AS(compute_spectrum(builtin("a2").presentation, Variant::Balmer), Error);
}

TEST_CASE("support examples") {
  const auto& p = builtin("kxk").presentation;
  auto s = compute_spectrum(p, Variant::Balmer);
  PointSet z = support_Z(s.primes, {p.parse("P1")});
  REQUIRE(points_of(z).size() == 1);
  CHECK(s.primes[points_of(z)[0]] == set_of(p, {"P2"}));
  CHECK(support_Z(s.primes, {}) == s.space.full());
  CHECK(support_Z(s.primes, oracle::objects(p, 2, 0, 0)) == 0);
}

TEST_CASE("A2 supports") {
  const auto& p = builtin("a2").presentation;
  auto s = compute_spectrum(p, Variant::Matsui);
  for (const char* n : {"S1", "S2", "P1"}) CHECK(points_of(support_Z(s.primes, {p.parse(n)})).size() == 2);
}

TEST_CASE("support agrees with the direct definition") {
  std::mt19937_64 rng(17);
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui);
    for (int t = 0; t < 100; ++t) {
      auto fam = oracle::random_family(p, rng);
      CHECK(support_Z(s.primes, fam) == oracle::z(s.primes, fam));
    }
  }
}

TEST_CASE("Z identities") {
  std::mt19937_64 rng(23);
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui);
    CHECK(support_Z(s.primes, {}) == s.space.full());
    CHECK(support_Z(s.primes, {ObjectExpr()}) == 0);
    for (int t = 0; t < 100; ++t) {
      auto e1 = oracle::random_family(p, rng), e2 = oracle::random_family(p, rng), e3 = oracle::random_family(p, rng);
      std::vector<ObjectExpr> all = e1;
      all.insert(all.end(), e2.begin(), e2.end());
      all.insert(all.end(), e3.begin(), e3.end());
      CHECK((support_Z(s.primes, e1) & support_Z(s.primes, e2) & support_Z(s.primes, e3)) == support_Z(s.primes, all));
      std::vector<ObjectExpr> sums;
      for (const auto& a : e1)
        for (const auto& b : e2) sums.push_back(a + b);
      CHECK((support_Z(s.primes, e1) | support_Z(s.primes, e2)) == support_Z(s.primes, sums));
      for (const auto& a : e1)
        for (const auto& b : e2)
          CHECK(support_Z(s.primes, {a + b}) == (support_Z(s.primes, {a}) | support_Z(s.primes, {b})));
    }
  }
}

TEST_CASE("intersection form of the sum identity fails on kxk") {
  const auto& p = builtin("kxk").presentation;
  auto s = compute_spectrum(p, Variant::Balmer);
  PointSet lhs = support_Z(s.primes, {p.parse("P1")}) & support_Z(s.primes, {p.parse("P2")});
  PointSet rhs = support_Z(s.primes, {p.parse("P1 + P2")});
  CHECK(lhs == 0);
  CHECK(rhs == s.space.full());
}

TEST_CASE("topology matches exhaustive closed-set generation") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui);
    std::vector<PointSet> closed;
    for (auto u : s.space.opens()) closed.push_back(s.space.full() & ~u);
    std::sort(closed.begin(), closed.end());
    CHECK(closed == oracle::closed_sets(p, s.primes));
  }
}

TEST_CASE("minimal opens") {
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui);
    const auto& x = s.space;
    for (std::size_t i = 0; i < x.size(); ++i) {
      PointSet m = x.full();
      for (auto u : x.opens())
        if (point_in(u, i)) m &= u;
      CHECK(m == x.minimal_open(i));
      CHECK(x.is_open(m));
    }
  }
}

TEST_CASE("topology axioms are enforced") {
  CHECK_THROWS_AS(FiniteSpace::from_opens({"a", "b"}, {0, 1, 2}), Error);
  CHECK_NOTHROW(FiniteSpace::from_opens({"a", "b"}, {0, 1, 3}));
  auto sierpinski = FiniteSpace::from_opens({"a", "b"}, {0, 1, 3});
  CHECK(sierpinski.specializes(1, 0));
  CHECK_FALSE(sierpinski.specializes(0, 1));
}

TEST_CASE("spectrum json") {
  const auto& p = builtin("kxk").presentation;
  auto j = spectrum_json(p, compute_spectrum(p, Variant::Balmer));
  CHECK(j.contains("lattice"));
  CHECK(space_json(compute_spectrum(p, Variant::Balmer).space)["opens"].size() == 4);
}

}  // TEST_SUITE
