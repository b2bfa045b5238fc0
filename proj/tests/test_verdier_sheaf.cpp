#include <doctest.h>

#include <random>

#include "ttg/builtins.hpp"
#include "ttg/error.hpp"
#include "ttg/sheaf.hpp"
#include "ttg/verdier.hpp"

using namespace ttg;

namespace {

OrbitSet set_of(const Presentation& p, std::initializer_list<const char*> names) {
  OrbitSet s;
  for (auto n : names) s.insert(static_cast<std::size_t>(*p.find_orbit(n)));
  return s;
}

PointSet point_of(const Spectrum& s, OrbitSet prime) {
  for (std::size_t i = 0; i < s.primes.size(); ++i)
    if (s.primes[i] == prime) return 1ULL << i;
  FAIL("no such prime");
  return 0;
}

bool invertible(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

std::vector<FiniteSpace> test_spaces() {
  std::vector<FiniteSpace> out;
  for (const auto& name : perf_builtin_names())
    out.push_back(compute_spectrum(builtin(name).presentation, Variant::Balmer).space);
  out.push_back(compute_spectrum(builtin("a2").presentation, Variant::Matsui).space);
  out.push_back(FiniteSpace::from_opens({"a", "b"}, {0, 1, 3}));
  out.push_back(FiniteSpace::from_opens({"a", "b", "c"}, {0, 1, 3, 5, 7}));
  return out;
}

Presentation with_negative_self_ext() {
  auto doc = serialize_presentation(builtin("k").presentation);
  doc["homs"].push_back({{"src", "u"}, {"dst", "u"}, {"degree", -1}, {"basis", {"t"}}});
  doc["compositions"].push_back({{"f", "t"}, {"g", "u.u.0.0"}, {"result", {{{"basis", "t"}, {"coeff", "1"}}}}});
  doc["compositions"].push_back({{"f", "u.u.0.0"}, {"g", "t"}, {"result", {{{"basis", "t"}, {"coeff", "1"}}}}});
  return parse_presentation(doc);
}

}  // namespace

TEST_SUITE("verdier-quotient") {

TEST_CASE("intersect_primes examples") {
  const auto& p = builtin("kxk").presentation;
  auto s = compute_spectrum(p, Variant::Balmer);
  CHECK(intersect_primes(s.primes, s.space.full(), p.all_orbits()) == OrbitSet());
  CHECK(intersect_primes(s.primes, point_of(s, set_of(p, {"P2"})), p.all_orbits()) == set_of(p, {"P2"}));
  CHECK(intersect_primes(s.primes, 0, p.all_orbits()) == p.all_orbits());
}

TEST_CASE("quotient homs") {
  const auto& kxk = builtin("kxk").presentation;
  auto s = compute_spectrum(kxk, Variant::Balmer);
  auto ctx = make_context(kxk, s.primes, point_of(s, set_of(kxk, {"P2"})), RoofConfig::defaults(kxk));
  auto h = quotient_hom(ctx, kxk.unit(), kxk.unit(), 0);
  CHECK(h->dim() == 1);
  CHECK(h->stabilized);
  CHECK(quotient_hom(ctx, kxk.parse("P2"), kxk.parse("P2"), 0)->dim() == 0);
  CHECK(quotient_hom(ctx, kxk.parse("P1"), kxk.parse("P1"), 0)->dim() == 1);

  const auto& dn = builtin("dual_numbers").presentation;
  auto sd = compute_spectrum(dn, Variant::Balmer);
  auto cd = make_context(dn, sd.primes, sd.space.full(), RoofConfig::defaults(dn));
  auto hd = quotient_hom(cd, dn.unit(), dn.unit(), 0);
  CHECK(hd->dim() == 2);
  CHECK(hd->stabilized);
}

TEST_CASE("objects of the class vanish") {
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, RoofConfig::defaults(p));
    for (auto u : s.space.opens()) {
      OrbitSet cls = intersect_primes(s.primes, u, p.all_orbits());
      for (std::size_t a = 0; a < p.orbit_count(); ++a)
        if (cls.contains(a)) {
          auto x = ObjectExpr::single(static_cast<int>(a));
          CHECK(engine.hom(cls, x, x)->dim() == 0);
        }
    }
  }
}

TEST_CASE("make_context rejects non-thick classes") {
  const auto& a2 = builtin("a2").presentation;
  std::vector<OrbitSet> fake{set_of(a2, {"S1", "S2"})};
  CHECK_THROWS_AS(make_context(a2, fake, 1, RoofConfig::defaults(a2)), Error);
}

TEST_CASE("small rank bounds are reported") {
  const auto& p = builtin("kxk").presentation;
  RoofConfig cfg = RoofConfig::defaults(p);
  cfg.rank_bound = 1;
  QuotientEngine engine(p, cfg);
  bool threw = false;
  try {
    engine.end_unit(set_of(p, {"P2"}));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::RankBoundExceeded || e.kind() == ErrorKind::NotStabilized;
  }
  CHECK(threw);
}

TEST_CASE("end_unit examples") {
  const auto& kxk = builtin("kxk").presentation;
  QuotientEngine ek(kxk, RoofConfig::defaults(kxk));
  auto whole = ek.end_unit(OrbitSet());
  CHECK(whole.degree0.dim() == 2);
  CHECK(find_isomorphism(whole.degree0, builtin_algebra("kxk", kxk.field())).map.has_value());
  CHECK(ek.end_unit(set_of(kxk, {"P1"})).degree0.dim() == 1);

  const auto& dn = builtin("dual_numbers").presentation;
  QuotientEngine ed(dn, RoofConfig::defaults(dn));
  auto r = ed.end_unit(OrbitSet());
  REQUIRE(r.degree0.dim() == 2);
  CHECK(local_signature(r.degree0).loewy == std::vector<std::size_t>{1});
  for (const auto& [d, n] : r.dims)
    if (d != 0) CHECK(n == 0);
}

TEST_CASE("end_unit rings are commutative and restrictions are unital") {
  for (const auto& name : perf_builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, RoofConfig::defaults(p));
    for (auto u : s.space.opens()) {
      OrbitSet cu = intersect_primes(s.primes, u, p.all_orbits());
      auto ru = engine.end_unit(cu);
      CHECK_NOTHROW(ru.degree0.validate());
      for (auto v : s.space.opens()) {
        if ((v & ~u) != 0) continue;
        OrbitSet cv = intersect_primes(s.primes, v, p.all_orbits());
        CHECK(is_unital_hom(ru.degree0, engine.end_unit(cv).degree0, engine.unit_restriction(cu, cv)));
      }
    }
  }
}

TEST_CASE("roof composition with identities") {
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, RoofConfig::defaults(p));
    for (auto u : s.space.opens()) {
      OrbitSet cls = intersect_primes(s.primes, u, p.all_orbits());
      auto h = engine.hom(cls, p.unit(), p.unit());
      Roof id{h->system().identity_index(), Morphism::identity(p, p.unit().slots())};
      for (const Roof& a : h->basis()) {
        CHECK(h->coords(engine.compose(cls, p.unit(), p.unit(), id, a)) == h->coords(a));
        CHECK(h->coords(engine.compose(cls, p.unit(), p.unit(), a, id)) == h->coords(a));
      }
    }
  }
}

TEST_CASE("rank bound environment override") {
  setenv("TTG_RANK_BOUND", "3", 1);
  CHECK(RoofConfig::defaults(builtin("k").presentation).rank_bound == 3);
  unsetenv("TTG_RANK_BOUND");
  CHECK(RoofConfig::defaults(builtin("k").presentation).rank_bound == kDefaultRankBound);
}

}  // TEST_SUITE

TEST_SUITE("finite-sheaf") {

TEST_CASE("discrete products") {
  auto x = FiniteSpace::from_opens({"a", "b"}, {0, 1, 2, 3});
  Presheaf f(x, Field(2), 0, 0);
  f.set_dim(1, 0, 1);
  f.set_dim(2, 0, 1);
  auto s = sheafify(f);
  CHECK(s.sheaf.dim(3, 0) == 2);
  CHECK(s.sheaf.dim(1, 0) == 1);
  CHECK_FALSE(check_descent(f).empty());
  CHECK(check_descent(s.sheaf).empty());
}

TEST_CASE("constant presheaf on the A2 space") {
  auto x = compute_spectrum(builtin("a2").presentation, Variant::Matsui).space;
  auto f = constant_presheaf(x, Field(2), 1);
  CHECK_FALSE(check_descent(f).empty());
  auto s = sheafify(f);
  CHECK(s.sheaf.dim(x.full(), 0) == 3);
}

TEST_CASE("functoriality is enforced") {
  auto x = FiniteSpace::from_opens({"a", "b"}, {0, 1, 3});
  Field k(2);
  Presheaf f(x, k, 0, 0);
  f.set_dim(1, 0, 1);
  f.set_dim(3, 0, 1);
  CHECK_NOTHROW(check_functorial(f));
  auto y = FiniteSpace::from_opens({"a", "b", "c"}, {0, 1, 3, 7});
  Presheaf g(y, k, 0, 0);
  for (PointSet u : {1ULL, 3ULL, 7ULL}) g.set_dim(u, 0, 1);
  g.set_restriction(7, 3, 0, Matrix::identity(k, 1));
  g.set_restriction(3, 1, 0, Matrix::identity(k, 1));
  g.set_restriction(7, 1, 0, Matrix(k, 1, 1));
  CHECK_THROWS_AS(check_functorial(g), Error);
}

TEST_CASE("sheafification is idempotent and preserves stalks") {
  std::mt19937_64 rng(1234);
  for (const auto& x : test_spaces()) {
    for (int t = 0; t < 50; ++t) {
      auto f = random_presheaf(x, Field(t % 2 ? 3 : 2), rng, 0, t % 3 == 0 ? 1 : 0);
      CHECK_NOTHROW(check_functorial(f));
      auto s = sheafify(f);
      CHECK(check_descent(s.sheaf).empty());
      for (int d = f.degree_lo(); d <= f.degree_hi(); ++d) {
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(invertible(s.canonical.at({x.minimal_open(i), d})));
        for (auto u : x.opens())
          for (auto v : x.opens())
            if ((v & ~u) == 0)
              CHECK(s.canonical.at({v, d}) * f.restriction(u, v, d) ==
                    s.sheaf.restriction(u, v, d) * s.canonical.at({u, d}));
      }
      auto ss = sheafify(s.sheaf);
      for (int d = f.degree_lo(); d <= f.degree_hi(); ++d)
        for (auto u : x.opens()) {
          CHECK(ss.sheaf.dim(u, d) == s.sheaf.dim(u, d));
          CHECK(invertible(ss.canonical.at({u, d})));
        }
    }
  }
}

TEST_CASE("structure sheaves") {
  const auto& kxk = builtin("kxk").presentation;
  auto s = compute_spectrum(kxk, Variant::Balmer);
  QuotientEngine engine(kxk, RoofConfig::defaults(kxk));
  auto o = structure_sheaf(engine, s);
  CHECK(o.sheaf.sheaf.ring(s.space.full()).dim() == 2);
  CHECK(o.sheaf.sheaf.ring(1).dim() == 1);
  CHECK(o.sheaf.sheaf.ring(2).dim() == 1);
  CHECK(o.sheaf.sheaf.ring(0).dim() == 0);
  for (const auto& name : {"k", "dual_numbers"}) {
    const auto& p = builtin(name).presentation;
    auto sp = compute_spectrum(p, Variant::Balmer);
    QuotientEngine e(p, RoofConfig::defaults(p));
    auto op = structure_sheaf(e, sp);
    CHECK(op.sheaf.sheaf.ring(1).dim() == builtin(name).model->ring().dim());
  }
  auto j = sheaf_json(o.sheaf.sheaf);
  CHECK(j["sections"].size() == 4);
}

TEST_CASE("classicality") {
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, RoofConfig::defaults(p));
    CHECK(check_classical(engine, s, -4, 4).ok);
  }
  auto p = with_negative_self_ext();
  CHECK(validate(p).ok());
  auto s = compute_spectrum(p, Variant::Balmer);
  QuotientEngine engine(p, RoofConfig::defaults(p));
  auto rep = check_classical(engine, s, -2, 2);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violations.front().degree == -1);
  CHECK(rep.violations.front().open == s.space.full());
}

}  // TEST_SUITE
