#include <doctest.h>

#include <map>

#include "ttg/builtins.hpp"
#include "ttg/canonical_functor.hpp"
#include "ttg/error.hpp"

using namespace ttg;

namespace {

struct Setup {
  const Builtin& b;
  Spectrum spec;
  QuotientEngine engine;
  StructureSheaf o;
  explicit Setup(const std::string& name)
      : b(builtin(name)),
        spec(compute_spectrum(b.presentation, Variant::Balmer)),
        engine(b.presentation, RoofConfig::defaults(b.presentation)),
        o(structure_sheaf(engine, spec)) {}
  FunctorImage m(const std::string& expr) const {
    return m_object(engine, spec, o, b.presentation.parse(expr, &b.aliases));
  }
  FunctorImage m(const ObjectExpr& e) const { return m_object(engine, spec, o, e); }
};

PointSet point_named(const FiniteSpace& x, const std::string& label) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.labels()[i] == label) return 1ULL << i;
  FAIL("no point " << label);
  return 0;
}

bool has_kind(const Report& r, const std::string& prefix) {
  for (const auto& c : r.records)
    if (c.kind.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_SUITE("canonical-functor") {

TEST_CASE("unit law on every builtin") {
  for (const auto& name : perf_builtin_names()) {
    CAPTURE(name);
    Setup s(name);
    auto rep = unit_law_check(s.engine, s.spec, s.o);
    CHECK(rep.pass());
    CHECK_FALSE(rep.records.empty());
  }
}

TEST_CASE("stalks of cone(x)") {
  Setup s("dual_numbers");
  auto img = s.m("cone_x");
  CHECK_FALSE(img.provisional());
  const auto& m = img.module.sheaf;
  for (int d = m.degree_lo(); d <= m.degree_hi(); ++d)
    CHECK(m.dim(s.spec.space.minimal_open(0), d) == (d == -1 || d == 0 ? 1u : 0u));
}

TEST_CASE("P1 survives only where P2 is killed") {
  Setup s("kxk");
  auto img = s.m("P1");
  const auto& m = img.module.sheaf;
  const auto& x = s.spec.space;
  CHECK(m.dim(x.full(), 0) == 1);
  CHECK(m.dim(point_named(x, "<P2>"), 0) == 1);
  CHECK(m.dim(point_named(x, "<P1>"), 0) == 0);
}

TEST_CASE("the zero object") {
  Setup s("kxk");
  auto img = s.m("0");
  for (auto u : s.spec.space.opens())
    for (int d = img.module.sheaf.degree_lo(); d <= img.module.sheaf.degree_hi(); ++d) CHECK(img.module.sheaf.dim(u, d) == 0);
}

TEST_CASE("additivity, shift equivariance and the triangle Euler relation") {
  for (const auto& name : perf_builtin_names()) {
    CAPTURE(name);
    Setup s(name);
    const auto& p = s.b.presentation;
    std::map<ObjectExpr, FunctorImage> cache;
    auto image = [&](const ObjectExpr& e) -> const Presheaf& {
      auto it = cache.find(e);
      if (it == cache.end()) it = cache.emplace(e, s.m(e)).first;
      return it->second.module.sheaf;
    };
    const int lo = s.engine.config().degree_lo, hi = s.engine.config().degree_hi;
    std::vector<ObjectExpr> objs;
    for (std::size_t a = 0; a < p.orbit_count(); ++a) objs.push_back(ObjectExpr::single(static_cast<int>(a)));
    for (const auto& x : objs)
      for (const auto& y : objs) {
        const auto& mx = image(x);
        const auto& my = image(y);
        const auto& mxy = image(x + y);
        const auto& mx1 = image(x.shifted(1));
        for (auto u : s.spec.space.opens())
          for (int d = lo; d <= hi; ++d) {
            CHECK(mxy.dim(u, d) == mx.dim(u, d) + my.dim(u, d));
            if (d + 1 <= hi) CHECK(mx1.dim(u, d) == mx.dim(u, d + 1));
          }
      }
    for (const auto& t : p.triangles()) {
      const auto& mx = image(t.x);
      const auto& my = image(t.y);
      const auto& mz = image(t.z);
      for (auto u : s.spec.space.opens()) {
        long long chi = 0;
        for (int d = lo; d <= hi; ++d)
          chi += (d % 2 == 0 ? 1 : -1) * (static_cast<long long>(mx.dim(u, d)) - static_cast<long long>(my.dim(u, d)) +
                                          static_cast<long long>(mz.dim(u, d)));
        CHECK(chi == 0);
      }
    }
  }
}

TEST_CASE("reconstruction checks pass") {
  for (const auto& name : perf_builtin_names()) {
    CAPTURE(name);
    auto rep = reconstruction_check(name);
    CHECK(rep.pass());
    CHECK(has_kind(rep, "points"));
    CHECK(has_kind(rep, "homeomorphism"));
    CHECK(has_kind(rep, "section_ring"));
    CHECK(has_kind(rep, "stalk:"));
    for (const auto& c : rep.records)
      if (!c.pass) FAIL_CHECK(c.kind << " degree " << c.degree << ": " << c.lhs << " vs " << c.rhs);
  }
  CHECK(reconstruction_check("dual_numbers", 3).pass());
  CHECK_THROWS_AS(reconstruction_check("a2"), Error);
}

TEST_CASE("report json shape") {
  Report r;
  r.add("x", {"<a>"}, 1, 2, 2);
  r.add("y", {}, 0, 1, 0);
  auto j = r.json();
  CHECK(j["pass"] == false);
  CHECK(j["records"][0]["lhs_dim"] == 2);
  CHECK(j["records"][0]["rhs_dim"] == 2);
  CHECK(j["records"][1]["pass"] == false);
  CHECK(r.failures() == 1);
}

TEST_CASE("functor recovery on relabeled kxk") {
  const auto& kxk = builtin("kxk").presentation;
  EquivalenceData f{{1, 0}, {1, 1}};
  auto src = relabel_presentation(kxk, {"Q1", "Q2"}, f);
  CHECK(validate(src).ok());
  CHECK_FALSE(src.has_tensor());
  CHECK_NOTHROW(check_equivalence(src, kxk, f));
  auto rep = functor_recovery_check(src, f, "kxk");
  CHECK(rep.pass());
  EquivalenceData bad{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(functor_recovery_check(src, bad, "kxk"), Error);
}

TEST_CASE("identity equivalence on k") {
  const auto& k = builtin("k").presentation;
  EquivalenceData id{{0}, {0}};
  auto src = relabel_presentation(k, {"v"}, id);
  CHECK(functor_recovery_check(src, id, "k").pass());
}

TEST_CASE("wrong shift is rejected naming the hom entry") {
  const auto& dn = builtin("dual_numbers").presentation;
  EquivalenceData g{{0, 1}, {0, 0}};
  auto src = relabel_presentation(dn, {"A", "B"}, g);
  CHECK(functor_recovery_check(src, g, "dual_numbers").pass());
  EquivalenceData bad{{0, 1}, {0, 1}};
  try {
    check_equivalence(src, dn, bad);
    FAIL("accepted a wrong shift");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidEquivalence);
    CHECK(std::string(e.what()).find("Hom^") != std::string::npos);
  }
}

TEST_CASE("equivalence documents") {
  const auto& kxk = builtin("kxk").presentation;
  EquivalenceData f{{1, 0}, {1, 1}};
  auto src = relabel_presentation(kxk, {"Q1", "Q2"}, f);
  auto doc = nlohmann::json::parse(R"({"target":"kxk","orbit_map":{"Q1":"P2","Q2":"P1"},"shift":{"Q1":1,"Q2":1}})");
  auto g = parse_equivalence(doc, src, kxk);
  CHECK(g.orbit_map == f.orbit_map);
  CHECK(g.shift == f.shift);
  CHECK(apply_equivalence(g, src.parse("Q1 + Q2[2]")) == kxk.parse("P2[1] + P1[3]"));
  CHECK_THROWS_AS(parse_equivalence(nlohmann::json::parse(R"({"orbit_map":{"Q9":"P1"}})"), src, kxk), Error);
}

TEST_CASE("functor image json") {
  Setup s("dual_numbers");
  auto j = functor_image_json(s.b.presentation, s.m("cone_x"));
  CHECK(j["object"] == "C");
  CHECK(j["provisional"] == false);
  CHECK(j.contains("stalks"));
}

}  // TEST_SUITE
