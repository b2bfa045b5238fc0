#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ttg/builtins.hpp"
#include "ttg/error.hpp"
#include "ttg/linalg.hpp"
#include "ttg/presentation.hpp"

using namespace ttg;

namespace {

Matrix random_matrix(Field f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-3, 3);
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(v(rng));
  return m;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Unsupported;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("prime field arithmetic") {
  Field f(7);
  CHECK(f.from_int(3) * f.from_int(5) == f.from_int(1));
  CHECK(f.from_int(-1) == f.from_int(6));
  CHECK(f.from_int(3).inverse() == f.from_int(5));
  CHECK(f.parse("1/2") == f.from_int(4));
  CHECK_THROWS_AS(f.zero().inverse(), Error);
  CHECK_THROWS_AS(Field(4), Error);
}

TEST_CASE("rational arithmetic") {
  Field q(0);
  CHECK(q.parse("1/3") + q.parse("2/3") == q.one());
  CHECK(q.parse("-4/6") == q.parse("-2/3"));
  CHECK(q.parse("7").to_string() == "7");
  CHECK(q.parse("3/9").to_string() == "1/3");
}

TEST_CASE("mixing fields throws") {
  CHECK_THROWS_AS(Field(2).one() + Field(3).one(), Error);
}

TEST_CASE("rank-nullity and inverses on random matrices") {
  std::mt19937_64 rng(11);
  for (auto ch : {2u, 3u, 0u}) {
    Field f(ch);
    for (int t = 0; t < 40; ++t) {
      std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
      Matrix m = random_matrix(f, r, c, rng);
      auto ker = kernel_basis(m);
      CHECK(rank(m) + ker.size() == c);
      for (const auto& v : ker) CHECK(is_zero(m * v));
      if (r == c) {
        auto inv = inverse(m);
        CHECK(inv.has_value() == (rank(m) == r));
        if (inv) CHECK(*inv * m == Matrix::identity(f, r));
      }
      Vec b = m * random_matrix(f, c, 1, rng).column(0);
      auto x = solve(m, b);
      REQUIRE(x.has_value());
      CHECK(m * *x == b);
    }
  }
}

TEST_CASE("empty inverse") {
  auto inv = inverse(Matrix(Field(2), 0, 0));
  REQUIRE(inv.has_value());
  CHECK(inv->rows() == 0);
}

TEST_CASE("subspace reducer") {
  Field f(3);
  SubspaceReducer r(f, 3, {Vec{f.one(), f.one(), f.zero()}});
  CHECK(r.quotient_dim() == 2);
  CHECK(r.contains(Vec{f.from_int(2), f.from_int(2), f.zero()}));
  CHECK_FALSE(r.contains(Vec{f.one(), f.zero(), f.zero()}));
}

TEST_CASE("object expression grammar") {
  std::vector<std::string> names{"A", "B"};
  auto e = parse_object_expr(" 2*A[1] + B + A ", names);
  CHECK(format_object_expr(e, names) == "A + 2*A[1] + B");
  CHECK(e.rank() == 4);
  CHECK(parse_object_expr("0", names).is_zero());
  CHECK(parse_object_expr("A[-2]", names).shifted(2) == parse_object_expr("A", names));
  CHECK_THROWS_AS(parse_object_expr("C", names), Error);
  CHECK_THROWS_AS(parse_object_expr("A +", names), Error);
  CHECK_THROWS_AS(parse_object_expr("A[x]", names), Error);
  AliasMap al{{"both", parse_object_expr("A + B", names)}};
  CHECK(parse_object_expr("both[1]", names, &al) == parse_object_expr("A[1] + B[1]", names));
}

TEST_CASE("kxk document parses to two orbits") {
  const auto& p = builtin("kxk").presentation;
  CHECK(p.orbit_count() == 2);
  CHECK(validate(p).ok());
  CHECK(hom_dim(p, p.parse("P1 + P2"), p.parse("P1 + P2"), 0) == 2);
  CHECK(tensor(p, p.parse("P1"), p.parse("P2")).is_zero());
}

TEST_CASE("terminal presentation") {
  auto p = parse_presentation_text(R"({"field":{"characteristic":2},"orbits":["u"],"hom_window":[-2,2],
    "homs":[{"src":"u","dst":"u","degree":0,"basis":["id"]}],
    "compositions":[{"f":"id","g":"id","result":[{"basis":"id","coeff":"1"}]}],
    "triangles":[],"tensor":{"unit":"u","products":[{"a":"u","b":"u","result":"u"}]},"metadata":{}})");
  CHECK(validate(p).ok());
  CHECK(p.identity(0).has_value());
  CHECK(hom_dim(p, p.parse("u"), p.parse("u[1]"), -1) == 1);
  CHECK(hom_dim(p, p.parse("u"), p.parse("u[1]"), 1) == 0);
}

TEST_CASE("parse errors") {
  CHECK(kind_of([] {
          parse_presentation_text(R"({"field":{"characteristic":2},"orbits":["u"],"hom_window":[-2,2],
            "homs":[{"src":"u","dst":"u","degree":7,"basis":["x"]}],"compositions":[],"triangles":[],"metadata":{}})");
        }) == ErrorKind::DegreeOutOfWindow);
  CHECK(kind_of([] {
          parse_presentation_text(R"({"field":{"characteristic":2},"orbits":["u","u"],"hom_window":[-2,2],
            "homs":[],"compositions":[],"triangles":[],"metadata":{}})");
        }) == ErrorKind::DuplicateName);
  CHECK(kind_of([] { parse_presentation_text("{"); }) == ErrorKind::Schema);
  CHECK(kind_of([] { parse_presentation_text(R"({"orbits":["u"]})"); }) == ErrorKind::Schema);
  CHECK(kind_of([] { load_presentation("/nonexistent/p.json"); }) == ErrorKind::Schema);
}

TEST_CASE("unit axiom violation is reported") {
  auto doc = serialize_presentation(builtin("kxk").presentation);
  doc["tensor"]["unit"] = "P1";
  auto rep = validate(parse_presentation(doc));
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == "unit" && v.detail.find("P2") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("non-associative constant is reported with its triple") {
  auto p = load_presentation(TTG_TEST_DATA "/broken.json");
  auto rep = validate(p);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().kind == "associativity");
  CHECK(rep.violations.front().detail.find(" o ") != std::string::npos);
}

TEST_CASE("builtins validate") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    CHECK(validate(builtin(name).presentation).ok());
  }
  CHECK(validate(builtin("dual_numbers", 3).presentation).ok());
  CHECK(validate(builtin("kxk", 0).presentation).ok());
  CHECK_THROWS_AS(builtin("nope"), Error);
}

TEST_CASE("hom_dim examples") {
  const auto& a2 = builtin("a2").presentation;
  CHECK(hom_dim(a2, a2.parse("S1"), a2.parse("S2"), 1) == 1);
  CHECK(hom_dim(a2, a2.parse("S2"), a2.parse("S1"), 1) == 0);
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    CHECK(hom_dim(p, ObjectExpr(), ObjectExpr::single(0), 0) == 0);
  }
  const auto& dn = builtin("dual_numbers").presentation;
  CHECK(hom_dim(dn, dn.parse("R"), dn.parse("R"), 0) == 2);
  CHECK(tensor(dn, dn.parse("R"), dn.parse("R[3]")) == dn.parse("R[3]"));
}

TEST_CASE("hom_dim is additive and shift invariant") {
  std::mt19937_64 rng(5);
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    for (int t = 0; t < 60; ++t) {
      auto x = oracle::random_object(p, rng, 2, 1), y = oracle::random_object(p, rng, 2, 1),
           z = oracle::random_object(p, rng, 2, 1);
      for (int d = -1; d <= 1; ++d) {
        CHECK(hom_dim(p, x + y, z, d) == hom_dim(p, x, z, d) + hom_dim(p, y, z, d));
        CHECK(hom_dim(p, x.shifted(1), z.shifted(1), d) == hom_dim(p, x, z, d));
        CHECK(hom_dim(p, x, z.shifted(1), d) == hom_dim(p, x, z, d + 1));
      }
    }
  }
}

TEST_CASE("tensor is symmetric and associative on rank <= 3") {
  std::mt19937_64 rng(9);
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    for (int t = 0; t < 80; ++t) {
      auto x = oracle::random_object(p, rng), y = oracle::random_object(p, rng), z = oracle::random_object(p, rng);
      CHECK(tensor(p, x, y) == tensor(p, y, x));
      CHECK(tensor(p, tensor(p, x, y), z) == tensor(p, x, tensor(p, y, z)));
      CHECK(tensor(p, p.unit(), x) == x);
    }
  }
  const auto& a2 = builtin("a2").presentation;
  CHECK_THROWS_AS(tensor(a2, a2.parse("S1"), a2.parse("S2")), Error);
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto& p = builtin(name).presentation;
    auto doc = serialize_presentation(p);
    auto q = parse_presentation(doc);
    CHECK(serialize_presentation(q) == doc);
    CHECK(q.orbits() == p.orbits());
    CHECK(q.basis().size() == p.basis().size());
  }
}

}  // TEST_SUITE
