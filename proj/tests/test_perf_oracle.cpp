#include <doctest.h>

#include <random>

#include "ttg/builtins.hpp"
#include "ttg/chain_model.hpp"
#include "ttg/comm_algebra.hpp"
#include "ttg/error.hpp"
#include "ttg/perf_oracle.hpp"

using namespace ttg;

namespace {

ChainMap multiplication(const CommAlgebra& r, const Vec& a) {
  ChainMap f;
  f.comps[0] = RMatrix::scalar(r, 1, a);
  return f;
}

long long euler(const CommAlgebra& r, const ProjComplex& w, const ProjComplex& e) {
  long long s = 0;
  for (int d = -8; d <= 8; ++d) s += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(chain_hom_dim(r, w, e, d));
  return s;
}

}  // namespace

TEST_SUITE("perf-oracle") {

TEST_CASE("spec_ring examples") {
  Field f(2);
  auto kxk = spec_ring(builtin_algebra("kxk", f));
  CHECK(kxk.space.size() == 2);
  CHECK(kxk.space.is_discrete());
  CHECK(kxk.sections(kxk.space.full()).algebra.dim() == 2);
  CHECK(kxk.sections(1).algebra.dim() == 1);
  CHECK(kxk.sections(0).algebra.dim() == 0);
  auto dn = spec_ring(builtin_algebra("dual_numbers", f));
  CHECK(dn.space.size() == 1);
  CHECK(dn.sections(1).algebra.dim() == 2);
  CHECK(spec_ring(builtin_algebra("k", f)).space.size() == 1);
  CHECK(spec_ring(builtin_algebra("kxkxk", f)).space.opens().size() == 8);
}

TEST_CASE("chain_hom of the unit") {
  for (const auto& name : perf_builtin_names()) {
    const auto& r = builtin(name).model->ring();
    auto one = unit_complex(r);
    CHECK(chain_hom_dim(r, one, one, 0) == r.dim());
    CHECK(chain_hom_dim(r, one, one, 1) == 0);
  }
}

TEST_CASE("cone of x over the dual numbers") {
  const auto& m = *builtin("dual_numbers").model;
  const auto& r = m.ring();
  auto one = unit_complex(r);
  auto c = m.orbits()[1].complex;
  c.validate(r);
  CHECK(chain_hom_dim(r, one, c, 0) == 1);
  CHECK(chain_hom_dim(r, one, c, -1) == 1);
  for (int d : {-3, -2, 1, 2}) CHECK(chain_hom_dim(r, one, c, d) == 0);
}

TEST_CASE("shift adjunction") {
  for (const auto& name : perf_builtin_names()) {
    const auto& m = *builtin(name).model;
    const auto& r = m.ring();
    for (const auto& o : m.orbits())
      for (int d = -2; d <= 2; ++d)
        CHECK(chain_hom_dim(r, o.complex, shift(r, o.complex, 1), d) == chain_hom_dim(r, o.complex, o.complex, d + 1));
  }
}

TEST_CASE("cone of an identity is contractible") {
  for (const auto& name : perf_builtin_names()) {
    const auto& r = builtin(name).model->ring();
    auto one = unit_complex(r);
    auto c = cone(r, one, one, identity_map(r, one));
    CHECK(is_acyclic(r, c));
    for (int d = -2; d <= 2; ++d) CHECK(chain_hom_dim(r, one, c, d) == 0);
  }
}

TEST_CASE("orthogonal projectives tensor to zero") {
  const auto& m = *builtin("kxk").model;
  const auto& r = m.ring();
  CHECK(is_acyclic(r, tensor_complex(r, m.orbits()[0].complex, m.orbits()[1].complex)));
  CHECK_FALSE(is_acyclic(r, tensor_complex(r, m.orbits()[0].complex, m.orbits()[0].complex)));
}

TEST_CASE("tensor with the unit is an equivalence") {
  for (const auto& name : perf_builtin_names()) {
    const auto& m = *builtin(name).model;
    const auto& r = m.ring();
    for (const auto& o : m.orbits())
      CHECK(find_equivalence(r, tensor_complex(r, unit_complex(r), o.complex), o.complex).has_value());
  }
}

TEST_CASE("chain_hom is homotopy invariant") {
  std::mt19937_64 rng(41);
  for (const auto& name : perf_builtin_names()) {
    const auto& m = *builtin(name).model;
    const auto& r = m.ring();
    auto one = unit_complex(r);
    auto junk = cone(r, one, one, identity_map(r, one));
    for (const auto& o : m.orbits()) {
      auto padded = direct_sum(r, o.complex, shift(r, junk, static_cast<int>(rng() % 3) - 1));
      CHECK(find_equivalence(r, o.complex, padded).has_value());
      for (const auto& w : m.orbits())
        for (int d = -2; d <= 2; ++d)
          CHECK(chain_hom_dim(r, w.complex, padded, d) == chain_hom_dim(r, w.complex, o.complex, d));
    }
  }
}

TEST_CASE("Euler characteristic is additive on cones") {
  std::mt19937_64 rng(43);
  for (const auto& name : perf_builtin_names()) {
    const auto& m = *builtin(name).model;
    const auto& r = m.ring();
    auto one = unit_complex(r);
    for (int t = 0; t < 10; ++t) {
      Vec a = r.zero();
      for (auto& c : a) c = random_scalar(r.field(), rng);
      auto c = cone(r, one, one, multiplication(r, a));
      c.validate(r);
      for (const auto& w : m.orbits()) CHECK(euler(r, w.complex, one) - euler(r, w.complex, one) + euler(r, w.complex, c) == 0);
    }
  }
}

TEST_CASE("cone maps are chain maps") {
  const auto& r = builtin("dual_numbers").model->ring();
  auto one = unit_complex(r);
  auto c = cone(r, one, one, multiplication(r, r.basis(1)));
  CHECK(is_chain_map(r, one, c, cone_inclusion(r, one, one)));
  CHECK(is_chain_map(r, c, shift(r, one, 1), cone_projection(r, one, one)));
  CHECK(find_equivalence(r, c, builtin("dual_numbers").model->orbits()[1].complex).has_value());
}

TEST_CASE("algebra isomorphisms") {
  Field f(2);
  auto kxk = builtin_algebra("kxk", f);
  auto iso = find_isomorphism(kxk, kxk);
  REQUIRE(iso.map.has_value());
  CHECK(is_unital_hom(kxk, kxk, *iso.map));
  CHECK_FALSE(find_isomorphism(kxk, builtin_algebra("dual_numbers", f)).map.has_value());
  auto dn = builtin_algebra("dual_numbers", f);
  CHECK(local_signature(dn).loewy == std::vector<std::size_t>{1});
  CHECK(primitive_idempotents(builtin_algebra("kxkxk", f)).size() == 3);
}

}  // TEST_SUITE
