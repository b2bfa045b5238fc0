#include "ttg/builtins.hpp"

#include <map>
#include <mutex>

#include "ttg/error.hpp"

namespace ttg {

namespace {

CommAlgebra product_of_fields(Field f, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n, zeros(f, n)));
  for (std::size_t i = 0; i < n; ++i) mult[i][i] = unit_vector(f, n, i);
  Vec unit(n, f.one());
  return CommAlgebra(f, std::move(names), std::move(mult), std::move(unit));
}

CommAlgebra dual_numbers(Field f) {
  std::vector<std::vector<Vec>> mult = {{unit_vector(f, 2, 0), unit_vector(f, 2, 1)},
                                        {unit_vector(f, 2, 1), zeros(f, 2)}};
  return CommAlgebra(f, {"1", "x"}, std::move(mult), unit_vector(f, 2, 0));
}

RMatrix one_by_one(const Vec& a) { return RMatrix{1, 1, {a}}; }

ChainMap scalar_map(const Vec& a) {
  ChainMap m;
  m.comps[0] = one_by_one(a);
  return m;
}

nlohmann::json describe(const std::string& name, const std::string& text) {
  return {{"name", name}, {"description", text}};
}

Builtin make_product(std::size_t n, Field f) {
  CommAlgebra r = product_of_fields(f, n);
  std::vector<OrbitModel> orbits;
  for (std::size_t i = 0; i < n; ++i)
    orbits.push_back({n == 1 ? "u" : "P" + std::to_string(i + 1), module_complex(r, one_by_one(r.basis(i)))});
  auto model = std::make_shared<ChainModel>(r, orbits, -2, 2);

  Builtin b;
  std::vector<TriangleSpec> tris;
  SlotList unit_slots;
  for (std::size_t i = 0; i < n; ++i) unit_slots.push_back({static_cast<int>(i), 0});
  ObjectExpr unit = ObjectExpr::from_slots(unit_slots);
  if (n > 1) {
    // Split triangles P_i -> unit -> (sum of the other P_j).
    for (std::size_t i = 0; i < n; ++i) {
      SlotList rest;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) rest.push_back({static_cast<int>(j), 0});
      TriangleSpec t;
      t.x = ObjectExpr::single(static_cast<int>(i));
      t.y = unit;
      t.z = ObjectExpr::from_slots(rest);
      t.f = model->assemble(t.x.slots(), unit_slots, {{i, 0, identity_map(r, orbits[i].complex)}});
      tris.push_back(std::move(t));
    }
  }
  const std::string name = n == 1 ? "k" : n == 2 ? "kxk" : "kxkxk";
  b.name = name;
  b.presentation = emit_presentation(*model, tris, true,
                                     describe(name, "Perf of the product of " + std::to_string(n) +
                                                        " copies of the base field; orbits are the indecomposable projectives"));
  b.model = model;
  b.aliases["unit"] = unit;
  auto unit_chain = [](const ChainModel& m) { return unit_complex(m.ring()); };
  auto cone_of = [](Vec e) {
    return [e](const ChainModel& m) {
      const auto& r = m.ring();
      ProjComplex u = unit_complex(r);
      return cone(r, u, u, scalar_map(e));
    };
  };
  auto orbit_chain = [](std::size_t i, int s) {
    return [i, s](const ChainModel& m) { return shift(m.ring(), m.orbits()[i].complex, s); };
  };
  if (n == 1) {
    b.test_set = {{"unit", "u", unit_chain},
                  {"u[1]", "u[1]", orbit_chain(0, 1)},
                  {"u + u[-1]", "u + u[-1]",
                   [](const ChainModel& m) {
                     const auto& r = m.ring();
                     return direct_sum(r, m.orbits()[0].complex, shift(r, m.orbits()[0].complex, -1));
                   }},
                  {"cone(0)", "u + u[1]", cone_of(r.zero())}};
  } else if (n == 2) {
    b.aliases["cone_e1"] = b.presentation.parse("P2 + P2[1]");
    b.test_set = {{"unit", "unit", unit_chain},
                  {"P1", "P1", orbit_chain(0, 0)},
                  {"P2", "P2", orbit_chain(1, 0)},
                  {"cone(e1)", "cone_e1", cone_of(r.basis(0))}};
  } else {
    b.aliases["cone_e12"] = b.presentation.parse("P3 + P3[1]");
    b.test_set = {{"unit", "unit", unit_chain},
                  {"P1", "P1", orbit_chain(0, 0)},
                  {"P2 + P3[1]", "P2 + P3[1]",
                   [](const ChainModel& m) {
                     const auto& r = m.ring();
                     return direct_sum(r, m.orbits()[1].complex, shift(r, m.orbits()[2].complex, 1));
                   }},
                  {"cone(e1+e2)", "cone_e12", cone_of(r.basis(0) + r.basis(1))}};
  }
  return b;
}

Builtin make_dual_numbers(Field f) {
  CommAlgebra r = dual_numbers(f);
  ProjComplex rc = unit_complex(r);
  ProjComplex c = cone(r, rc, rc, scalar_map(r.basis(1)));
  std::vector<OrbitModel> orbits{{"R", rc}, {"C", c}};
  auto model = std::make_shared<ChainModel>(r, orbits, -2, 2);

  std::vector<TriangleSpec> tris;
  TriangleSpec t1;
  t1.x = ObjectExpr::single(0);
  t1.y = ObjectExpr::single(0);
  t1.z = ObjectExpr::single(1);
  t1.f = scalar_map(r.basis(1));
  tris.push_back(t1);
  // C[-1] -> C along the generator of Hom^1(C, C); its cone splits as R + R[1].
  TriangleSpec t2;
  t2.x = ObjectExpr::single(1, -1);
  t2.y = ObjectExpr::single(1);
  t2.z = ObjectExpr(std::vector<ObjectExpr::Term>{{0, 0, 1}, {0, 1, 1}});
  {
    const auto& h = model->hom_complex(1, 1);
    const auto& hom = model->homology(1, 1, 1);
    if (hom.dim() != 1) throw Error(ErrorKind::Arithmetic, "unexpected Hom^1(C, C)");
    t2.f = model->assemble(t2.x.slots(), t2.y.slots(), {{0, 0, h.from_coords(1, hom.reps()[0])}});
  }
  tris.push_back(t2);

  Builtin b;
  b.name = "dual_numbers";
  b.presentation = emit_presentation(*model, tris, true,
                                     describe("dual_numbers", "Perf of k[x]/(x^2); orbits R and C = cone(x: R -> R)"));
  b.model = model;
  b.aliases["unit"] = ObjectExpr::single(0);
  b.aliases["cone_x"] = ObjectExpr::single(1);
  b.test_set = {
      {"unit", "R", [](const ChainModel& m) { return unit_complex(m.ring()); }},
      {"cone(x)", "cone_x",
       [](const ChainModel& m) {
         const auto& r = m.ring();
         ProjComplex u = unit_complex(r);
         return cone(r, u, u, scalar_map(r.basis(1)));
       }},
      {"R + C[-1]", "R + C[-1]",
       [](const ChainModel& m) {
         const auto& r = m.ring();
         return direct_sum(r, m.orbits()[0].complex, shift(r, m.orbits()[1].complex, -1));
       }},
      {"cone(0)", "R + R[1]",
       [](const ChainModel& m) {
         const auto& r = m.ring();
         ProjComplex u = unit_complex(r);
         return cone(r, u, u, scalar_map(r.zero()));
       }},
      {"C (x) C", "C + C[1]",
       [](const ChainModel& m) {
         const auto& r = m.ring();
         return tensor_complex(r, m.orbits()[1].complex, m.orbits()[1].complex);
       }},
  };
  return b;
}

Builtin make_a2(Field f) {
  Presentation p(f, {"S1", "S2", "P1"}, -2, 2);
  const int s1 = 0, s2 = 1, p1 = 2;
  p.add_hom(s1, s1, 0, {"S1.S1.0.0"});
  p.add_hom(s2, s2, 0, {"S2.S2.0.0"});
  p.add_hom(p1, p1, 0, {"P1.P1.0.0"});
  p.add_hom(s2, p1, 0, {"S2.P1.0.0"});
  p.add_hom(p1, s1, 0, {"P1.S1.0.0"});
  p.add_hom(s1, s2, 1, {"S1.S2.1.0"});
  auto id = [&](const std::string& n) { return *p.find_basis(n); };
  const Scalar one = f.one();
  for (const auto& name : {"S1.S1.0.0", "S2.S2.0.0", "P1.P1.0.0"}) p.set_composition(id(name), id(name), {{id(name), one}});
  auto unit_law = [&](const std::string& m, const std::string& left_id, const std::string& right_id) {
    p.set_composition(id(left_id), id(m), {{id(m), one}});
    p.set_composition(id(m), id(right_id), {{id(m), one}});
  };
  unit_law("S2.P1.0.0", "P1.P1.0.0", "S2.S2.0.0");
  unit_law("P1.S1.0.0", "S1.S1.0.0", "P1.P1.0.0");
  unit_law("S1.S2.1.0", "S2.S2.0.0", "S1.S1.0.0");
  p.finalize();

  Triangle t;
  t.x = ObjectExpr::single(s2);
  t.y = ObjectExpr::single(p1);
  t.z = ObjectExpr::single(s1);
  t.f = Morphism(p, t.x.slots(), t.y.slots());
  t.f.coeffs()[0] = one;
  t.g = Morphism(p, t.y.slots(), t.z.slots());
  t.g.coeffs()[0] = one;
  t.h = Morphism(p, t.z.slots(), shifted(t.x.slots(), 1));
  t.h.coeffs()[0] = one;
  p.add_triangle(std::move(t));
  p.metadata = describe("a2", "Bounded derived category of the A2 quiver: simples S1, S2 and the projective-injective P1 "
                              "with S2 -> P1 -> S1 -> S2[1]; no tensor structure");
  Builtin b;
  b.name = "a2";
  b.presentation = std::move(p);
  return b;
}

}  // namespace

CommAlgebra builtin_algebra(const std::string& name, Field field) {
  if (name == "k") return product_of_fields(field, 1);
  if (name == "kxk") return product_of_fields(field, 2);
  if (name == "kxkxk") return product_of_fields(field, 3);
  if (name == "dual_numbers") return dual_numbers(field);
  throw Error(ErrorKind::UnsupportedRing, "no builtin algebra named '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"k", "kxk", "kxkxk", "dual_numbers", "a2"}; }
std::vector<std::string> perf_builtin_names() { return {"k", "kxk", "kxkxk", "dual_numbers"}; }

bool is_builtin(const std::string& name) {
  for (const auto& n : builtin_names())
    if (n == name) return true;
  return false;
}

const Builtin& builtin(const std::string& name, std::uint32_t characteristic) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::uint32_t>, std::unique_ptr<Builtin>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{name, characteristic}];
  if (slot) return *slot;
  Field f(characteristic);
  Builtin b;
  if (name == "k")
    b = make_product(1, f);
  else if (name == "kxk")
    b = make_product(2, f);
  else if (name == "kxkxk")
    b = make_product(3, f);
  else if (name == "dual_numbers")
    b = make_dual_numbers(f);
  else if (name == "a2")
    b = make_a2(f);
  else
    throw Error(ErrorKind::UnsupportedRing, "no builtin named '" + name + "'");
  slot = std::make_unique<Builtin>(std::move(b));
  return *slot;
}

}  // namespace ttg
