#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ttg/chain_model.hpp"
#include "ttg/comm_algebra.hpp"
#include "ttg/presentation.hpp"

namespace ttg {

/// Reconstruction test object: the same object written on both sides.
struct TestObject {
  std::string label;
  std::string expr;                                          // in the presentation's object language
  std::function<ProjComplex(const ChainModel&)> chain;       // independently built complex
};

struct Builtin {
  std::string name;
  Presentation presentation;
  AliasMap aliases;
  std::shared_ptr<const ChainModel> model;  // null for presentations not of the form Perf(R)
  std::vector<TestObject> test_set;
};

/// Registry entries: "k", "kxk", "kxkxk", "dual_numbers" (all Perf(R), emitted
/// from the chain model) and "a2" (derived category of the A2 quiver, written
/// by hand, no tensor). Results are cached per (name, characteristic).
///
/// Orbits and aliases:
///   k             u                         unit = u
///   kxk           P1, P2                    unit = P1 + P2, cone_e1 = P2 + P2[1]
///   kxkxk         P1, P2, P3                unit = P1 + P2 + P3, cone_e12 = P3 + P3[1]
///   dual_numbers  R, C = cone(x: R -> R)    unit = R, cone_x = C
///   a2            S1, S2, P1                triangle S2 -> P1 -> S1 -> S2[1]
const Builtin& builtin(const std::string& name, std::uint32_t characteristic = 2);
bool is_builtin(const std::string& name);
std::vector<std::string> builtin_names();
std::vector<std::string> perf_builtin_names();

CommAlgebra builtin_algebra(const std::string& name, Field field);

}  // namespace ttg
