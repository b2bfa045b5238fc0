#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "ttg/perf_oracle.hpp"
#include "ttg/presentation.hpp"

namespace ttg {

struct OrbitModel {
  std::string name;
  ProjComplex complex;
};

/// Perf(R) restricted to the objects built from a list of orbit complexes.
/// Basis element k of Hom^d(a, b) in an emitted presentation is the k-th
/// homology representative of Hom(E_a, E_b) in degree d.
class ChainModel {
 public:
  ChainModel(CommAlgebra r, std::vector<OrbitModel> orbits, int window_lo, int window_hi);

  const CommAlgebra& ring() const { return r_; }
  const std::vector<OrbitModel>& orbits() const { return orbits_; }
  std::vector<std::string> orbit_names() const;
  int window_lo() const { return window_lo_; }
  int window_hi() const { return window_hi_; }

  const HomComplex& hom_complex(int a, int b) const;
  const Homology& homology(int a, int b, int d) const;

  ProjComplex realize(const SlotList& slots) const;
  ProjComplex realize(const ObjectExpr& e) const { return realize(e.slots()); }
  /// Row offset of slot i inside degree q of realize(slots).
  std::size_t offset(const SlotList& slots, std::size_t i, int q) const;

  /// Assembles a degree-0 chain map between realizations from per-block
  /// graded maps: entry (j, i, G) puts G in Hom^{t-s}(E_a, E_b) at block (j, i).
  ChainMap assemble(const SlotList& src, const SlotList& dst, const std::vector<std::tuple<std::size_t, std::size_t, ChainMap>>& blocks) const;
  ChainMap lift(const Presentation& p, const Morphism& m) const;
  Morphism to_morphism(const Presentation& p, const ChainMap& g, const SlotList& src, const SlotList& dst) const;

  /// Largest |d| for which Hom^d between orbit complexes can be nonzero, plus margin.
  std::pair<int, int> probe_range() const;

 private:
  CommAlgebra r_;
  std::vector<OrbitModel> orbits_;
  int window_lo_, window_hi_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<HomComplex>> homs_;
  mutable std::map<std::tuple<int, int, int>, std::unique_ptr<Homology>> homology_;
};

struct TriangleSpec {
  ObjectExpr x, y, z;
  ChainMap f;  // realize(x) -> realize(y)
};

/// Hom tables, compositions, triangles (cone(f) identified with z by a
/// homotopy equivalence) and, if requested, the tensor table found by
/// certified decomposition of tensor products of orbit complexes.
Presentation emit_presentation(const ChainModel& model, const std::vector<TriangleSpec>& triangles, bool with_tensor,
                               const nlohmann::json& metadata);

/// ObjectExpr whose realization is homotopy equivalent to c (rank <= max_rank,
/// shifts in [-3, 3]), found by matching Hom(E_c, -) dimensions and then
/// confirming with an explicit equivalence.
std::optional<ObjectExpr> decompose(const ChainModel& model, const ProjComplex& c, int max_rank = 3);

}  // namespace ttg
