#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttg/object_expr.hpp"
#include "ttg/presentation.hpp"
#include "ttg/thick_lattice.hpp"

namespace ttg {

/// Subset of the points of a finite space, bit i standing for point i.
using PointSet = std::uint64_t;

constexpr std::size_t kMaxPoints = 64;

inline bool point_in(PointSet s, std::size_t i) { return (s >> i) & 1ULL; }
inline PointSet all_points(std::size_t n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

/// A finite topological space given by its full family of open sets.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  /// Builds the topology whose closed sets are generated by closed_seeds under
  /// finite unions and intersections, then checks the axioms.
  FiniteSpace(std::vector<std::string> labels, const std::vector<PointSet>& closed_seeds);
  /// Takes an explicit open family; throws TopologyAxiomFailure if it is not a topology.
  static FiniteSpace from_opens(std::vector<std::string> labels, std::vector<PointSet> opens);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  PointSet full() const { return all_points(labels_.size()); }
  const std::vector<PointSet>& opens() const { return opens_; }  // sorted by bit value
  bool is_open(PointSet u) const;
  std::size_t open_index(PointSet u) const;
  PointSet minimal_open(std::size_t x) const { return minimal_open_[x]; }
  PointSet closure(PointSet s) const;
  /// x <= y iff x lies in the closure of {y}.
  bool specializes(std::size_t x, std::size_t y) const { return point_in(closure(1ULL << y), x); }
  std::vector<std::pair<std::size_t, std::size_t>> specialization_pairs() const;
  bool is_discrete() const { return opens_.size() == (std::size_t{1} << labels_.size()); }

  /// Every open cover of u by opens contained in u, as lists of open sets.
  /// Enumeration is exhaustive over subsets of the opens below u.
  std::vector<std::vector<PointSet>> covers_of(PointSet u, std::size_t limit = 1u << 16) const;

 private:
  void finish();
  std::vector<std::string> labels_;
  std::vector<PointSet> opens_;
  std::vector<PointSet> minimal_open_;
};

void verify_topology(const FiniteSpace& x);

enum class Variant { Balmer, Matsui };

struct Spectrum {
  Variant variant = Variant::Balmer;
  ThickLattice lattice;          // ideals for Balmer, thick subcategories for Matsui
  std::vector<OrbitSet> primes;  // sorted by bit value
  FiniteSpace space;             // point i is primes[i]
};

/// Primes disjoint from the family e (as subcategories; 0 lies in every prime).
PointSet support_Z(const std::vector<OrbitSet>& primes, const std::vector<ObjectExpr>& e);

FiniteSpace build_space(const Presentation& p, const std::vector<OrbitSet>& primes);
Spectrum compute_spectrum(const Presentation& p, Variant variant, std::size_t orbit_cap = kDefaultOrbitCap);

std::string prime_label(const Presentation& p, OrbitSet s);
std::vector<std::size_t> points_of(PointSet s);

/// {"points":[...],"opens":[[...]],"specialization":[[i,j]],"minimal_opens":[[...]]}
nlohmann::json space_json(const FiniteSpace& x);
std::string space_dot(const FiniteSpace& x);
nlohmann::json spectrum_json(const Presentation& p, const Spectrum& s);

}  // namespace ttg
