#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ttg/object_expr.hpp"
#include "ttg/presentation.hpp"

namespace ttg {

constexpr std::size_t kDefaultOrbitCap = 24;

/// Least set containing g that is closed under two-out-of-three over the
/// triangle table. Shift and summand closure are implicit in OrbitSet.
OrbitSet thick_closure(const Presentation& p, OrbitSet g);

/// Thick closure that also absorbs a (x) b for every member a and every orbit b.
OrbitSet ideal_closure(const Presentation& p, OrbitSet g);

using ClosureOperator = std::function<OrbitSet(OrbitSet)>;

/// All fixpoints of a closure operator on subsets of n elements, in lectic
/// order (Ganter's NextClosure).
std::vector<OrbitSet> next_closure_all(std::size_t n, const ClosureOperator& close);

struct ThickLattice {
  std::vector<OrbitSet> sets;                               // sorted by bit value
  std::vector<std::pair<std::size_t, std::size_t>> covers;  // (i, j): sets[i] is covered by sets[j]

  std::optional<std::size_t> index_of(OrbitSet s) const;
  bool contains(OrbitSet s) const { return index_of(s).has_value(); }
};

ThickLattice make_lattice(std::vector<OrbitSet> sets);
ThickLattice enumerate_thick(const Presentation& p, std::size_t orbit_cap = kDefaultOrbitCap);
ThickLattice enumerate_ideals(const Presentation& p, std::size_t orbit_cap = kDefaultOrbitCap);

/// Proper tensor ideal S such that a, b outside S forces some summand of a (x) b outside S.
bool is_prime_balmer(const Presentation& p, OrbitSet s);

/// S has a unique minimal strict over-set in the lattice.
bool is_prime_matsui(const ThickLattice& lattice, OrbitSet s);

/// Lattice export: {"nodes":[{"id","orbits","prime_balmer","prime_matsui"}],"edges":[[i,j]]}.
/// prime_balmer is null when the presentation has no tensor.
nlohmann::json lattice_json(const Presentation& p, const ThickLattice& lattice);
std::string lattice_dot(const Presentation& p, const ThickLattice& lattice);

std::vector<std::string> orbit_names(const Presentation& p, OrbitSet s);

}  // namespace ttg
