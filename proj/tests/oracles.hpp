#pragma once

// Independent brute-force reference implementations used by the property tests
// and the acceptance binary. None of these call the closure, primality or
// topology code they are checked against.

#include <random>
#include <vector>

#include "ttg/object_expr.hpp"
#include "ttg/presentation.hpp"
#include "ttg/spectrum.hpp"

namespace ttg::oracle {

/// Subsets closed under two-out-of-three on every table triangle, by direct scan.
std::vector<OrbitSet> thick_sets(const Presentation& p);

/// Thick subsets that also absorb every orbit product.
std::vector<OrbitSet> ideal_sets(const Presentation& p);

/// Every ObjectExpr of rank 1..max_rank with shifts in [shift_lo, shift_hi], plus 0.
std::vector<ObjectExpr> objects(const Presentation& p, int max_rank, int shift_lo, int shift_hi);

/// Proper, and tensor(x, y) in s forces x in s or y in s for all listed x, y.
bool prime_balmer(const Presentation& p, OrbitSet s, const std::vector<ObjectExpr>& objs);

/// Points whose prime meets no member of the family.
PointSet z(const std::vector<OrbitSet>& primes, const std::vector<ObjectExpr>& family);

/// Closed sets Z(E) over every family E of orbit sums, closed under nothing
/// further: the family is already closed under finite unions and intersections.
std::vector<PointSet> closed_sets(const Presentation& p, const std::vector<OrbitSet>& primes);

ObjectExpr random_object(const Presentation& p, std::mt19937_64& rng, int max_rank = 3, int max_shift = 2);
std::vector<ObjectExpr> random_family(const Presentation& p, std::mt19937_64& rng, std::size_t max_size = 3);

}  // namespace ttg::oracle
