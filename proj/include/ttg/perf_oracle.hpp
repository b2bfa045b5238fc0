#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ttg/comm_algebra.hpp"
#include "ttg/linalg.hpp"

namespace ttg {

/// Matrix with entries in a commutative algebra R; each entry is a coordinate vector.
struct RMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Vec> entries;  // row-major

  static RMatrix zero(const CommAlgebra& r, std::size_t rows, std::size_t cols);
  static RMatrix identity(const CommAlgebra& r, std::size_t n);
  static RMatrix scalar(const CommAlgebra& r, std::size_t n, const Vec& a);

  Vec& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Vec& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  bool is_zero() const;
  bool operator==(const RMatrix&) const = default;
};

RMatrix mul(const CommAlgebra& r, const RMatrix& a, const RMatrix& b);
RMatrix add(const RMatrix& a, const RMatrix& b);
RMatrix sub(const RMatrix& a, const RMatrix& b);
RMatrix scale(const CommAlgebra& r, const RMatrix& a, const Vec& c);
RMatrix scale(const RMatrix& a, const Scalar& c);
RMatrix kron(const CommAlgebra& r, const RMatrix& a, const RMatrix& b);
RMatrix block_diag(const CommAlgebra& r, const RMatrix& a, const RMatrix& b);
RMatrix submatrix(const RMatrix& a, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols);
void place(RMatrix& dst, const RMatrix& src, std::size_t r0, std::size_t c0);
/// Coordinates over the base field, row-major then algebra coordinates.
Vec flatten(const RMatrix& a);
RMatrix unflatten(const CommAlgebra& r, std::size_t rows, std::size_t cols, const Vec& v);

/// Bounded complex of projectives; the term in degree q is the image of the
/// idempotent matrix idem(q) acting on R^rank(q), and d(q) maps degree q to q+1.
class ProjComplex {
 public:
  ProjComplex() = default;
  ProjComplex(int lo, std::vector<RMatrix> idems, std::vector<RMatrix> diffs);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(idems_.size()) - 1; }
  bool empty() const { return idems_.empty(); }
  std::size_t rank(int q) const;
  RMatrix idem(const CommAlgebra& r, int q) const;
  RMatrix d(const CommAlgebra& r, int q) const;

  /// Checks e^2 = e, e' d e = d and d o d = 0.
  void validate(const CommAlgebra& r) const;

 private:
  int lo_ = 0;
  std::vector<RMatrix> idems_;
  std::vector<RMatrix> diffs_;
};

/// Graded map E -> F: component q sends E^q to F^{q+degree}.
struct ChainMap {
  int degree = 0;
  std::map<int, RMatrix> comps;

  RMatrix component(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, int q) const;
};

ProjComplex unit_complex(const CommAlgebra& r);
/// A single projective eR^n placed in one degree.
ProjComplex module_complex(const CommAlgebra& r, const RMatrix& idem, int degree = 0);
/// E[m]^q = E^{q+m}, with differential multiplied by (-1)^m.
ProjComplex shift(const CommAlgebra& r, const ProjComplex& e, int m);
ProjComplex direct_sum(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b);
/// cone^q = X^{q+1} (+) Y^q with differential [[-d_X, 0], [f, d_Y]].
ProjComplex cone(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y, const ChainMap& f);
ProjComplex tensor_complex(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b);
/// Multiplies every term by a central idempotent.
ProjComplex localize(const CommAlgebra& r, const ProjComplex& e, const Vec& idempotent);

ChainMap identity_map(const CommAlgebra& r, const ProjComplex& e);
ChainMap zero_map(int degree);
/// g o f, no signs.
ChainMap compose(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b, const ProjComplex& c,
                 const ChainMap& g, const ChainMap& f);
ChainMap add(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b, const ChainMap& f,
             const ChainMap& g);
bool is_chain_map(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, const ChainMap& g);
/// Y -> cone(f) and cone(f) -> X[1].
ChainMap cone_inclusion(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y);
ChainMap cone_projection(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y);

/// H^p of a hom complex: representatives of a basis and a way to read off
/// the class of any cycle.
class Homology {
 public:
  Homology() = default;
  Homology(Field f, int degree, std::size_t ambient, std::vector<Vec> reps, std::vector<Vec> boundaries,
           std::vector<Vec> cycles);
  int degree() const { return degree_; }
  std::size_t dim() const { return reps_.size(); }
  const std::vector<Vec>& reps() const { return reps_; }
  bool is_cycle(const Vec& v) const;
  bool is_boundary(const Vec& v) const { return boundaries_.contains(v); }
  /// Class coordinates of a cycle; throws if v is not a cycle.
  Vec coords(const Vec& v) const;

 private:
  Field field_;
  int degree_ = 0;
  std::size_t ambient_ = 0;
  std::vector<Vec> reps_;
  SubspaceReducer boundaries_{Field(), 0, {}};
  SubspaceReducer cycles_{Field(), 0, {}};
  Matrix reduced_reps_;
};

/// Hom complex Hom^p(E, F) = prod_q Hom_R(E^q, F^{q+p}) with
/// D(g) = d_F g - (-1)^p g d_E, unpacked to field coordinates.
class HomComplex {
 public:
  HomComplex(const CommAlgebra& r, ProjComplex e, ProjComplex f);

  const ProjComplex& source() const { return e_; }
  const ProjComplex& target() const { return f_; }
  std::size_t ambient_dim(int p) const;
  Vec to_coords(const ChainMap& g) const;
  ChainMap from_coords(int p, const Vec& v) const;
  /// Basis of the R-linear maps respecting the idempotents, in ambient coordinates.
  std::vector<Vec> module_basis(int p) const;
  Vec differential(int p, const Vec& g) const;
  Homology homology(int p, const std::optional<Vec>& preferred = std::nullopt) const;
  /// Lowest and highest p for which Hom^p can be nonzero.
  std::pair<int, int> degree_range() const;

 private:
  struct Block {
    int q;
    std::size_t rows, cols, offset;
  };
  std::vector<Block> blocks(int p) const;

  const CommAlgebra* r_;
  ProjComplex e_, f_;
};

std::size_t chain_hom_dim(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, int d);
bool is_acyclic(const CommAlgebra& r, const ProjComplex& e);

struct Equivalence {
  ChainMap forward;   // E -> F
  ChainMap backward;  // F -> E
};

/// Searches H^0(E, F) with a fixed seed for a homotopy equivalence.
std::optional<Equivalence> find_equivalence(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f,
                                            std::uint64_t seed = 0x7467, int attempts = 200);

Scalar random_scalar(Field f, std::mt19937_64& rng);

}  // namespace ttg
