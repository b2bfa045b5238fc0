#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttg/field.hpp"
#include "ttg/linalg.hpp"
#include "ttg/spectrum.hpp"

namespace ttg {

constexpr std::size_t kMaxAlgebraDim = 8;

/// Finite-dimensional commutative algebra given by structure constants:
/// mult[i][j] is the coordinate vector of b_i * b_j.
class CommAlgebra {
 public:
  CommAlgebra() = default;
  CommAlgebra(Field f, std::vector<std::string> names, std::vector<std::vector<Vec>> mult, Vec unit);

  Field field() const { return field_; }
  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Vec& unit() const { return unit_; }
  const Vec& product(std::size_t i, std::size_t j) const { return mult_[i][j]; }
  Vec zero() const { return zeros(field_, dim()); }
  Vec basis(std::size_t i) const { return unit_vector(field_, dim(), i); }

  Vec mul(const Vec& a, const Vec& b) const;
  Vec power(const Vec& a, std::uint64_t e) const;
  /// Matrix of x |-> a x.
  Matrix left_mult(const Vec& a) const;
  bool is_idempotent(const Vec& e) const { return mul(e, e) == e; }

  /// Checks commutativity, associativity and the unit over all basis elements.
  void validate() const;

  std::string format(const Vec& a) const;

 private:
  Field field_;
  std::vector<std::string> names_;
  std::vector<std::vector<Vec>> mult_;
  Vec unit_;
};

/// e R as an algebra with unit e, together with the maps relating it to R.
struct Corner {
  CommAlgebra algebra;
  Matrix inclusion;   // corner coordinates -> R coordinates
  Matrix projection;  // R coordinates -> corner coordinates of e * a
};

Corner corner(const CommAlgebra& r, const Vec& e);

std::vector<Vec> nilradical(const CommAlgebra& r);
/// Span of all products of k elements of the subspace (k >= 1).
std::vector<Vec> ideal_power(const CommAlgebra& r, const std::vector<Vec>& ideal, std::size_t k);

/// Complete set of orthogonal primitive idempotents, in a fixed order.
std::vector<Vec> primitive_idempotents(const CommAlgebra& r);

struct LocalSignature {
  std::size_t dim = 0;
  std::size_t residue_degree = 0;
  std::vector<std::size_t> loewy;  // dim N^k for k = 1, 2, ... until zero
  bool operator==(const LocalSignature&) const = default;
  auto operator<=>(const LocalSignature&) const = default;
};

LocalSignature local_signature(const CommAlgebra& local);

/// Zariski spectrum of R: one point per primitive idempotent, discrete
/// topology, sections O(U) = e_U R.
struct SpecRing {
  CommAlgebra ring;
  std::vector<Vec> idempotents;
  FiniteSpace space;

  Vec idempotent_of(PointSet u) const;
  Corner sections(PointSet u) const { return corner(ring, idempotent_of(u)); }
};

SpecRing spec_ring(const CommAlgebra& r);

bool is_unital_hom(const CommAlgebra& a, const CommAlgebra& b, const Matrix& m);

struct IsoResult {
  std::optional<Matrix> map;  // A coordinates -> B coordinates
  std::string reason;
};

/// Decomposes both algebras into local factors and matches them. Factors
/// must be of the form k[x]/(x^m); other shapes are reported as unsupported.
/// Any returned map has been verified to be a unital ring isomorphism.
IsoResult find_isomorphism(const CommAlgebra& a, const CommAlgebra& b);

}  // namespace ttg
