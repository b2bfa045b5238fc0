#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ttg/comm_algebra.hpp"
#include "ttg/linalg.hpp"
#include "ttg/spectrum.hpp"

namespace ttg {

class QuotientEngine;

/// Graded vector spaces over the opens of a finite space, degrees in
/// [degree_lo, degree_hi], with restriction matrices for every pair V in U.
/// Optionally ring valued (product in degree 0) or carrying an action of a
/// ring presheaf (one matrix per basis element of the acting ring).
class Presheaf {
 public:
  Presheaf() = default;
  Presheaf(FiniteSpace space, Field field, int degree_lo, int degree_hi);

  const FiniteSpace& space() const { return space_; }
  Field field() const { return field_; }
  int degree_lo() const { return lo_; }
  int degree_hi() const { return hi_; }

  std::size_t dim(PointSet u, int d) const;
  void set_dim(PointSet u, int d, std::size_t n);
  /// Stored matrix, or the identity for u = v, or zero. Rows index F(v).
  Matrix restriction(PointSet u, PointSet v, int d) const;
  void set_restriction(PointSet u, PointSet v, int d, Matrix m);

  bool has_ring() const { return has_ring_; }
  const CommAlgebra& ring(PointSet u) const;
  void set_ring(PointSet u, CommAlgebra a);

  bool has_action() const { return !actions_.empty(); }
  /// Matrices of the acting ring's basis elements on F(u) in degree d.
  const std::vector<Matrix>& action(PointSet u, int d) const;
  void set_action(PointSet u, int d, std::vector<Matrix> a);

 private:
  std::size_t slot(PointSet u, int d) const;

  FiniteSpace space_;
  Field field_;
  int lo_ = 0, hi_ = 0;
  std::vector<std::size_t> dims_;
  std::map<std::tuple<PointSet, PointSet, int>, Matrix> res_;
  bool has_ring_ = false;
  std::vector<CommAlgebra> rings_;
  std::map<std::pair<PointSet, int>, std::vector<Matrix>> actions_;
};

/// Throws NotFunctorial naming the first failing composite.
void check_functorial(const Presheaf& f);

struct DescentFailure {
  PointSet open = 0;
  std::vector<PointSet> cover;
  int degree = 0;
  std::string detail;
};

/// Exhaustive over every cover of every open.
std::vector<DescentFailure> check_descent(const Presheaf& f);

/// F+ together with the canonical map F -> F+ and, per open and degree, the
/// embedding of F+(U) into the product of stalks over the points of U.
struct Sheafification {
  Presheaf sheaf;
  std::map<std::pair<PointSet, int>, Matrix> canonical;
  std::map<std::pair<PointSet, int>, Matrix> embedding;
};

/// Sections over U are compatible families of stalk sections. A module
/// presheaf needs the sheafified acting ring.
Sheafification sheafify(const Presheaf& f, const Sheafification* acting = nullptr);

/// F(U) = k^n for nonempty U with identity restrictions.
Presheaf constant_presheaf(const FiniteSpace& x, Field field, std::size_t n);

/// Products of point spaces, then a random up-set or down-set of opens set to
/// zero, then a random change of basis on every open.
Presheaf random_presheaf(const FiniteSpace& x, Field field, std::mt19937_64& rng, int degree_lo = 0,
                         int degree_hi = 0);

Matrix random_invertible(Field field, std::size_t n, std::mt19937_64& rng);

struct StructureSheaf {
  Presheaf presheaf;               // U -> End(1_U) in degree 0
  Sheafification sheaf;
  std::vector<OrbitSet> classes;   // denominator class per open, in open order
};

StructureSheaf structure_sheaf(const QuotientEngine& engine, const Spectrum& spec);

struct ClassicalViolation {
  PointSet open = 0;
  int degree = 0;
  std::size_t dim = 0;
};

struct ClassicalReport {
  bool ok = true;
  std::vector<ClassicalViolation> violations;
};

/// End of the unit in every quotient vanishes in the nonzero degrees of [lo, hi].
ClassicalReport check_classical(const QuotientEngine& engine, const Spectrum& spec, int lo, int hi);

/// Point labels of an open set.
std::vector<std::string> open_labels(const FiniteSpace& x, PointSet u);

/// {"points","opens","degrees","sections":[{"open","dims"}],"restrictions":[{"from","to","degree","matrix"}],
///  "rings":[{"open","unit","products"}]}
nlohmann::json sheaf_json(const Presheaf& f);

nlohmann::json matrix_json(const Matrix& m);

}  // namespace ttg
