#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ttg/field.hpp"
#include "ttg/linalg.hpp"
#include "ttg/object_expr.hpp"

namespace ttg {

/// Graded hom block Hom^degree(src, dst) = Hom(src, dst[degree]) between orbits.
struct HomKey {
  int src = 0;
  int dst = 0;
  int degree = 0;
  auto operator<=>(const HomKey&) const = default;
};

struct BasisElement {
  std::string name;
  HomKey hom;
  std::size_t index = 0;  // position inside its hom block
};

struct SparseTerm {
  std::size_t basis = 0;
  Scalar coeff;
};
using SparseVec = std::vector<SparseTerm>;

class Presentation;

/// Degree-0 morphism between two slot lists: a matrix whose (j, i) entry is a
/// vector in the basis of Hom^{dst[j].shift - src[i].shift}(src[i].orbit, dst[j].orbit).
/// Coefficients are stored block after block in a flat vector.
class Morphism {
 public:
  Morphism() = default;
  Morphism(const Presentation& p, SlotList src, SlotList dst);

  static Morphism identity(const Presentation& p, const SlotList& slots);

  const SlotList& src() const { return src_; }
  const SlotList& dst() const { return dst_; }
  std::size_t dim() const { return coeffs_.size(); }
  const Vec& coeffs() const { return coeffs_; }
  Vec& coeffs() { return coeffs_; }

  std::size_t block_offset(std::size_t j, std::size_t i) const { return offsets_[j * src_.size() + i]; }
  std::size_t block_size(std::size_t j, std::size_t i) const {
    return offsets_[j * src_.size() + i + 1] - offsets_[j * src_.size() + i];
  }
  std::span<const Scalar> block(std::size_t j, std::size_t i) const;
  std::span<Scalar> block(std::size_t j, std::size_t i);

  /// Same matrix viewed between the shifted slot lists.
  Morphism shifted(int n) const;
  bool is_zero() const { return ttg::is_zero(coeffs_); }
  Morphism with_coeffs(Vec c) const;

  bool operator==(const Morphism& o) const {
    return src_ == o.src_ && dst_ == o.dst_ && coeffs_ == o.coeffs_;
  }

 private:
  SlotList src_;
  SlotList dst_;
  std::vector<std::size_t> offsets_;
  Vec coeffs_;
};

struct Triangle {
  ObjectExpr x, y, z;
  Morphism f;  // x -> y
  Morphism g;  // y -> z
  Morphism h;  // z -> x[1]
};

struct TensorTable {
  ObjectExpr unit;
  std::vector<std::vector<ObjectExpr>> products;  // products[a][b] = a (x) b
};

/// A finite description of a k-linear tensor triangulated category. Build it
/// with the mutators, then call finalize(); it is treated as immutable after.
class Presentation {
 public:
  Presentation() = default;
  Presentation(Field field, std::vector<std::string> orbits, int window_lo, int window_hi);

  void add_hom(int src, int dst, int degree, const std::vector<std::string>& basis_names);
  /// Records g o f = result (f applied first).
  void set_composition(std::size_t g, std::size_t f, SparseVec result);
  void add_triangle(Triangle t);
  void set_tensor(TensorTable t);
  void finalize();

  nlohmann::json metadata = nlohmann::json::object();

  Field field() const { return field_; }
  const std::vector<std::string>& orbits() const { return orbits_; }
  std::size_t orbit_count() const { return orbits_.size(); }
  std::optional<int> find_orbit(const std::string& name) const;
  int window_lo() const { return window_lo_; }
  int window_hi() const { return window_hi_; }
  bool in_window(int d) const { return d >= window_lo_ && d <= window_hi_; }

  const std::vector<BasisElement>& basis() const { return basis_; }
  std::optional<std::size_t> find_basis(const std::string& name) const;
  const std::vector<std::size_t>& hom_basis(int src, int dst, int degree) const;
  const std::map<HomKey, std::vector<std::size_t>>& homs() const { return homs_; }

  const SparseVec& composition(std::size_t g, std::size_t f) const;
  const std::map<std::pair<std::size_t, std::size_t>, SparseVec>& compositions() const { return comp_; }

  const std::vector<Triangle>& triangles() const { return triangles_; }
  bool has_tensor() const { return tensor_.has_value(); }
  const TensorTable& tensor_table() const;
  const ObjectExpr& unit() const { return tensor_table().unit; }

  /// Coordinates of the identity of an orbit in the Hom^0(a, a) basis, if one exists.
  const std::optional<Vec>& identity(int orbit) const { return identities_.at(static_cast<std::size_t>(orbit)); }

  OrbitSet all_orbits() const { return OrbitSet::all(orbits_.size()); }
  std::string format(const ObjectExpr& e) const { return format_object_expr(e, orbits_); }
  ObjectExpr parse(const std::string& text, const AliasMap* aliases = nullptr) const {
    return parse_object_expr(text, orbits_, aliases);
  }

 private:
  Field field_;
  std::vector<std::string> orbits_;
  int window_lo_ = 0;
  int window_hi_ = 0;
  std::vector<BasisElement> basis_;
  std::map<std::string, std::size_t> basis_index_;
  std::map<HomKey, std::vector<std::size_t>> homs_;
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> comp_;
  std::vector<Triangle> triangles_;
  std::optional<TensorTable> tensor_;
  std::vector<std::optional<Vec>> identities_;
};

// --- morphism algebra -------------------------------------------------------

/// g o f.
Morphism compose(const Presentation& p, const Morphism& g, const Morphism& f);
Morphism operator+(const Morphism& a, const Morphism& b);
Morphism operator-(const Morphism& a, const Morphism& b);
Morphism scaled(const Morphism& m, const Scalar& c);
/// Matrix of t |-> s o t on Hom(w, s.src()) -> Hom(w, s.dst()).
Matrix postcompose_matrix(const Presentation& p, const Morphism& s, const SlotList& w);
/// Matrix of f |-> f o t on Hom(t.dst(), y) -> Hom(t.src(), y).
Matrix precompose_matrix(const Presentation& p, const Morphism& t, const SlotList& y);

// --- object-level operations -------------------------------------------------

/// dim Hom(x, y[d]).
std::size_t hom_dim(const Presentation& p, const ObjectExpr& x, const ObjectExpr& y, int d);
ObjectExpr tensor(const Presentation& p, const ObjectExpr& x, const ObjectExpr& y);

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Presentation& p);

// --- input format ------------------------------------------------------------

Presentation parse_presentation(const nlohmann::json& doc);
Presentation parse_presentation_text(const std::string& text);
Presentation load_presentation(const std::string& path);
nlohmann::json serialize_presentation(const Presentation& p);

}  // namespace ttg
