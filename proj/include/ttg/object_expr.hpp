#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ttg {

/// A set of shift-orbits, bit i standing for orbit i. Under the Krull-Schmidt
/// convention this names the full subcategory of objects all of whose
/// indecomposable summands lie in these orbits.
class OrbitSet {
 public:
  constexpr OrbitSet() = default;
  constexpr explicit OrbitSet(std::uint64_t bits) : bits_(bits) {}

  static OrbitSet all(std::size_t n) { return OrbitSet(n >= 64 ? ~0ULL : ((1ULL << n) - 1)); }
  static OrbitSet single(std::size_t i) { return OrbitSet(1ULL << i); }

  constexpr std::uint64_t bits() const { return bits_; }
  bool contains(std::size_t i) const { return (bits_ >> i) & 1ULL; }
  bool subset_of(OrbitSet o) const { return (bits_ & ~o.bits_) == 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t count() const;
  void insert(std::size_t i) { bits_ |= (1ULL << i); }

  OrbitSet operator|(OrbitSet o) const { return OrbitSet(bits_ | o.bits_); }
  OrbitSet operator&(OrbitSet o) const { return OrbitSet(bits_ & o.bits_); }
  auto operator<=>(const OrbitSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

struct Slot {
  int orbit = 0;
  int shift = 0;
  auto operator<=>(const Slot&) const = default;
};

/// An expanded list of indecomposable summands; the row/column index set of
/// morphism matrices. Order is significant.
using SlotList = std::vector<Slot>;

SlotList shifted(const SlotList& slots, int n);

/// Formal direct sum of shifted indecomposables, kept in canonical form:
/// terms sorted by (orbit, shift), multiplicities merged and positive.
class ObjectExpr {
 public:
  struct Term {
    int orbit = 0;
    int shift = 0;
    int multiplicity = 1;
    bool operator==(const Term&) const = default;
  };

  ObjectExpr() = default;
  explicit ObjectExpr(std::vector<Term> terms);

  static ObjectExpr single(int orbit, int shift = 0, int multiplicity = 1);
  static ObjectExpr from_slots(const SlotList& slots);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int rank() const;
  OrbitSet support() const;
  /// Membership in the subcategory named by an OrbitSet.
  bool belongs_to(OrbitSet s) const { return support().subset_of(s); }

  ObjectExpr shifted(int n) const;
  ObjectExpr operator+(const ObjectExpr& o) const;
  SlotList slots() const;

  bool operator==(const ObjectExpr&) const = default;
  bool operator<(const ObjectExpr& o) const;

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

using AliasMap = std::map<std::string, ObjectExpr>;

/// Grammar: term := NAME | NAME "[" INT "]" | INT "*" term ;
///          expr := "0" | term ("+" term)* ; whitespace insignificant.
/// Names resolve to orbits first, then to aliases.
ObjectExpr parse_object_expr(std::string_view text, const std::vector<std::string>& orbit_names,
                             const AliasMap* aliases = nullptr);

std::string format_object_expr(const ObjectExpr& e, const std::vector<std::string>& orbit_names);

}  // namespace ttg
