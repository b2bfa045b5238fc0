#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ttg/comm_algebra.hpp"
#include "ttg/presentation.hpp"
#include "ttg/spectrum.hpp"

namespace ttg {

constexpr int kDefaultRankBound = 4;

struct RoofConfig {
  int rank_bound = kDefaultRankBound;  // max rank of a roof apex
  int degree_lo = 0;
  int degree_hi = 0;
  bool require_stabilized = true;

  /// hom_window widened by 2; TTG_RANK_BOUND overrides the rank bound.
  static RoofConfig defaults(const Presentation& p);
};

/// Intersection of the primes indexed by u; all orbits for u empty.
OrbitSet intersect_primes(const std::vector<OrbitSet>& primes, PointSet u, OrbitSet all);

struct QuotientContext {
  const Presentation* presentation = nullptr;
  OrbitSet denominator_class;
  RoofConfig config;
};

/// Context for T_U; checks that the denominator class is thick.
QuotientContext make_context(const Presentation& p, const std::vector<OrbitSet>& primes, PointSet u,
                             const RoofConfig& cfg);

/// s: apex -> target with cone in the denominator class.
struct Denominator {
  SlotList apex;
  Morphism s;
};

/// t: apex(from) -> apex(to) with s_to o t = s_from.
struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  Morphism particular;
  std::vector<Morphism> kernel;
};

/// Denominators into a fixed object built as direct sums of elementary ones
/// (identities, 0 -> a with a in the class, shifted triangle arrows whose cone
/// is in the class), with all transitions between them.
class DenominatorSystem {
 public:
  DenominatorSystem(const Presentation& p, OrbitSet cls, SlotList target, int rank_bound);

  const SlotList& target() const { return target_; }
  OrbitSet denominator_class() const { return cls_; }
  int rank_bound() const { return rank_bound_; }
  std::size_t size() const { return dens_.size(); }
  const Denominator& at(std::size_t i) const { return dens_[i]; }
  std::optional<std::size_t> find(const Morphism& s) const;
  std::size_t identity_index() const { return identity_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::vector<const Transition*> transitions_into(std::size_t to, std::size_t from) const;

 private:
  OrbitSet cls_;
  SlotList target_;
  int rank_bound_;
  std::vector<Denominator> dens_;
  std::size_t identity_ = 0;
  std::vector<Transition> transitions_;
};

/// X <-s- W -a-> Y, with s the denominator-th entry of a system into X.
struct Roof {
  std::size_t denominator = 0;
  Morphism numerator;
};

/// colim over the system of Hom(W, Y).
class QuotientHom {
 public:
  QuotientHom(const Presentation& p, std::shared_ptr<const DenominatorSystem> sys, SlotList y);

  std::size_t dim() const { return reducer_.quotient_dim(); }
  const DenominatorSystem& system() const { return *sys_; }
  const SlotList& codomain() const { return y_; }
  Vec coords(const Roof& r) const;
  const Roof& basis(std::size_t k) const { return basis_[k]; }
  const std::vector<Roof>& basis() const { return basis_; }
  bool stabilized = true;

 private:
  Field field_;
  std::shared_ptr<const DenominatorSystem> sys_;
  SlotList y_;
  std::vector<std::size_t> offsets_;
  SubspaceReducer reducer_;
  std::vector<Roof> basis_;
};

/// Graded End of the unit in a quotient; only degree 0 carries a product.
struct GradedRing {
  int degree_lo = 0;
  int degree_hi = 0;
  std::map<int, std::size_t> dims;
  CommAlgebra degree0;
  std::vector<Roof> degree0_basis;
};

/// Caching front end for one presentation and configuration. Thread safe;
/// concurrent fills of the same key compute equal values.
class QuotientEngine {
 public:
  QuotientEngine(const Presentation& p, RoofConfig cfg);

  const Presentation& presentation() const { return p_; }
  const RoofConfig& config() const { return cfg_; }

  std::shared_ptr<const DenominatorSystem> system(OrbitSet cls, const SlotList& x, int rank_bound) const;
  /// Hom_{T/cls}(x, y). Throws NotStabilized when the dimension changes at
  /// rank_bound + 1 and stabilization is required.
  std::shared_ptr<const QuotientHom> hom(OrbitSet cls, const ObjectExpr& x, const ObjectExpr& y) const;

  /// g o f for f: x -> y and g: y -> z; the result is a roof into z over the system of x.
  Roof compose(OrbitSet cls, const ObjectExpr& x, const ObjectExpr& y, const Roof& f, const Roof& g) const;

  /// Matrix of the quotient functor T/small -> T/large on Hom(x, y).
  Matrix restriction(OrbitSet small, OrbitSet large, const ObjectExpr& x, const ObjectExpr& y) const;

  GradedRing end_unit(OrbitSet cls) const;
  /// Ring map End(1) in T/small -> End(1) in T/large, in degree 0.
  Matrix unit_restriction(OrbitSet small, OrbitSet large) const { return restriction(small, large, unit(), unit()); }

 private:
  const ObjectExpr& unit() const { return p_.unit(); }

  const Presentation& p_;
  RoofConfig cfg_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<std::uint64_t, SlotList, int>, std::shared_ptr<const DenominatorSystem>> systems_;
  mutable std::map<std::tuple<std::uint64_t, SlotList, SlotList>, std::shared_ptr<const QuotientHom>> homs_;
};

/// Single-shot forms over a context.
std::shared_ptr<const QuotientHom> quotient_hom(const QuotientContext& ctx, const ObjectExpr& x, const ObjectExpr& y,
                                                int d);
GradedRing end_unit(const QuotientContext& ctx);

}  // namespace ttg
