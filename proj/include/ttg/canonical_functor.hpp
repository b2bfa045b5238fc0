#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttg/builtins.hpp"
#include "ttg/sheaf.hpp"
#include "ttg/verdier.hpp"

namespace ttg {

/// m(E): the sheafification of U -> Hom_{T_U}(1, E[d]) as a module over the
/// structure sheaf, degrees in the engine's window.
struct FunctorImage {
  ObjectExpr source;
  Presheaf presheaf;
  Sheafification module;
  std::vector<bool> stabilized;      // per open, in open order
  std::vector<std::string> unstable; // NotStabilized messages
  bool provisional() const { return !unstable.empty(); }
};

FunctorImage m_object(const QuotientEngine& engine, const Spectrum& spec, const StructureSheaf& o, const ObjectExpr& e);

nlohmann::json functor_image_json(const Presentation& p, const FunctorImage& img);

struct Comparison {
  std::string kind;
  std::vector<std::string> open;
  int degree = 0;
  long long lhs = 0;
  long long rhs = 0;
  bool pass = false;
};

struct Report {
  std::vector<Comparison> records;
  bool pass() const;
  std::size_t failures() const;
  void add(std::string kind, std::vector<std::string> open, int degree, long long lhs, long long rhs, bool pass);
  void add(std::string kind, std::vector<std::string> open, int degree, long long lhs, long long rhs) {
    add(std::move(kind), std::move(open), degree, lhs, rhs, lhs == rhs);
  }
  void append(const Report& other);
  /// {"records":[{"kind","open","degree","lhs_dim","rhs_dim","pass"}],"pass":bool}
  nlohmann::json json() const;
  std::string text() const;
};

/// m(1) against the structure sheaf: degree 0 sections, vanishing elsewhere,
/// and a -> a . 1 an isomorphism of modules O(U) -> m(1)(U).
Report unit_law_check(const QuotientEngine& engine, const Spectrum& spec, const StructureSheaf& o);

/// Balmer point i corresponds to the point of Spec R whose idempotent kills
/// exactly the orbits of prime i. Entry j of the result is the Balmer index
/// of Spec R point j.
std::vector<std::size_t> comparison_map(const Builtin& b, const Spectrum& spec, const SpecRing& sr);

/// Spectrum, sections, stalks of m on the test set and restriction ranks,
/// compared with Spec R and localized chain-level homology.
/// cfg defaults to RoofConfig::defaults of the presentation.
Report reconstruction_check(const std::string& name, std::uint32_t characteristic = 2,
                            const std::optional<RoofConfig>& cfg = std::nullopt);

/// Source orbit i is sent to target orbit orbit_map[i] shifted by shift[i].
struct EquivalenceData {
  std::vector<int> orbit_map;
  std::vector<int> shift;
};

/// Presentation of the source of F: orbits named by names, homs, compositions
/// and triangles transported along F, no tensor.
Presentation relabel_presentation(const Presentation& target, const std::vector<std::string>& names,
                                  const EquivalenceData& f);

/// Throws InvalidEquivalence naming the first hom entry that does not match.
void check_equivalence(const Presentation& src, const Presentation& target, const EquivalenceData& f);

/// a (x)_F b = F^{-1}(F a (x) F b).
TensorTable pulled_back_tensor(const Presentation& src, const Presentation& target, const EquivalenceData& f);

/// {"target": builtin, "orbit_map": {src: target}, "shift": {src: int}}; missing shifts are 0.
EquivalenceData parse_equivalence(const nlohmann::json& doc, const Presentation& src, const Presentation& target);

ObjectExpr apply_equivalence(const EquivalenceData& f, const ObjectExpr& e);

/// m on the source with the pulled-back tensor against the inclusion side of
/// F(E) on the target builtin, for every orbit generator E.
Report functor_recovery_check(const Presentation& src, const EquivalenceData& f, const std::string& target,
                              std::uint32_t characteristic = 2, const std::optional<RoofConfig>& cfg = std::nullopt);

}  // namespace ttg
