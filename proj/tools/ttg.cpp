// ttg: command-line front end.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 stabilization failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttg/builtins.hpp"
#include "ttg/canonical_functor.hpp"
#include "ttg/error.hpp"
#include "ttg/sheaf.hpp"
#include "ttg/spectrum.hpp"
#include "ttg/thick_lattice.hpp"
#include "ttg/verdier.hpp"

namespace {

using namespace ttg;

enum Exit { kPass = 0, kCheckFailure = 1, kInputError = 2, kNotStabilized = 3 };

struct RunConfig {
  std::string input;
  std::string builtin_name;
  std::uint32_t characteristic = 2;
  std::string variant = "balmer";
  std::optional<int> rank_bound;
  std::string window;
  std::string out = "text";
  std::string output;
  std::string object;
  std::string equivalence;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  Presentation owned;
  const Builtin* builtin = nullptr;
  const Presentation& presentation() const { return builtin ? builtin->presentation : owned; }
  const AliasMap* aliases() const { return builtin ? &builtin->aliases : nullptr; }
};

Loaded load(const RunConfig& cfg) {
  Loaded l;
  if (!cfg.builtin_name.empty() && !cfg.input.empty()) throw InputError("give either an input file or --builtin, not both");
  if (!cfg.builtin_name.empty()) {
    if (!is_builtin(cfg.builtin_name)) throw InputError("unknown builtin " + cfg.builtin_name);
    l.builtin = &builtin(cfg.builtin_name, cfg.characteristic);
  } else if (!cfg.input.empty()) {
    l.owned = load_presentation(cfg.input);
  } else {
    throw InputError("no input: give a presentation file or --builtin");
  }
  return l;
}

Variant variant_of(const RunConfig& cfg) {
  if (cfg.variant == "balmer") return Variant::Balmer;
  if (cfg.variant == "matsui") return Variant::Matsui;
  throw InputError("unknown variant " + cfg.variant);
}

void require_balmer(const RunConfig& cfg, const char* what) {
  if (variant_of(cfg) == Variant::Matsui)
    throw InputError(std::string(what) + " needs the tensor structure; the matsui variant has none");
}

RoofConfig roof_config(const RunConfig& cfg, const Presentation& p) {
  RoofConfig r = RoofConfig::defaults(p);
  if (cfg.rank_bound) {
    if (*cfg.rank_bound < 1) throw InputError("--rank-bound must be positive");
    r.rank_bound = *cfg.rank_bound;
  }
  if (!cfg.window.empty()) {
    std::string w = cfg.window;
    for (auto& c : w)
      if (c == ':') c = ',';
    auto comma = w.find(',');
    if (comma == std::string::npos) throw InputError("--window expects LO,HI");
    try {
      std::size_t a = 0, b = 0;
      r.degree_lo = std::stoi(w.substr(0, comma), &a);
      r.degree_hi = std::stoi(w.substr(comma + 1), &b);
      if (a != comma || b != w.size() - comma - 1) throw InputError("--window expects LO,HI");
    } catch (const std::logic_error&) {
      throw InputError("--window expects LO,HI");
    }
    if (r.degree_lo > r.degree_hi) throw InputError("--window is empty");
  }
  return r;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw InputError("cannot write " + cfg.output);
  f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void no_dot(const RunConfig& cfg, const char* cmd) {
  if (cfg.out == "dot") throw InputError(std::string("dot output is not available for ") + cmd);
}

std::string braces(const std::vector<std::string>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s + "}";
}

int cmd_validate(const RunConfig& cfg) {
  no_dot(cfg, "validate");
  Loaded l = load(cfg);
  ValidationReport rep = validate(l.presentation());
  if (cfg.out == "json") {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : rep.violations) v.push_back({{"kind", x.kind}, {"detail", x.detail}});
    emit(cfg, dump({{"valid", rep.ok()}, {"violations", v}}));
  } else {
    std::string s;
    for (const auto& x : rep.violations) s += x.kind + ": " + x.detail + "\n";
    s += rep.ok() ? "valid\n" : std::to_string(rep.violations.size()) + " violations\n";
    emit(cfg, s);
  }
  return rep.ok() ? kPass : kCheckFailure;
}

int cmd_spectrum(const RunConfig& cfg) {
  Loaded l = load(cfg);
  const Presentation& p = l.presentation();
  Spectrum s = compute_spectrum(p, variant_of(cfg));
  if (cfg.out == "json") {
    emit(cfg, dump(spectrum_json(p, s)));
  } else if (cfg.out == "dot") {
    emit(cfg, space_dot(s.space) + lattice_dot(p, s.lattice));
  } else {
    std::ostringstream os;
    os << "variant: " << cfg.variant << "\n";
    os << "lattice: " << s.lattice.sets.size() << " " << (s.variant == Variant::Balmer ? "ideals" : "thick subcategories")
       << "\n";
    for (const auto& set : s.lattice.sets) os << "  " << braces(orbit_names(p, set)) << "\n";
    os << "points: " << s.space.size() << "\n";
    for (std::size_t i = 0; i < s.space.size(); ++i)
      os << "  " << s.space.labels()[i] << " = " << braces(orbit_names(p, s.primes[i])) << "\n";
    os << "opens: " << s.space.opens().size() << "\n";
    for (auto u : s.space.opens()) os << "  " << braces(open_labels(s.space, u)) << "\n";
    os << "discrete: " << (s.space.is_discrete() ? "yes" : "no") << "\n";
    emit(cfg, os.str());
  }
  return kPass;
}

int cmd_sheaf(const RunConfig& cfg) {
  no_dot(cfg, "sheaf");
  require_balmer(cfg, "sheaf");
  Loaded l = load(cfg);
  const Presentation& p = l.presentation();
  Spectrum s = compute_spectrum(p, Variant::Balmer);
  QuotientEngine engine(p, roof_config(cfg, p));
  StructureSheaf o = structure_sheaf(engine, s);
  ClassicalReport cl = check_classical(engine, s, engine.config().degree_lo, engine.config().degree_hi);
  const Presheaf& sh = o.sheaf.sheaf;
  if (cfg.out == "json") {
    nlohmann::json j = sheaf_json(sh);
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : cl.violations) v.push_back({{"open", open_labels(s.space, x.open)}, {"degree", x.degree}, {"dim", x.dim}});
    j["classical"] = {{"ok", cl.ok}, {"window", {engine.config().degree_lo, engine.config().degree_hi}}, {"violations", v}};
    emit(cfg, dump(j));
  } else {
    std::ostringstream os;
    for (auto u : s.space.opens()) {
      const CommAlgebra& a = sh.ring(u);
      os << braces(open_labels(s.space, u)) << ": dim " << a.dim();
      if (a.dim()) os << ", unit " << a.format(a.unit());
      os << "\n";
    }
    os << "classical on [" << engine.config().degree_lo << ", " << engine.config().degree_hi
       << "]: " << (cl.ok ? "yes" : "no") << "\n";
    for (const auto& x : cl.violations)
      os << "  " << braces(open_labels(s.space, x.open)) << " degree " << x.degree << ": dim " << x.dim << "\n";
    emit(cfg, os.str());
  }
  return kPass;
}

int cmd_mfun(const RunConfig& cfg) {
  no_dot(cfg, "mfun");
  require_balmer(cfg, "mfun");
  if (cfg.object.empty()) throw InputError("mfun needs --object");
  Loaded l = load(cfg);
  const Presentation& p = l.presentation();
  ObjectExpr e = p.parse(cfg.object, l.aliases());
  Spectrum s = compute_spectrum(p, Variant::Balmer);
  QuotientEngine engine(p, roof_config(cfg, p));
  StructureSheaf o = structure_sheaf(engine, s);
  FunctorImage img = m_object(engine, s, o, e);
  const Presheaf& m = img.module.sheaf;
  if (cfg.out == "json") {
    emit(cfg, dump(functor_image_json(p, img)));
  } else {
    std::ostringstream os;
    os << "object: " << p.format(e) << "\n";
    auto dims = [&](PointSet u) {
      std::string t = "{";
      bool first = true;
      for (int d = m.degree_lo(); d <= m.degree_hi(); ++d)
        if (auto n = m.dim(u, d)) {
          t += (first ? "" : ", ") + std::to_string(d) + ":" + std::to_string(n);
          first = false;
        }
      return t + "}";
    };
    os << "stalks:\n";
    for (std::size_t i = 0; i < s.space.size(); ++i) os << "  " << s.space.labels()[i] << " " << dims(s.space.minimal_open(i)) << "\n";
    os << "sections:\n";
    for (auto u : s.space.opens()) os << "  " << braces(open_labels(s.space, u)) << " " << dims(u) << "\n";
    emit(cfg, os.str());
  }
  if (img.provisional()) {
    for (const auto& msg : img.unstable) std::cerr << msg << "\n";
    return kNotStabilized;
  }
  return kPass;
}

int cmd_check(const RunConfig& cfg) {
  no_dot(cfg, "check");
  require_balmer(cfg, "check");
  Report rep;
  if (!cfg.equivalence.empty()) {
    std::ifstream f(cfg.equivalence);
    if (!f) throw InputError("cannot read " + cfg.equivalence);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("equivalence file: ") + e.what());
    }
    if (!doc.contains("target") || !doc["target"].is_string()) throw InputError("equivalence needs a \"target\" builtin");
    const std::string target = doc["target"].get<std::string>();
    if (!is_builtin(target)) throw InputError("unknown builtin " + target);
    Loaded l = load(cfg);
    const Builtin& t = builtin(target, l.presentation().field().characteristic());
    EquivalenceData eq = parse_equivalence(doc, l.presentation(), t.presentation);
    rep = functor_recovery_check(l.presentation(), eq, target, l.presentation().field().characteristic(),
                                 roof_config(cfg, l.presentation()));
  } else {
    if (cfg.builtin_name.empty()) throw InputError("check needs --builtin or --equivalence");
    Loaded l = load(cfg);
    const Presentation& p = l.presentation();
    RoofConfig rc = roof_config(cfg, p);
    rep = reconstruction_check(cfg.builtin_name, cfg.characteristic, rc);
    Spectrum s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, rc);
    StructureSheaf o = structure_sheaf(engine, s);
    rep.append(unit_law_check(engine, s, o));
  }
  emit(cfg, cfg.out == "json" ? dump(rep.json()) : rep.text());
  return rep.pass() ? kPass : kCheckFailure;
}

int cmd_emit(const RunConfig& cfg) {
  no_dot(cfg, "emit");
  Loaded l = load(cfg);
  emit(cfg, dump(serialize_presentation(l.presentation())));
  return kPass;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotStabilized:
      return kNotStabilized;
    case ErrorKind::InvalidEquivalence:
    case ErrorKind::NotCommutative:
    case ErrorKind::NotFunctorial:
    case ErrorKind::TopologyAxiomFailure:
    case ErrorKind::NotAChainMap:
    case ErrorKind::Arithmetic:
      return kCheckFailure;
    default:
      return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, structure sheaves and the canonical functor for finite tensor triangulated presentations"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool with_variant) {
    sub->add_option("input", cfg.input, "presentation JSON file");
    sub->add_option("--builtin", cfg.builtin_name, "builtin presentation (k, kxk, kxkxk, dual_numbers, a2)");
    sub->add_option("--char", cfg.characteristic, "characteristic for builtins (0 or a prime)")->default_val(2);
    sub->add_option("--out", cfg.out, "output format")->check(CLI::IsMember({"json", "dot", "text"}))->default_val("text");
    sub->add_option("--output", cfg.output, "write output to this path");
    if (with_variant)
      sub->add_option("--variant", cfg.variant, "balmer or matsui")->check(CLI::IsMember({"balmer", "matsui"}))->default_val("balmer");
    sub->add_option("--rank-bound", cfg.rank_bound, "maximal roof apex rank (overrides TTG_RANK_BOUND)");
    sub->add_option("--window", cfg.window, "degree window LO,HI");
  };

  auto* validate_cmd = app.add_subcommand("validate", "parse and check the axioms of a presentation");
  common(validate_cmd, false);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "lattice, primes and topology");
  common(spectrum_cmd, true);
  auto* sheaf_cmd = app.add_subcommand("sheaf", "structure sheaf and classicality");
  common(sheaf_cmd, true);
  auto* mfun_cmd = app.add_subcommand("mfun", "image of an object under the canonical functor");
  common(mfun_cmd, true);
  mfun_cmd->add_option("--object", cfg.object, "object expression")->required();
  auto* check_cmd = app.add_subcommand("check", "reconstruction or functor recovery check");
  common(check_cmd, true);
  check_cmd->add_option("--equivalence", cfg.equivalence, "equivalence JSON for functor recovery");
  auto* emit_cmd = app.add_subcommand("emit", "write a presentation in the input format");
  common(emit_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  try {
    if (cfg.characteristic != 0 && !is_prime(cfg.characteristic)) throw InputError("--char must be 0 or a prime");
    if (validate_cmd->parsed()) return cmd_validate(cfg);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg);
    if (sheaf_cmd->parsed()) return cmd_sheaf(cfg);
    if (mfun_cmd->parsed()) return cmd_mfun(cfg);
    if (check_cmd->parsed()) return cmd_check(cfg);
    if (emit_cmd->parsed()) return cmd_emit(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
