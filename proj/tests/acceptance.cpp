// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "ttg/builtins.hpp"
#include "ttg/canonical_functor.hpp"
#include "ttg/error.hpp"
#include "ttg/sheaf.hpp"
#include "ttg/spectrum.hpp"
#include "ttg/thick_lattice.hpp"
#include "ttg/verdier.hpp"

using namespace ttg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && s >= limit_s) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("over the time limit");
  }
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(3);
  line << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [" << s << " s";
  if (limit_s > 0) line << " / limit " << limit_s << " s";
  line << "]";
  if (!o.detail.empty()) line << "  " << o.detail;
  std::cout << line.str() << std::endl;
}

const Comparison* first_failure(const Report& r) {
  for (const auto& c : r.records)
    if (!c.pass) return &c;
  return nullptr;
}

std::string describe(const Comparison& c) {
  std::string open;
  for (const auto& l : c.open) open += (open.empty() ? "" : ",") + l;
  return c.kind + " {" + open + "} degree " + std::to_string(c.degree) + ": " + std::to_string(c.lhs) + " vs " +
         std::to_string(c.rhs);
}

std::size_t count_kind(const Report& r, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& c : r.records)
    if (c.kind.rfind(prefix, 0) == 0) ++n;
  return n;
}

bool section_rings_pass(const Report& r) {
  for (const auto& kind : {"points", "homeomorphism", "section_ring"}) {
    if (count_kind(r, kind) == 0) return false;
    for (const auto& c : r.records)
      if (c.kind == kind && !c.pass) return false;
  }
  return true;
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured run_cli(const std::string& args) {
  Captured r;
  std::string cmd = std::string(TTG_BINARY) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome c1() {
  const auto& p = builtin("kxk").presentation;
  auto s = compute_spectrum(p, Variant::Balmer);
  if (s.space.size() != 2 || !s.space.is_discrete()) return {false, "spectrum is not a 2-point discrete space"};
  QuotientEngine engine(p, RoofConfig::defaults(p));
  auto o = structure_sheaf(engine, s);
  Field f = p.field();
  auto k = builtin_algebra("k", f), kk = builtin_algebra("kxk", f);
  if (!find_isomorphism(o.sheaf.sheaf.ring(s.space.full()), kk).map) return {false, "global sections are not k x k"};
  for (std::size_t i = 0; i < 2; ++i)
    if (!find_isomorphism(o.sheaf.sheaf.ring(1ULL << i), k).map) return {false, "point sections are not k"};
  auto rep = reconstruction_check("kxk");
  if (!section_rings_pass(rep)) return {false, "homeomorphism or ring isomorphism to Spec(k x k) failed"};
  return {true, "2 points, discrete, sections (k x k, k, k), homeomorphism and ring isomorphisms verified"};
}

Outcome c2() {
  const auto& p = builtin("dual_numbers", 2).presentation;
  auto s = compute_spectrum(p, Variant::Balmer);
  if (s.space.size() != 1) return {false, "spectrum has " + std::to_string(s.space.size()) + " points"};
  QuotientEngine engine(p, RoofConfig::defaults(p));
  auto o = structure_sheaf(engine, s);
  const auto& r = o.sheaf.sheaf.ring(s.space.full());
  if (r.dim() != 2) return {false, "section ring has dimension " + std::to_string(r.dim())};
  bool square_zero = false;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    Vec x = r.basis(i);
    if (!is_zero(x) && is_zero(r.mul(x, x))) square_zero = true;
  }
  if (!square_zero) return {false, "no square-zero generator"};
  auto cl = check_classical(engine, s, -4, 4);
  if (!cl.ok) return {false, "check_classical failed on [-4, 4]"};
  if (!section_rings_pass(reconstruction_check("dual_numbers", 2))) return {false, "ring isomorphism to Spec R failed"};
  return {true, "1 point, section ring of dimension 2 with a square-zero generator, classical on [-4, 4]"};
}

Outcome c3() {
  const auto& p = builtin("a2").presentation;
  auto l = enumerate_thick(p);
  if (l.sets.size() != 5) return {false, std::to_string(l.sets.size()) + " thick subcategories"};
  if (l.sets != oracle::thick_sets(p)) return {false, "lattice differs from the exhaustive subset scan"};
  auto s = compute_spectrum(p, Variant::Matsui);
  if (s.primes.size() != 3) return {false, std::to_string(s.primes.size()) + " Matsui primes"};
  if (s.space.size() != 3 || !s.space.is_discrete()) return {false, "space is not 3-point discrete"};
  return {true, "5 thick subcategories (oracle agrees), 3 Matsui primes, 3-point discrete space"};
}

Outcome c4() {
  std::size_t checked = 0, disagreements = 0;
  std::string where;
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto objs = oracle::objects(p, 3, 0, 1);
    for (auto s : enumerate_ideals(p).sets) {
      ++checked;
      if (is_prime_balmer(p, s) != oracle::prime_balmer(p, s, objs)) {
        ++disagreements;
        where = name + " " + prime_label(p, s);
      }
    }
  }
  return {disagreements == 0, std::to_string(checked) + " ideals over the tensor builtins, " +
                                  std::to_string(disagreements) + " disagreements" +
                                  (where.empty() ? "" : " (last: " + where + ")") + "; a2 has no tensor and is skipped"};
}

Outcome c5() {
  std::size_t opens = 0;
  for (const auto& name : perf_builtin_names()) {
    const Builtin& b = builtin(name);
    const auto& p = b.presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    RoofConfig cfg = RoofConfig::defaults(p);
    cfg.require_stabilized = false;
    QuotientEngine engine(p, cfg);
    auto sr = spec_ring(b.model->ring());
    auto rho = comparison_map(b, s, sr);
    for (auto u : s.space.opens()) {
      ++opens;
      OrbitSet cls = intersect_primes(s.primes, u, p.all_orbits());
      if (!engine.hom(cls, p.unit(), p.unit())->stabilized) return {false, name + ": unstable at the default rank bound"};
      PointSet pre = 0;
      for (std::size_t j = 0; j < rho.size(); ++j)
        if (rho[j] < 64 && point_in(u, rho[j])) pre |= 1ULL << j;
      auto ours = engine.end_unit(cls).degree0;
      auto theirs = sr.sections(pre).algebra;
      if (!find_isomorphism(ours, theirs).map) return {false, name + ": end_unit differs from the localization"};
    }
  }
  return {true, std::to_string(opens) + " opens, all isomorphic to the perf-oracle localization and stabilized at rank " +
                    std::to_string(kDefaultRankBound)};
}

Outcome c6() {
  std::size_t records = 0;
  for (const auto& name : perf_builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, Variant::Balmer);
    QuotientEngine engine(p, RoofConfig::defaults(p));
    auto o = structure_sheaf(engine, s);
    auto rep = unit_law_check(engine, s, o);
    records += rep.records.size();
    if (auto c = first_failure(rep)) return {false, name + ": " + describe(*c)};
  }
  return {true, std::to_string(records) + " unit-law comparisons on " + std::to_string(perf_builtin_names().size()) +
                    " builtins"};
}

Outcome c7() {
  std::size_t stalks = 0, ranks = 0, mismatches = 0;
  std::string first;
  for (const auto& name : perf_builtin_names()) {
    const Builtin& b = builtin(name);
    if (b.test_set.size() < 4) return {false, name + " has fewer than 4 test objects"};
    auto rep = reconstruction_check(name);
    for (const auto& c : rep.records) {
      bool relevant = c.kind.rfind("stalk:", 0) == 0 || c.kind.rfind("restriction_rank:", 0) == 0 ||
                      c.kind.rfind("stabilized:", 0) == 0;
      if (!relevant) continue;
      if (c.kind.rfind("stalk:", 0) == 0) ++stalks;
      if (c.kind.rfind("restriction_rank:", 0) == 0) ++ranks;
      if (!c.pass) {
        ++mismatches;
        if (first.empty()) first = name + ": " + describe(c);
      }
    }
  }
  return {mismatches == 0, std::to_string(stalks) + " stalk and " + std::to_string(ranks) + " restriction-rank comparisons, " +
                               std::to_string(mismatches) + " mismatches" + (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome c8() {
  const auto& kxk = builtin("kxk").presentation;
  EquivalenceData f{{1, 0}, {1, 1}};
  auto src = relabel_presentation(kxk, {"Q1", "Q2"}, f);
  auto rep = functor_recovery_check(src, f, "kxk");
  if (auto c = first_failure(rep)) return {false, "relabeled kxk: " + describe(*c)};
  std::string rejected;
  EquivalenceData corrupt{{1, 1}, {1, 1}};
  try {
    functor_recovery_check(src, corrupt, "kxk");
    return {false, "corrupted kxk equivalence accepted"};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidEquivalence) return {false, std::string("wrong error: ") + e.what()};
    rejected = e.what();
  }
  const auto& dn = builtin("dual_numbers").presentation;
  EquivalenceData g{{0, 1}, {0, 0}};
  auto src2 = relabel_presentation(dn, {"A", "B"}, g);
  EquivalenceData shifted{{0, 1}, {0, 1}};
  try {
    functor_recovery_check(src2, shifted, "dual_numbers");
    return {false, "wrong-shift equivalence accepted"};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidEquivalence) return {false, std::string("wrong error: ") + e.what()};
  }
  return {true, std::to_string(rep.records.size()) + " recovery comparisons pass; corrupted map rejected (" + rejected +
                    "); wrong shift rejected"};
}

Outcome c9() {
  std::mt19937_64 rng(2024);
  std::size_t stated = 0, stated_ok = 0, union_ok = 0, other = 0, other_ok = 0;
  std::string counterexample;
  auto zero = [](const ObjectExpr& e) { return e.is_zero(); };
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto s = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui);
    const auto& pr = s.primes;
    other += 2;
    other_ok += (support_Z(pr, {}) == s.space.full()) + (support_Z(pr, oracle::objects(p, 1, 0, 0)) == 0);
    for (int t = 0; t < 100; ++t) {
      auto e1 = oracle::random_family(p, rng), e2 = oracle::random_family(p, rng), e3 = oracle::random_family(p, rng);
      std::vector<ObjectExpr> sums, all = e1;
      for (const auto& a : e1)
        for (const auto& b : e2) sums.push_back(a + b);
      all.insert(all.end(), e2.begin(), e2.end());
      all.insert(all.end(), e3.begin(), e3.end());
      PointSet z1 = support_Z(pr, e1), z2 = support_Z(pr, e2), zs = support_Z(pr, sums);
      ++stated;
      if ((z1 & z2) == zs) {
        ++stated_ok;
      } else if (counterexample.empty() && std::none_of(e1.begin(), e1.end(), zero) &&
                 std::none_of(e2.begin(), e2.end(), zero)) {
        auto show = [&](const std::vector<ObjectExpr>& e) {
          std::string t = "{";
          for (std::size_t i = 0; i < e.size(); ++i) t += (i ? ", " : "") + p.format(e[i]);
          return t + "}";
        };
        counterexample = name + " E1=" + show(e1) + " E2=" + show(e2);
      }
      union_ok += (z1 | z2) == zs;
      ++other;
      other_ok += (z1 & z2 & support_Z(pr, e3)) == support_Z(pr, all);
    }
  }
  std::size_t sheaf_runs = 0, sheaf_ok = 0;
  for (const auto& name : builtin_names()) {
    const auto& p = builtin(name).presentation;
    auto x = compute_spectrum(p, p.has_tensor() ? Variant::Balmer : Variant::Matsui).space;
    for (int t = 0; t < 50; ++t) {
      ++sheaf_runs;
      auto f = random_presheaf(x, p.field(), rng, 0, t % 3 == 0 ? 1 : 0);
      auto sh = sheafify(f);
      auto again = sheafify(sh.sheaf);
      bool ok = check_descent(sh.sheaf).empty();
      for (int d = f.degree_lo(); d <= f.degree_hi(); ++d) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          const Matrix& c = sh.canonical.at({x.minimal_open(i), d});
          if (c.rows() != c.cols() || rank(c) != c.rows()) ok = false;
        }
        for (auto u : x.opens()) {
          const Matrix& c = again.canonical.at({u, d});
          if (c.rows() != c.cols() || rank(c) != c.rows()) ok = false;
        }
      }
      sheaf_ok += ok;
    }
  }
  std::ostringstream d;
  d << "Z(E1) & Z(E2) = Z(E1 + E2) as stated: " << stated_ok << "/" << stated
    << "; union form: " << union_ok << "/" << stated << "; Z(empty), Z(Ob), intersection over families: " << other_ok
    << "/" << other << "; sheafification idempotence and stalk invariance: " << sheaf_ok << "/" << sheaf_runs;
  if (!counterexample.empty()) d << "; counterexample to the stated form: " << counterexample;
  return {stated_ok == stated && other_ok == other && sheaf_ok == sheaf_runs, d.str()};
}

Outcome c10() {
  std::vector<std::string> cmds;
  for (const auto& name : builtin_names()) {
    const std::string b = " --builtin " + name;
    const std::string variant = name == "a2" ? " --variant matsui" : "";
    const std::string obj = name == "a2" ? "S1" : name == "dual_numbers" ? "cone_x" : name == "k" ? "u" : "P1";
    cmds.push_back("validate" + b + " --out json");
    cmds.push_back("spectrum" + b + variant + " --out json");
    cmds.push_back("spectrum" + b + variant + " --out dot");
    cmds.push_back("spectrum" + b + variant);
    cmds.push_back("sheaf" + b + " --out json");
    cmds.push_back("mfun" + b + " --object " + obj + " --out json");
    cmds.push_back("check" + b + " --out json");
    cmds.push_back("emit" + b);
  }
  std::size_t same = 0;
  std::string diff;
  for (const auto& c : cmds) {
    auto a = run_cli(c), b = run_cli(c);
    if (a.code == b.code && a.out == b.out && a.code >= 0) {
      ++same;
    } else if (diff.empty()) {
      diff = c;
    }
  }
  return {same == cmds.size(), std::to_string(same) + "/" + std::to_string(cmds.size()) + " invocations byte-identical" +
                                   (diff.empty() ? "" : " (differs: " + diff + ")")};
}

}  // namespace

int main() {
  auto total = Clock::now();
  criterion(1, "Balmer reconstruction, k x k", 5, c1);
  criterion(2, "Balmer reconstruction, k[x]/(x^2) over F2", 5, c2);
  criterion(3, "A2 Matsui spectrum", 1, c3);
  criterion(4, "prime-check equivalence", 0, c4);
  criterion(5, "backend cross-validation", 0, c5);
  criterion(6, "canonical-functor unit law", 0, c6);
  criterion(7, "stalks and restriction ranks against localized homology", 60, c7);
  criterion(8, "functor recovery", 0, c8);
  criterion(9, "topology identities and sheafification", 0, c9);
  criterion(10, "CLI determinism", 0, c10);
  double s = std::chrono::duration<double>(Clock::now() - total).count();
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << " (" << s << " s)"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
