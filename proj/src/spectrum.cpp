#include "ttg/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "ttg/error.hpp"

namespace ttg {

std::vector<std::size_t> points_of(PointSet s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i)
    if (point_in(s, i)) out.push_back(i);
  return out;
}

namespace {

std::vector<PointSet> lattice_closure(std::set<PointSet> family) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<PointSet> cur(family.begin(), family.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        changed |= family.insert(cur[i] | cur[j]).second;
        changed |= family.insert(cur[i] & cur[j]).second;
      }
  }
  return {family.begin(), family.end()};
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> labels, const std::vector<PointSet>& closed_seeds)
    : labels_(std::move(labels)) {
  if (labels_.size() > kMaxPoints) throw Error(ErrorKind::Unsupported, "finite spaces are limited to 64 points");
  const PointSet full = all_points(labels_.size());
  std::set<PointSet> closed{0, full};
  for (auto c : closed_seeds) closed.insert(c & full);
  for (auto c : lattice_closure(std::move(closed))) opens_.push_back(full & ~c);
  std::sort(opens_.begin(), opens_.end());
  finish();
}

FiniteSpace FiniteSpace::from_opens(std::vector<std::string> labels, std::vector<PointSet> opens) {
  FiniteSpace x;
  x.labels_ = std::move(labels);
  if (x.labels_.size() > kMaxPoints) throw Error(ErrorKind::Unsupported, "finite spaces are limited to 64 points");
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  x.opens_ = std::move(opens);
  x.finish();
  return x;
}

void FiniteSpace::finish() {
  const PointSet full = this->full();
  minimal_open_.assign(labels_.size(), full);
  for (std::size_t x = 0; x < labels_.size(); ++x)
    for (auto u : opens_)
      if (point_in(u, x)) minimal_open_[x] &= u;
  verify_topology(*this);
}

bool FiniteSpace::is_open(PointSet u) const { return std::binary_search(opens_.begin(), opens_.end(), u); }

std::size_t FiniteSpace::open_index(PointSet u) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), u);
  if (it == opens_.end() || *it != u) throw Error(ErrorKind::Schema, "set is not open");
  return static_cast<std::size_t>(it - opens_.begin());
}

PointSet FiniteSpace::closure(PointSet s) const {
  PointSet out = full();
  for (auto u : opens_)
    if ((u & s) == 0) out &= ~u;
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> FiniteSpace::specialization_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < size(); ++x)
    for (std::size_t y = 0; y < size(); ++y)
      if (x != y && specializes(x, y)) out.emplace_back(x, y);
  return out;
}

std::vector<std::vector<PointSet>> FiniteSpace::covers_of(PointSet u, std::size_t limit) const {
  std::vector<PointSet> below;
  for (auto v : opens_)
    if (v != 0 && (v & ~u) == 0) below.push_back(v);
  if (below.size() >= 63 || (std::size_t{1} << below.size()) > limit)
    throw Error(ErrorKind::Unsupported, "too many opens below a set to enumerate its covers");
  std::vector<std::vector<PointSet>> out;
  if (u == 0) {
    out.push_back({});
    return out;
  }
  for (std::uint64_t m = 1; m < (1ULL << below.size()); ++m) {
    PointSet acc = 0;
    std::vector<PointSet> cover;
    for (std::size_t i = 0; i < below.size(); ++i)
      if ((m >> i) & 1ULL) {
        acc |= below[i];
        cover.push_back(below[i]);
      }
    if (acc == u) out.push_back(std::move(cover));
  }
  return out;
}

void verify_topology(const FiniteSpace& x) {
  const auto& o = x.opens();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::TopologyAxiomFailure, what); };
  if (!x.is_open(0)) fail("empty set is not open");
  if (!x.is_open(x.full())) fail("whole space is not open");
  for (auto u : o) {
    if ((u & ~x.full()) != 0) fail("open set mentions a point outside the space");
    for (auto v : o) {
      if (!x.is_open(u | v)) fail("opens not closed under union");
      if (!x.is_open(u & v)) fail("opens not closed under intersection");
    }
  }
  for (std::size_t p = 0; p < x.size(); ++p)
    if (!x.is_open(x.minimal_open(p)) || !point_in(x.minimal_open(p), p)) fail("minimal open is not open");
}

PointSet support_Z(const std::vector<OrbitSet>& primes, const std::vector<ObjectExpr>& e) {
  PointSet out = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    bool disjoint = true;
    for (const auto& obj : e)
      if (obj.belongs_to(primes[i])) disjoint = false;
    if (disjoint) out |= (1ULL << i);
  }
  return out;
}

std::string prime_label(const Presentation& p, OrbitSet s) {
  auto names = orbit_names(p, s);
  if (names.empty()) return "<0>";
  std::string out = "<";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + ">";
}

FiniteSpace build_space(const Presentation& p, const std::vector<OrbitSet>& primes) {
  if (primes.size() > kMaxPoints) throw Error(ErrorKind::Unsupported, "more than 64 primes");
  std::vector<std::string> labels;
  for (auto s : primes) labels.push_back(prime_label(p, s));
  std::vector<PointSet> seeds;
  for (std::size_t a = 0; a < p.orbit_count(); ++a)
    seeds.push_back(support_Z(primes, {ObjectExpr::single(static_cast<int>(a))}));
  return FiniteSpace(std::move(labels), seeds);
}

Spectrum compute_spectrum(const Presentation& p, Variant variant, std::size_t orbit_cap) {
  Spectrum s;
  s.variant = variant;
  if (variant == Variant::Balmer) {
    s.lattice = enumerate_ideals(p, orbit_cap);
    for (auto t : s.lattice.sets)
      if (is_prime_balmer(p, t)) s.primes.push_back(t);
  } else {
    s.lattice = enumerate_thick(p, orbit_cap);
    for (auto t : s.lattice.sets)
      if (is_prime_matsui(s.lattice, t)) s.primes.push_back(t);
  }
  s.space = build_space(p, s.primes);
  return s;
}

nlohmann::json space_json(const FiniteSpace& x) {
  nlohmann::json opens = nlohmann::json::array();
  for (auto u : x.opens()) opens.push_back(points_of(u));
  nlohmann::json spec = nlohmann::json::array();
  for (auto [a, b] : x.specialization_pairs()) spec.push_back({a, b});
  nlohmann::json minimal = nlohmann::json::array();
  for (std::size_t i = 0; i < x.size(); ++i) minimal.push_back(points_of(x.minimal_open(i)));
  return {{"points", x.labels()}, {"opens", opens}, {"specialization", spec}, {"minimal_opens", minimal}};
}

std::string space_dot(const FiniteSpace& x) {
  std::ostringstream out;
  out << "digraph specialization {\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << "  p" << i << " [label=\"" << x.labels()[i] << "\"];\n";
  for (auto [a, b] : x.specialization_pairs()) out << "  p" << a << " -> p" << b << ";\n";
  out << "}\n";
  return out.str();
}

nlohmann::json spectrum_json(const Presentation& p, const Spectrum& s) {
  nlohmann::json primes = nlohmann::json::array();
  for (auto t : s.primes) primes.push_back(orbit_names(p, t));
  nlohmann::json doc = space_json(s.space);
  doc["variant"] = s.variant == Variant::Balmer ? "balmer" : "matsui";
  doc["primes"] = primes;
  doc["lattice"] = lattice_json(p, s.lattice);
  return doc;
}

}  // namespace ttg
