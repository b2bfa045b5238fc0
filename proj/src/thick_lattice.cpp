#include "ttg/thick_lattice.hpp"

#include <algorithm>
#include <sstream>

#include "ttg/error.hpp"

namespace ttg {

OrbitSet thick_closure(const Presentation& p, OrbitSet g) {
  OrbitSet cur = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : p.triangles()) {
      OrbitSet sx = t.x.support(), sy = t.y.support(), sz = t.z.support();
      bool ix = sx.subset_of(cur), iy = sy.subset_of(cur), iz = sz.subset_of(cur);
      if (ix + iy + iz != 2) continue;
      cur = cur | sx | sy | sz;
      changed = true;
    }
  }
  return cur;
}

OrbitSet ideal_closure(const Presentation& p, OrbitSet g) {
  const auto& table = p.tensor_table();
  const std::size_t n = p.orbit_count();
  OrbitSet cur = g;
  while (true) {
    OrbitSet next = thick_closure(p, cur);
    for (std::size_t a = 0; a < n; ++a) {
      if (!next.contains(a)) continue;
      for (std::size_t b = 0; b < n; ++b) next = next | table.products[a][b].support();
    }
    if (next == cur) return cur;
    cur = next;
  }
}

std::vector<OrbitSet> next_closure_all(std::size_t n, const ClosureOperator& close) {
  std::vector<OrbitSet> out;
  OrbitSet a = close(OrbitSet());
  out.push_back(a);
  const OrbitSet full = OrbitSet::all(n);
  while (a != full) {
    bool advanced = false;
    for (std::size_t k = n; k-- > 0;) {
      if (a.contains(k)) continue;
      std::uint64_t below = (k == 0) ? 0 : (a.bits() & ((1ULL << k) - 1));
      OrbitSet b = close(OrbitSet(below | (1ULL << k)));
      std::uint64_t mask = (k == 0) ? 0 : ((1ULL << k) - 1);
      if ((b.bits() & mask) == below) {
        a = b;
        out.push_back(a);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

std::optional<std::size_t> ThickLattice::index_of(OrbitSet s) const {
  auto it = std::lower_bound(sets.begin(), sets.end(), s);
  if (it == sets.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - sets.begin());
}

ThickLattice make_lattice(std::vector<OrbitSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  ThickLattice l;
  l.sets = std::move(sets);
  for (std::size_t i = 0; i < l.sets.size(); ++i)
    for (std::size_t j = 0; j < l.sets.size(); ++j) {
      if (i == j || !l.sets[i].subset_of(l.sets[j])) continue;
      bool cover = true;
      for (std::size_t k = 0; k < l.sets.size() && cover; ++k)
        if (k != i && k != j && l.sets[i].subset_of(l.sets[k]) && l.sets[k].subset_of(l.sets[j])) cover = false;
      if (cover) l.covers.emplace_back(i, j);
    }
  return l;
}

namespace {

void check_cap(const Presentation& p, std::size_t cap) {
  if (p.orbit_count() > cap)
    throw Error(ErrorKind::TooManyOrbits, std::to_string(p.orbit_count()) + " orbits exceed the cap of " +
                                              std::to_string(cap));
}

}  // namespace

ThickLattice enumerate_thick(const Presentation& p, std::size_t orbit_cap) {
  check_cap(p, orbit_cap);
  return make_lattice(next_closure_all(p.orbit_count(), [&](OrbitSet g) { return thick_closure(p, g); }));
}

ThickLattice enumerate_ideals(const Presentation& p, std::size_t orbit_cap) {
  check_cap(p, orbit_cap);
  p.tensor_table();
  return make_lattice(next_closure_all(p.orbit_count(), [&](OrbitSet g) { return ideal_closure(p, g); }));
}

bool is_prime_balmer(const Presentation& p, OrbitSet s) {
  if (ideal_closure(p, s) != s) throw Error(ErrorKind::NotAnIdeal, "set is not a thick tensor ideal");
  const std::size_t n = p.orbit_count();
  if (s == p.all_orbits()) return false;
  const auto& table = p.tensor_table();
  for (std::size_t a = 0; a < n; ++a) {
    if (s.contains(a)) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (s.contains(b)) continue;
      if (table.products[a][b].belongs_to(s)) return false;
    }
  }
  return true;
}

bool is_prime_matsui(const ThickLattice& lattice, OrbitSet s) {
  if (!lattice.contains(s)) throw Error(ErrorKind::NotInLattice, "set is not in the thick lattice");
  std::vector<OrbitSet> minimal;
  for (auto t : lattice.sets) {
    if (t == s || !s.subset_of(t)) continue;
    bool is_min = true;
    for (auto u : lattice.sets)
      if (u != s && u != t && s.subset_of(u) && u.subset_of(t)) is_min = false;
    if (is_min) minimal.push_back(t);
  }
  return minimal.size() == 1;
}

std::vector<std::string> orbit_names(const Presentation& p, OrbitSet s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.orbit_count(); ++i)
    if (s.contains(i)) out.push_back(p.orbits()[i]);
  return out;
}

nlohmann::json lattice_json(const Presentation& p, const ThickLattice& lattice) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < lattice.sets.size(); ++i) {
    auto s = lattice.sets[i];
    nlohmann::json node = {{"id", i}, {"orbits", orbit_names(p, s)}};
    if (p.has_tensor() && ideal_closure(p, s) == s)
      node["prime_balmer"] = is_prime_balmer(p, s);
    else
      node["prime_balmer"] = nullptr;
    node["prime_matsui"] = is_prime_matsui(lattice, s);
    nodes.push_back(node);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : lattice.covers) edges.push_back({i, j});
  return {{"nodes", nodes}, {"edges", edges}};
}

std::string lattice_dot(const Presentation& p, const ThickLattice& lattice) {
  std::ostringstream out;
  out << "digraph lattice {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < lattice.sets.size(); ++i) {
    auto names = orbit_names(p, lattice.sets[i]);
    std::string label = "{";
    for (std::size_t k = 0; k < names.size(); ++k) label += (k ? "," : "") + names[k];
    label += "}";
    out << "  n" << i << " [label=\"" << label << "\"];\n";
  }
  for (auto [i, j] : lattice.covers) out << "  n" << i << " -> n" << j << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ttg
