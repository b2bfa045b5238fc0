#include "ttg/canonical_functor.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ttg/error.hpp"
#include "ttg/perf_oracle.hpp"

namespace ttg {

FunctorImage m_object(const QuotientEngine& engine, const Spectrum& spec, const StructureSheaf& o, const ObjectExpr& e) {
  const Presentation& p = engine.presentation();
  const FiniteSpace& x = spec.space;
  const int lo = engine.config().degree_lo, hi = engine.config().degree_hi;
  const ObjectExpr& unit = p.unit();
  FunctorImage img;
  img.source = e;
  img.presheaf = Presheaf(x, p.field(), lo, hi);
  img.stabilized.assign(x.opens().size(), true);

  std::map<std::pair<PointSet, int>, std::shared_ptr<const QuotientHom>> homs;
  for (auto u : x.opens()) {
    OrbitSet cls = o.classes[x.open_index(u)];
    for (int d = lo; d <= hi; ++d) {
      try {
        auto h = engine.hom(cls, unit, e.shifted(d));
        homs[{u, d}] = h;
        img.presheaf.set_dim(u, d, h->dim());
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::NotStabilized) throw;
        img.stabilized[x.open_index(u)] = false;
        img.unstable.push_back(std::string("open {") + [&] {
          std::string s;
          for (const auto& l : open_labels(x, u)) s += (s.empty() ? "" : ",") + l;
          return s;
        }() + "}: " + err.what());
      }
    }
  }
  for (auto u : x.opens())
    for (int d = lo; d <= hi; ++d) {
      auto it = homs.find({u, d});
      if (it == homs.end()) continue;
      const OrbitSet cls = o.classes[x.open_index(u)];
      for (auto v : x.opens()) {
        if (v == u || (v & ~u) != 0 || !homs.count({v, d})) continue;
        img.presheaf.set_restriction(u, v, d, engine.restriction(cls, o.classes[x.open_index(v)], unit, e.shifted(d)));
      }
      auto ring = engine.hom(cls, unit, unit);
      std::vector<Matrix> acts;
      for (const Roof& a : ring->basis()) {
        Matrix m(p.field(), it->second->dim(), it->second->dim());
        for (std::size_t c = 0; c < it->second->dim(); ++c)
          m.set_column(c, it->second->coords(engine.compose(cls, unit, unit, a, it->second->basis(c))));
        acts.push_back(std::move(m));
      }
      img.presheaf.set_action(u, d, std::move(acts));
    }
  for (auto u : x.opens())
    for (int d = lo; d <= hi; ++d)
      if (!homs.count({u, d})) {
        auto ring = engine.hom(o.classes[x.open_index(u)], unit, unit);
        img.presheaf.set_action(u, d, std::vector<Matrix>(ring->dim(), Matrix(p.field(), 0, 0)));
      }
  img.module = sheafify(img.presheaf, &o.sheaf);
  return img;
}

nlohmann::json functor_image_json(const Presentation& p, const FunctorImage& img) {
  const auto& sheaf = img.module.sheaf;
  const auto& x = sheaf.space();
  nlohmann::json j = sheaf_json(sheaf);
  j["object"] = p.format(img.source);
  nlohmann::json stalks = nlohmann::json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    nlohmann::json dims = nlohmann::json::object();
    for (int d = sheaf.degree_lo(); d <= sheaf.degree_hi(); ++d)
      if (auto n = sheaf.dim(x.minimal_open(i), d)) dims[std::to_string(d)] = n;
    stalks.push_back({{"point", x.labels()[i]}, {"dims", dims}});
  }
  j["stalks"] = stalks;
  nlohmann::json actions = nlohmann::json::array();
  for (auto u : x.opens())
    for (int d = sheaf.degree_lo(); d <= sheaf.degree_hi(); ++d) {
      if (sheaf.dim(u, d) == 0) continue;
      nlohmann::json mats = nlohmann::json::array();
      for (const auto& m : sheaf.action(u, d)) mats.push_back(matrix_json(m));
      actions.push_back({{"open", open_labels(x, u)}, {"degree", d}, {"matrices", mats}});
    }
  j["actions"] = actions;
  nlohmann::json flags = nlohmann::json::array();
  for (auto u : x.opens()) flags.push_back({{"open", open_labels(x, u)}, {"stabilized", bool(img.stabilized[x.open_index(u)])}});
  j["stabilized"] = flags;
  j["provisional"] = img.provisional();
  return j;
}

bool Report::pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Comparison& c) { return !c.pass; }));
}

void Report::add(std::string kind, std::vector<std::string> open, int degree, long long lhs, long long rhs, bool pass) {
  records.push_back(Comparison{std::move(kind), std::move(open), degree, lhs, rhs, pass});
}

void Report::append(const Report& other) { records.insert(records.end(), other.records.begin(), other.records.end()); }

nlohmann::json Report::json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& c : records)
    recs.push_back({{"kind", c.kind}, {"open", c.open}, {"degree", c.degree}, {"lhs_dim", c.lhs}, {"rhs_dim", c.rhs}, {"pass", c.pass}});
  return {{"records", recs}, {"pass", pass()}};
}

std::string Report::text() const {
  std::ostringstream os;
  for (const auto& c : records) {
    os << (c.pass ? "ok   " : "FAIL ") << c.kind << " {";
    for (std::size_t i = 0; i < c.open.size(); ++i) os << (i ? "," : "") << c.open[i];
    os << "} degree " << c.degree << ": " << c.lhs << " vs " << c.rhs << "\n";
  }
  os << records.size() << " comparisons, " << failures() << " failed\n";
  return os.str();
}

Report unit_law_check(const QuotientEngine& engine, const Spectrum& spec, const StructureSheaf& o) {
  const Presentation& p = engine.presentation();
  const FiniteSpace& x = spec.space;
  const Field k = p.field();
  FunctorImage img = m_object(engine, spec, o, p.unit());
  const Presheaf& m = img.module.sheaf;
  const Presheaf& ring = o.sheaf.sheaf;
  Report rep;
  for (auto u : x.opens()) {
    auto labels = open_labels(x, u);
    const CommAlgebra& a = ring.ring(u);
    rep.add("unit_law_dim", labels, 0, static_cast<long long>(m.dim(u, 0)), static_cast<long long>(a.dim()));
    for (int d = m.degree_lo(); d <= m.degree_hi(); ++d)
      if (d != 0) rep.add("unit_law_vanishing", labels, d, static_cast<long long>(m.dim(u, d)), 0);
    if (m.dim(u, 0) != a.dim()) continue;
    // Identity roofs give the section 1 of m(1) over u.
    const OrbitSet cls = o.classes[x.open_index(u)];
    auto h0 = engine.hom(cls, p.unit(), p.unit());
    auto sys = engine.system(cls, p.unit().slots(), engine.config().rank_bound);
    Vec pre_one = h0->coords(Roof{sys->identity_index(), Morphism::identity(p, p.unit().slots())});
    Vec one = img.module.canonical.at({u, 0}) * pre_one;
    const auto& act = m.action(u, 0);
    const std::size_t n = a.dim();
    Matrix phi(k, n, n);
    for (std::size_t i = 0; i < n; ++i) phi.set_column(i, act[i] * one);
    bool iso = rank(phi) == n;
    bool linear = true;
    for (std::size_t i = 0; i < n && iso; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(phi * a.product(i, j) == act[i] * phi.column(j))) linear = false;
    rep.add("unit_law_iso", labels, 0, iso ? 1 : 0, 1);
    rep.add("unit_law_action", labels, 0, linear ? 1 : 0, 1);
  }
  return rep;
}

std::vector<std::size_t> comparison_map(const Builtin& b, const Spectrum& spec, const SpecRing& sr) {
  const ChainModel& model = *b.model;
  const CommAlgebra& r = model.ring();
  std::vector<std::size_t> out;
  for (const auto& e : sr.idempotents) {
    OrbitSet killed;
    for (std::size_t a = 0; a < model.orbits().size(); ++a)
      if (is_acyclic(r, localize(r, model.orbits()[a].complex, e))) killed.insert(a);
    auto it = std::find(spec.primes.begin(), spec.primes.end(), killed);
    out.push_back(it == spec.primes.end() ? spec.primes.size() : static_cast<std::size_t>(it - spec.primes.begin()));
  }
  return out;
}

namespace {

// Idempotent of Spec R supported on the preimage of a Balmer open.
Vec idempotent_over(const SpecRing& sr, const std::vector<std::size_t>& rho, PointSet u) {
  PointSet pre = 0;
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (rho[j] < 64 && point_in(u, rho[j])) pre |= 1ULL << j;
  return sr.idempotent_of(pre);
}

// Rank of H^d(1, C e_u) -> H^d(1, C e_v), the map being multiplication by e_v.
std::size_t oracle_restriction_rank(const CommAlgebra& r, const ProjComplex& c, const Vec& eu, const Vec& ev, int d) {
  ProjComplex one = unit_complex(r);
  ProjComplex cu = localize(r, c, eu), cv = localize(r, c, ev);
  HomComplex hu(r, one, cu), hv(r, one, cv);
  Homology su = hu.homology(d), sv = hv.homology(d);
  if (su.dim() == 0 || sv.dim() == 0) return 0;
  ChainMap mu;
  for (int q = cu.lo(); q <= cu.hi() && !cu.empty(); ++q) mu.comps[q] = RMatrix::scalar(r, cu.rank(q), ev);
  Matrix m(r.field(), sv.dim(), su.dim());
  for (std::size_t i = 0; i < su.dim(); ++i) {
    ChainMap g = hu.from_coords(d, su.reps()[i]);
    ChainMap h = compose(r, one, cu, cv, mu, g);
    m.set_column(i, sv.coords(hv.to_coords(h)));
  }
  return rank(m);
}

void compare_image(Report& rep, const std::string& label, const FunctorImage& img, const CommAlgebra& r,
                   const ProjComplex& c, const SpecRing& sr, const std::vector<std::size_t>& rho, bool stalks_only) {
  const Presheaf& m = img.module.sheaf;
  const FiniteSpace& x = m.space();
  if (img.provisional()) rep.add("stabilized:" + label, {}, 0, 0, 1, false);
  ProjComplex one = unit_complex(r);
  std::vector<PointSet> where;
  if (stalks_only)
    for (std::size_t i = 0; i < x.size(); ++i) where.push_back(x.minimal_open(i));
  else
    where = x.opens();
  for (auto u : where) {
    Vec e = idempotent_over(sr, rho, u);
    ProjComplex cu = localize(r, c, e);
    for (int d = m.degree_lo(); d <= m.degree_hi(); ++d)
      rep.add((stalks_only ? "stalk:" : "sections:") + label, open_labels(x, u), d, static_cast<long long>(m.dim(u, d)),
              static_cast<long long>(chain_hom_dim(r, one, cu, d)));
  }
  for (auto u : x.opens())
    for (auto v : x.opens()) {
      if (v == u || v == 0 || (v & ~u) != 0) continue;
      Vec eu = idempotent_over(sr, rho, u), ev = idempotent_over(sr, rho, v);
      for (int d = m.degree_lo(); d <= m.degree_hi(); ++d) {
        if (m.dim(u, d) == 0 && m.dim(v, d) == 0) continue;
        auto labels = open_labels(x, u);
        labels.push_back("->");
        for (auto& l : open_labels(x, v)) labels.push_back(l);
        rep.add("restriction_rank:" + label, labels, d, static_cast<long long>(rank(m.restriction(u, v, d))),
                static_cast<long long>(oracle_restriction_rank(r, c, eu, ev, d)));
      }
    }
}

RoofConfig config_for(const Presentation& p, const std::optional<RoofConfig>& cfg) {
  return cfg ? *cfg : RoofConfig::defaults(p);
}

}  // namespace

Report reconstruction_check(const std::string& name, std::uint32_t characteristic, const std::optional<RoofConfig>& cfg) {
  const Builtin& b = builtin(name, characteristic);
  if (!b.model) throw Error(ErrorKind::UnsupportedRing, name + " is not of the form Perf(R)");
  const Presentation& p = b.presentation;
  const CommAlgebra& r = b.model->ring();
  Spectrum spec = compute_spectrum(p, Variant::Balmer);
  QuotientEngine engine(p, config_for(p, cfg));
  StructureSheaf o = structure_sheaf(engine, spec);
  SpecRing sr = spec_ring(r);
  auto rho = comparison_map(b, spec, sr);
  const FiniteSpace& x = spec.space;
  Report rep;

  bool bijective = rho.size() == x.size();
  for (std::size_t j = 0; j < rho.size() && bijective; ++j)
    if (rho[j] >= x.size() || std::count(rho.begin(), rho.end(), rho[j]) != 1) bijective = false;
  rep.add("points", {}, 0, static_cast<long long>(x.size()), static_cast<long long>(sr.space.size()), bijective);
  if (!bijective) return rep;

  bool homeo = x.opens().size() == sr.space.opens().size();
  for (auto v : sr.space.opens()) {
    PointSet img = 0;
    for (auto j : points_of(v)) img |= 1ULL << rho[j];
    if (!x.is_open(img)) homeo = false;
  }
  rep.add("homeomorphism", {}, 0, static_cast<long long>(x.opens().size()), static_cast<long long>(sr.space.opens().size()),
          homeo);

  for (auto u : x.opens()) {
    const CommAlgebra& a = o.sheaf.sheaf.ring(u);
    Corner c = sr.sections([&] {
      PointSet pre = 0;
      for (std::size_t j = 0; j < rho.size(); ++j)
        if (point_in(u, rho[j])) pre |= 1ULL << j;
      return pre;
    }());
    IsoResult iso = find_isomorphism(a, c.algebra);
    rep.add("section_ring", open_labels(x, u), 0, static_cast<long long>(a.dim()), static_cast<long long>(c.algebra.dim()),
            iso.map.has_value());
  }

  for (const auto& t : b.test_set) {
    ObjectExpr e = p.parse(t.expr, &b.aliases);
    FunctorImage img = m_object(engine, spec, o, e);
    compare_image(rep, t.label, img, r, t.chain(*b.model), sr, rho, true);
  }
  return rep;
}

EquivalenceData parse_equivalence(const nlohmann::json& doc, const Presentation& src, const Presentation& target) {
  if (!doc.is_object() || !doc.contains("orbit_map") || !doc["orbit_map"].is_object())
    throw Error(ErrorKind::Schema, "equivalence needs an \"orbit_map\" object");
  EquivalenceData f;
  f.orbit_map.assign(src.orbit_count(), -1);
  f.shift.assign(src.orbit_count(), 0);
  for (const auto& [from, to] : doc["orbit_map"].items()) {
    auto a = src.find_orbit(from);
    if (!a) throw Error(ErrorKind::Schema, "unknown source orbit " + from);
    if (!to.is_string()) throw Error(ErrorKind::Schema, "orbit_map values must be orbit names");
    auto b = target.find_orbit(to.get<std::string>());
    if (!b) throw Error(ErrorKind::Schema, "unknown target orbit " + to.get<std::string>());
    f.orbit_map[static_cast<std::size_t>(*a)] = *b;
  }
  for (int v : f.orbit_map)
    if (v < 0) throw Error(ErrorKind::Schema, "orbit_map must cover every source orbit");
  if (doc.contains("shift")) {
    if (!doc["shift"].is_object()) throw Error(ErrorKind::Schema, "\"shift\" must be an object");
    for (const auto& [from, s] : doc["shift"].items()) {
      auto a = src.find_orbit(from);
      if (!a) throw Error(ErrorKind::Schema, "unknown source orbit " + from);
      if (!s.is_number_integer()) throw Error(ErrorKind::Schema, "shifts must be integers");
      f.shift[static_cast<std::size_t>(*a)] = s.get<int>();
    }
  }
  return f;
}

ObjectExpr apply_equivalence(const EquivalenceData& f, const ObjectExpr& e) {
  std::vector<ObjectExpr::Term> terms;
  for (const auto& t : e.terms()) {
    auto i = static_cast<std::size_t>(t.orbit);
    terms.push_back({f.orbit_map.at(i), t.shift + f.shift.at(i), t.multiplicity});
  }
  return ObjectExpr(std::move(terms));
}

namespace {

std::vector<int> inverse_map(const EquivalenceData& f, std::size_t target_orbits) {
  std::vector<int> inv(target_orbits, -1);
  for (std::size_t i = 0; i < f.orbit_map.size(); ++i) {
    int t = f.orbit_map[i];
    if (t < 0 || static_cast<std::size_t>(t) >= target_orbits || inv[static_cast<std::size_t>(t)] != -1)
      throw Error(ErrorKind::InvalidEquivalence, "orbit map is not a bijection");
    inv[static_cast<std::size_t>(t)] = static_cast<int>(i);
  }
  for (int v : inv)
    if (v < 0) throw Error(ErrorKind::InvalidEquivalence, "orbit map is not a bijection");
  return inv;
}

ObjectExpr pull_back(const EquivalenceData& f, const std::vector<int>& inv, const ObjectExpr& e) {
  std::vector<ObjectExpr::Term> terms;
  for (const auto& t : e.terms()) {
    int i = inv.at(static_cast<std::size_t>(t.orbit));
    terms.push_back({i, t.shift - f.shift[static_cast<std::size_t>(i)], t.multiplicity});
  }
  return ObjectExpr(std::move(terms));
}

int max_shift_gap(const EquivalenceData& f) {
  if (f.shift.empty()) return 0;
  auto [lo, hi] = std::minmax_element(f.shift.begin(), f.shift.end());
  return *hi - *lo;
}

}  // namespace

Presentation relabel_presentation(const Presentation& target, const std::vector<std::string>& names,
                                  const EquivalenceData& f) {
  if (names.size() != target.orbit_count() || f.orbit_map.size() != names.size() || f.shift.size() != names.size())
    throw Error(ErrorKind::InvalidEquivalence, "equivalence data has the wrong size");
  auto inv = inverse_map(f, target.orbit_count());
  const int gap = max_shift_gap(f);
  Presentation src(target.field(), names, target.window_lo() - gap, target.window_hi() + gap);

  std::vector<std::size_t> basis_map(target.basis().size());
  std::size_t next = 0;
  for (const auto& [key, ids] : target.homs()) {
    const int a = inv[static_cast<std::size_t>(key.src)], b = inv[static_cast<std::size_t>(key.dst)];
    const int d = key.degree - f.shift[static_cast<std::size_t>(b)] + f.shift[static_cast<std::size_t>(a)];
    std::vector<std::string> bn;
    for (std::size_t k = 0; k < ids.size(); ++k)
      bn.push_back(names[static_cast<std::size_t>(a)] + "." + names[static_cast<std::size_t>(b)] + "." + std::to_string(d) +
                   "." + std::to_string(k));
    src.add_hom(a, b, d, bn);
    for (auto id : ids) basis_map[id] = next++;
  }
  for (const auto& [gf, res] : target.compositions()) {
    SparseVec out;
    for (const auto& t : res) out.push_back({basis_map[t.basis], t.coeff});
    src.set_composition(basis_map[gf.first], basis_map[gf.second], std::move(out));
  }

  auto translate = [&](const Morphism& m, const ObjectExpr& from, const ObjectExpr& to) {
    auto slots_of = [&](const SlotList& s) {
      SlotList out;
      for (const auto& x : s) {
        int i = inv[static_cast<std::size_t>(x.orbit)];
        out.push_back({i, x.shift - f.shift[static_cast<std::size_t>(i)]});
      }
      return out;
    };
    SlotList ms = slots_of(m.src()), md = slots_of(m.dst());
    SlotList cs = from.slots(), cd = to.slots();
    auto match = [](const SlotList& canon, const SlotList& raw) {
      std::vector<std::size_t> idx;
      std::vector<bool> used(raw.size(), false);
      for (const auto& s : canon)
        for (std::size_t i = 0; i < raw.size(); ++i)
          if (!used[i] && raw[i] == s) {
            used[i] = true;
            idx.push_back(i);
            break;
          }
      if (idx.size() != canon.size()) throw Error(ErrorKind::InvalidEquivalence, "triangle does not transport");
      return idx;
    };
    auto ps = match(cs, ms), pd = match(cd, md);
    Morphism out(src, cs, cd);
    for (std::size_t j = 0; j < cd.size(); ++j)
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto from_blk = m.block(pd[j], ps[i]);
        auto to_blk = out.block(j, i);
        std::copy(from_blk.begin(), from_blk.end(), to_blk.begin());
      }
    return out;
  };
  for (const auto& t : target.triangles()) {
    Triangle s;
    s.x = pull_back(f, inv, t.x);
    s.y = pull_back(f, inv, t.y);
    s.z = pull_back(f, inv, t.z);
    s.f = translate(t.f, s.x, s.y);
    s.g = translate(t.g, s.y, s.z);
    s.h = translate(t.h, s.z, s.x.shifted(1));
    src.add_triangle(std::move(s));
  }
  src.finalize();
  src.metadata = {{"relabeled_from", target.metadata.value("name", std::string())}};
  return src;
}

void check_equivalence(const Presentation& src, const Presentation& target, const EquivalenceData& f) {
  if (src.orbit_count() != target.orbit_count() || f.orbit_map.size() != src.orbit_count() ||
      f.shift.size() != src.orbit_count())
    throw Error(ErrorKind::InvalidEquivalence, "equivalence data has the wrong size");
  inverse_map(f, target.orbit_count());
  const int gap = max_shift_gap(f);
  const int lo = std::min(src.window_lo(), target.window_lo()) - gap;
  const int hi = std::max(src.window_hi(), target.window_hi()) + gap;
  for (std::size_t a = 0; a < src.orbit_count(); ++a)
    for (std::size_t b = 0; b < src.orbit_count(); ++b)
      for (int d = lo; d <= hi; ++d) {
        const int ai = static_cast<int>(a), bi = static_cast<int>(b);
        std::size_t ls = src.hom_basis(ai, bi, d).size();
        std::size_t lt = target.hom_basis(f.orbit_map[a], f.orbit_map[b], d + f.shift[b] - f.shift[a]).size();
        if (ls != lt)
          throw Error(ErrorKind::InvalidEquivalence,
                      "Hom^" + std::to_string(d) + "(" + src.orbits()[a] + ", " + src.orbits()[b] + ") has dimension " +
                          std::to_string(ls) + " but its image Hom^" + std::to_string(d + f.shift[b] - f.shift[a]) + "(" +
                          target.orbits()[static_cast<std::size_t>(f.orbit_map[a])] + ", " +
                          target.orbits()[static_cast<std::size_t>(f.orbit_map[b])] + ") has dimension " +
                          std::to_string(lt));
      }
}

TensorTable pulled_back_tensor(const Presentation& src, const Presentation& target, const EquivalenceData& f) {
  auto inv = inverse_map(f, target.orbit_count());
  TensorTable t;
  t.unit = pull_back(f, inv, target.unit());
  const std::size_t n = src.orbit_count();
  t.products.assign(n, std::vector<ObjectExpr>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      ObjectExpr img = tensor(target, apply_equivalence(f, ObjectExpr::single(static_cast<int>(a))),
                              apply_equivalence(f, ObjectExpr::single(static_cast<int>(b))));
      t.products[a][b] = pull_back(f, inv, img);
    }
  return t;
}

Report functor_recovery_check(const Presentation& src_in, const EquivalenceData& f, const std::string& target,
                              std::uint32_t characteristic, const std::optional<RoofConfig>& cfg) {
  const Builtin& b = builtin(target, characteristic);
  if (!b.model) throw Error(ErrorKind::UnsupportedRing, target + " is not of the form Perf(R)");
  const Presentation& tp = b.presentation;
  check_equivalence(src_in, tp, f);
  Presentation src = src_in;
  src.set_tensor(pulled_back_tensor(src, tp, f));
  auto v = validate(src);
  if (!v.ok())
    throw Error(ErrorKind::InvalidEquivalence, "pulled-back tensor fails validation: " + v.violations.front().kind + ": " +
                                                   v.violations.front().detail);

  const CommAlgebra& r = b.model->ring();
  Spectrum spec = compute_spectrum(src, Variant::Balmer);
  Spectrum tspec = compute_spectrum(tp, Variant::Balmer);
  QuotientEngine engine(src, config_for(src, cfg));
  StructureSheaf o = structure_sheaf(engine, spec);
  SpecRing sr = spec_ring(r);
  auto trho = comparison_map(b, tspec, sr);

  // Source point i -> target point with prime F(P_i) -> Spec R point.
  std::vector<std::size_t> rho(trho.size(), spec.primes.size());
  for (std::size_t j = 0; j < trho.size(); ++j) {
    if (trho[j] >= tspec.primes.size()) continue;
    OrbitSet tprime = tspec.primes[trho[j]];
    OrbitSet sprime;
    for (std::size_t a = 0; a < src.orbit_count(); ++a)
      if (tprime.contains(static_cast<std::size_t>(f.orbit_map[a]))) sprime.insert(a);
    auto it = std::find(spec.primes.begin(), spec.primes.end(), sprime);
    if (it != spec.primes.end()) rho[j] = static_cast<std::size_t>(it - spec.primes.begin());
  }
  Report rep;
  bool bijective = rho.size() == spec.primes.size();
  for (std::size_t j = 0; j < rho.size() && bijective; ++j)
    if (rho[j] >= spec.primes.size() || std::count(rho.begin(), rho.end(), rho[j]) != 1) bijective = false;
  rep.add("points", {}, 0, static_cast<long long>(spec.primes.size()), static_cast<long long>(sr.space.size()), bijective);
  if (!bijective) return rep;

  for (std::size_t a = 0; a < src.orbit_count(); ++a) {
    ObjectExpr e = ObjectExpr::single(static_cast<int>(a));
    FunctorImage img = m_object(engine, spec, o, e);
    ProjComplex c = b.model->realize(apply_equivalence(f, e));
    compare_image(rep, src.orbits()[a], img, r, c, sr, rho, false);
  }
  return rep;
}

}  // namespace ttg
