#include "ttg/chain_model.hpp"

#include <algorithm>
#include <functional>

#include "ttg/error.hpp"

namespace ttg {

ChainModel::ChainModel(CommAlgebra r, std::vector<OrbitModel> orbits, int window_lo, int window_hi)
    : r_(std::move(r)), orbits_(std::move(orbits)), window_lo_(window_lo), window_hi_(window_hi) {
  for (const auto& o : orbits_) o.complex.validate(r_);
}

std::vector<std::string> ChainModel::orbit_names() const {
  std::vector<std::string> out;
  for (const auto& o : orbits_) out.push_back(o.name);
  return out;
}

const HomComplex& ChainModel::hom_complex(int a, int b) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = homs_[{a, b}];
  if (!slot)
    slot = std::make_unique<HomComplex>(r_, orbits_.at(static_cast<std::size_t>(a)).complex,
                                        orbits_.at(static_cast<std::size_t>(b)).complex);
  return *slot;
}

const Homology& ChainModel::homology(int a, int b, int d) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = homology_.find({a, b, d});
    if (it != homology_.end()) return *it->second;
  }
  const HomComplex& h = hom_complex(a, b);
  std::optional<Vec> preferred;
  if (a == b && d == 0) preferred = h.to_coords(identity_map(r_, h.source()));
  auto value = std::make_unique<Homology>(h.homology(d, preferred));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = homology_[{a, b, d}];
  if (!slot) slot = std::move(value);
  return *slot;
}

ProjComplex ChainModel::realize(const SlotList& slots) const {
  ProjComplex out;
  for (const auto& s : slots)
    out = direct_sum(r_, out, shift(r_, orbits_.at(static_cast<std::size_t>(s.orbit)).complex, s.shift));
  return out;
}

std::size_t ChainModel::offset(const SlotList& slots, std::size_t i, int q) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += orbits_[static_cast<std::size_t>(slots[j].orbit)].complex.rank(q + slots[j].shift);
  return off;
}

std::pair<int, int> ChainModel::probe_range() const {
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto& a : orbits_)
    for (const auto& b : orbits_) {
      if (a.complex.empty() || b.complex.empty()) continue;
      int l = b.complex.lo() - a.complex.hi(), h = b.complex.hi() - a.complex.lo();
      lo = any ? std::min(lo, l) : l;
      hi = any ? std::max(hi, h) : h;
      any = true;
    }
  return {lo, hi};
}

ChainMap ChainModel::assemble(const SlotList& src, const SlotList& dst,
                              const std::vector<std::tuple<std::size_t, std::size_t, ChainMap>>& blocks) const {
  ProjComplex x = realize(src), y = realize(dst);
  ChainMap out;
  if (x.empty()) return out;
  for (int q = x.lo(); q <= x.hi(); ++q) out.comps[q] = RMatrix::zero(r_, y.rank(q), x.rank(q));
  for (const auto& [j, i, g] : blocks) {
    const auto& a = orbits_[static_cast<std::size_t>(src[i].orbit)].complex;
    const auto& b = orbits_[static_cast<std::size_t>(dst[j].orbit)].complex;
    const int s = src[i].shift;
    for (int q = x.lo(); q <= x.hi(); ++q) {
      if (a.rank(q + s) == 0 || b.rank(q + dst[j].shift) == 0) continue;
      place(out.comps[q], g.component(r_, a, b, q + s), offset(dst, j, q), offset(src, i, q));
    }
  }
  return out;
}

ChainMap ChainModel::lift(const Presentation& p, const Morphism& m) const {
  std::vector<std::tuple<std::size_t, std::size_t, ChainMap>> blocks;
  for (std::size_t j = 0; j < m.dst().size(); ++j)
    for (std::size_t i = 0; i < m.src().size(); ++i) {
      if (m.block_size(j, i) == 0) continue;
      const int a = m.src()[i].orbit, b = m.dst()[j].orbit, d = m.dst()[j].shift - m.src()[i].shift;
      const HomComplex& h = hom_complex(a, b);
      const Homology& hom = homology(a, b, d);
      auto blk = m.block(j, i);
      if (blk.size() != hom.dim()) throw Error(ErrorKind::Schema, "presentation does not match the chain model");
      Vec g = zeros(r_.field(), h.ambient_dim(d));
      for (std::size_t k = 0; k < blk.size(); ++k) axpy(g, blk[k], hom.reps()[k]);
      blocks.emplace_back(j, i, h.from_coords(d, g));
    }
  (void)p;
  return assemble(m.src(), m.dst(), blocks);
}

Morphism ChainModel::to_morphism(const Presentation& p, const ChainMap& g, const SlotList& src,
                                 const SlotList& dst) const {
  Morphism m(p, src, dst);
  const ProjComplex x = realize(src), y = realize(dst);
  for (std::size_t j = 0; j < dst.size(); ++j)
    for (std::size_t i = 0; i < src.size(); ++i) {
      const int a = src[i].orbit, b = dst[j].orbit, s = src[i].shift, t = dst[j].shift, d = t - s;
      const auto& ea = orbits_[static_cast<std::size_t>(a)].complex;
      const auto& eb = orbits_[static_cast<std::size_t>(b)].complex;
      ChainMap blockmap;
      blockmap.degree = d;
      for (int r = ea.lo(); r <= ea.hi() && !ea.empty(); ++r) {
        const int q = r - s;
        if (eb.rank(r + d) == 0) continue;
        RMatrix full = g.component(r_, x, y, q);
        blockmap.comps[r] = submatrix(full, offset(dst, j, q), offset(src, i, q), eb.rank(r + d), ea.rank(r));
      }
      const HomComplex& h = hom_complex(a, b);
      Vec coords = homology(a, b, d).coords(h.to_coords(blockmap));
      if (coords.size() != m.block_size(j, i)) {
        if (!is_zero(coords)) throw Error(ErrorKind::DegreeOutOfWindow, "chain map has a component outside the window");
        continue;
      }
      auto blk = m.block(j, i);
      std::copy(coords.begin(), coords.end(), blk.begin());
    }
  return m;
}

namespace {

std::string basis_name(const std::string& a, const std::string& b, int d, std::size_t k) {
  return a + "." + b + "." + std::to_string(d) + "." + std::to_string(k);
}

}  // namespace

std::optional<ObjectExpr> decompose(const ChainModel& model, const ProjComplex& c, int max_rank) {
  const CommAlgebra& r = model.ring();
  const int n = static_cast<int>(model.orbits().size());
  const int shift_lo = -3, shift_hi = 3;
  auto [plo, phi] = model.probe_range();
  const int dlo = plo - shift_hi - 4, dhi = phi - shift_lo + 4;
  const std::size_t width = static_cast<std::size_t>(dhi - dlo + 1);
  auto sig_index = [&](int orbit, int d) { return static_cast<std::size_t>(orbit) * width + static_cast<std::size_t>(d - dlo); };

  std::vector<std::size_t> target(static_cast<std::size_t>(n) * width, 0);
  for (int o = 0; o < n; ++o) {
    HomComplex h(r, model.orbits()[static_cast<std::size_t>(o)].complex, c);
    auto [lo, hi] = h.degree_range();
    for (int d = lo; d <= hi; ++d) {
      std::size_t dim = h.homology(d).dim();
      if (dim == 0) continue;
      if (d < dlo || d > dhi) return std::nullopt;
      target[sig_index(o, d)] = dim;
    }
  }

  std::vector<Slot> slots;
  std::vector<std::vector<std::size_t>> slot_sig;
  for (int a = 0; a < n; ++a)
    for (int s = shift_lo; s <= shift_hi; ++s) {
      std::vector<std::size_t> sig(target.size(), 0);
      for (int o = 0; o < n; ++o)
        for (int d = dlo; d <= dhi; ++d) {
          const int deg = d + s;
          if (deg < plo || deg > phi) continue;
          sig[sig_index(o, d)] = model.homology(o, a, deg).dim();
        }
      slots.push_back({a, s});
      slot_sig.push_back(std::move(sig));
    }

  std::vector<std::size_t> pick;
  std::vector<std::size_t> acc(target.size(), 0);
  std::optional<ObjectExpr> found;
  std::function<void(std::size_t)> search = [&](std::size_t start) {
    if (found) return;
    if (acc == target) {
      SlotList sl;
      for (auto i : pick) sl.push_back(slots[i]);
      ObjectExpr e = ObjectExpr::from_slots(sl);
      if (find_equivalence(r, c, model.realize(e))) found = e;
      return;
    }
    if (static_cast<int>(pick.size()) >= max_rank) return;
    for (std::size_t i = start; i < slots.size() && !found; ++i) {
      bool fits = true;
      for (std::size_t k = 0; k < acc.size(); ++k)
        if (acc[k] + slot_sig[i][k] > target[k]) fits = false;
      if (!fits) continue;
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += slot_sig[i][k];
      pick.push_back(i);
      search(i);
      pick.pop_back();
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= slot_sig[i][k];
    }
  };
  search(0);
  return found;
}

Presentation emit_presentation(const ChainModel& model, const std::vector<TriangleSpec>& triangles, bool with_tensor,
                               const nlohmann::json& metadata) {
  const CommAlgebra& r = model.ring();
  const auto names = model.orbit_names();
  const int n = static_cast<int>(names.size());
  Presentation p(r.field(), names, model.window_lo(), model.window_hi());
  auto [plo, phi] = model.probe_range();

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = plo; d <= phi; ++d) {
        std::size_t dim = model.homology(a, b, d).dim();
        if (dim == 0) continue;
        if (!p.in_window(d))
          throw Error(ErrorKind::DegreeOutOfWindow, "Hom^" + std::to_string(d) + "(" + names[a] + ", " + names[b] +
                                                        ") is nonzero outside the window");
        std::vector<std::string> basis;
        for (std::size_t k = 0; k < dim; ++k) basis.push_back(basis_name(names[a], names[b], d, k));
        p.add_hom(a, b, d, basis);
      }

  for (std::size_t fi = 0; fi < p.basis().size(); ++fi)
    for (std::size_t gi = 0; gi < p.basis().size(); ++gi) {
      const auto& f = p.basis()[fi];
      const auto& g = p.basis()[gi];
      if (f.hom.dst != g.hom.src) continue;
      const int a = f.hom.src, b = f.hom.dst, c = g.hom.dst;
      const int d = f.hom.degree + g.hom.degree;
      const auto& hab = model.hom_complex(a, b);
      const auto& hbc = model.hom_complex(b, c);
      const auto& hac = model.hom_complex(a, c);
      ChainMap fm = hab.from_coords(f.hom.degree, model.homology(a, b, f.hom.degree).reps()[f.index]);
      ChainMap gm = hbc.from_coords(g.hom.degree, model.homology(b, c, g.hom.degree).reps()[g.index]);
      ChainMap comp = compose(r, hab.source(), hab.target(), hbc.target(), gm, fm);
      Vec coords = model.homology(a, c, d).coords(hac.to_coords(comp));
      SparseVec result;
      const auto& ids = p.hom_basis(a, c, d);
      for (std::size_t k = 0; k < coords.size(); ++k)
        if (!coords[k].is_zero()) result.push_back({ids[k], coords[k]});
      if (!result.empty()) p.set_composition(gi, fi, result);
    }
  p.finalize();

  for (const auto& spec : triangles) {
    ProjComplex x = model.realize(spec.x), y = model.realize(spec.y), z = model.realize(spec.z);
    ProjComplex c = cone(r, x, y, spec.f);
    auto eq = find_equivalence(r, c, z);
    if (!eq) throw Error(ErrorKind::Arithmetic, "cone does not match the declared third vertex " + p.format(spec.z));
    ChainMap g = compose(r, y, c, z, eq->forward, cone_inclusion(r, x, y));
    ProjComplex x1 = shift(r, x, 1);
    ChainMap h = compose(r, z, c, x1, cone_projection(r, x, y), eq->backward);
    Triangle t;
    t.x = spec.x;
    t.y = spec.y;
    t.z = spec.z;
    t.f = model.to_morphism(p, spec.f, spec.x.slots(), spec.y.slots());
    t.g = model.to_morphism(p, g, spec.y.slots(), spec.z.slots());
    t.h = model.to_morphism(p, h, spec.z.slots(), shifted(spec.x.slots(), 1));
    p.add_triangle(std::move(t));
  }

  if (with_tensor) {
    TensorTable table;
    auto unit = decompose(model, unit_complex(r));
    if (!unit) throw Error(ErrorKind::Arithmetic, "unit complex does not decompose into orbits");
    table.unit = *unit;
    table.products.assign(static_cast<std::size_t>(n), std::vector<ObjectExpr>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        ProjComplex t = tensor_complex(r, model.orbits()[static_cast<std::size_t>(a)].complex,
                                       model.orbits()[static_cast<std::size_t>(b)].complex);
        auto dec = decompose(model, t);
        if (!dec)
          throw Error(ErrorKind::Arithmetic, "tensor product " + names[a] + " (x) " + names[b] + " does not decompose");
        table.products[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = *dec;
        table.products[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = *dec;
      }
    p.set_tensor(std::move(table));
  }
  p.metadata = metadata;
  return p;
}

}  // namespace ttg
