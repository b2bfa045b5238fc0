#include "ttg/verdier.hpp"

#include <algorithm>
#include <cstdlib>

#include "ttg/error.hpp"
#include "ttg/thick_lattice.hpp"

namespace ttg {

RoofConfig RoofConfig::defaults(const Presentation& p) {
  RoofConfig cfg;
  cfg.degree_lo = p.window_lo() - 2;
  cfg.degree_hi = p.window_hi() + 2;
  if (const char* env = std::getenv("TTG_RANK_BOUND"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 64) throw Error(ErrorKind::Schema, "TTG_RANK_BOUND must be a positive integer");
    cfg.rank_bound = static_cast<int>(v);
  }
  return cfg;
}

OrbitSet intersect_primes(const std::vector<OrbitSet>& primes, PointSet u, OrbitSet all) {
  OrbitSet out = all;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (point_in(u, i)) out = out & primes[i];
  return out;
}

QuotientContext make_context(const Presentation& p, const std::vector<OrbitSet>& primes, PointSet u,
                             const RoofConfig& cfg) {
  OrbitSet cls = intersect_primes(primes, u, p.all_orbits());
  if (thick_closure(p, cls) != cls) throw Error(ErrorKind::NotInLattice, "denominator class is not thick");
  return QuotientContext{&p, cls, cfg};
}

namespace {

struct Piece {
  SlotList src;
  SlotList dst;
  Morphism m;
};

bool same_piece(const Piece& a, const Piece& b) { return a.m == b.m; }

void add_piece(std::vector<Piece>& pieces, Piece pc) {
  for (const auto& q : pieces)
    if (same_piece(q, pc)) return;
  pieces.push_back(std::move(pc));
}

// Can the multiset of slots t be found among the target slots?
bool fits(const SlotList& t, const SlotList& target) {
  std::vector<bool> used(target.size(), false);
  for (const auto& s : t) {
    bool ok = false;
    for (std::size_t i = 0; i < target.size(); ++i)
      if (!used[i] && target[i] == s) {
        used[i] = true;
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

std::vector<Piece> elementary_pieces(const Presentation& p, OrbitSet cls, const SlotList& target) {
  std::vector<Piece> pieces;
  SlotList distinct;
  for (const auto& s : target)
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
  for (const auto& s : distinct) {
    SlotList one{s};
    add_piece(pieces, Piece{one, one, Morphism::identity(p, one)});
  }
  for (const auto& s : distinct)
    if (cls.contains(static_cast<std::size_t>(s.orbit))) add_piece(pieces, Piece{{}, {s}, Morphism(p, {}, {s})});

  auto arrows = [&](const Triangle& t) {
    std::vector<const Morphism*> out;
    if (t.z.belongs_to(cls)) out.push_back(&t.f);
    if (t.x.belongs_to(cls)) out.push_back(&t.g);
    if (t.y.belongs_to(cls)) out.push_back(&t.h);
    return out;
  };
  for (const auto& t : p.triangles()) {
    for (const Morphism* a : arrows(t)) {
      if (a->dst().empty()) continue;
      const Slot& first = a->dst().front();
      std::vector<int> shifts;
      for (const auto& s : target)
        if (s.orbit == first.orbit) shifts.push_back(s.shift - first.shift);
      std::sort(shifts.begin(), shifts.end());
      shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
      for (int n : shifts) {
        Morphism m = a->shifted(n);
        if (!fits(m.dst(), target)) continue;
        add_piece(pieces, Piece{m.src(), m.dst(), m});
      }
    }
  }
  return pieces;
}

struct Assembly {
  const Presentation& p;
  const SlotList& target;
  const std::vector<Piece>& pieces;
  int rank_bound;
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> chosen;  // piece, target index per dst slot
  std::vector<Denominator> out;

  void build() {
    SlotList apex;
    for (const auto& [k, idx] : chosen) apex.insert(apex.end(), pieces[k].src.begin(), pieces[k].src.end());
    Morphism s(p, apex, target);
    std::size_t off = 0;
    for (const auto& [k, idx] : chosen) {
      const Piece& pc = pieces[k];
      for (std::size_t j = 0; j < pc.dst.size(); ++j)
        for (std::size_t i = 0; i < pc.src.size(); ++i) {
          auto from = pc.m.block(j, i);
          auto to = s.block(idx[j], off + i);
          std::copy(from.begin(), from.end(), to.begin());
        }
      off += pc.src.size();
    }
    for (const auto& d : out)
      if (d.s == s) return;
    out.push_back(Denominator{std::move(apex), std::move(s)});
  }

  void run(std::vector<bool>& used, int rank) {
    std::size_t first = 0;
    while (first < target.size() && used[first]) ++first;
    if (first == target.size()) {
      build();
      return;
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const Piece& pc = pieces[k];
      int r = rank + static_cast<int>(pc.src.size());
      if (r > rank_bound) continue;
      auto it = std::find(pc.dst.begin(), pc.dst.end(), target[first]);
      if (it == pc.dst.end()) continue;
      std::vector<std::size_t> idx(pc.dst.size());
      std::vector<bool> next = used;
      idx[static_cast<std::size_t>(it - pc.dst.begin())] = first;
      next[first] = true;
      bool ok = true;
      for (std::size_t j = 0; j < pc.dst.size() && ok; ++j) {
        if (j == static_cast<std::size_t>(it - pc.dst.begin())) continue;
        ok = false;
        for (std::size_t i = first + 1; i < target.size(); ++i)
          if (!next[i] && target[i] == pc.dst[j]) {
            idx[j] = i;
            next[i] = true;
            ok = true;
            break;
          }
      }
      if (!ok) continue;
      chosen.emplace_back(k, std::move(idx));
      run(next, r);
      chosen.pop_back();
    }
  }
};

int slot_rank(const SlotList& s) { return static_cast<int>(s.size()); }

}  // namespace

DenominatorSystem::DenominatorSystem(const Presentation& p, OrbitSet cls, SlotList target, int rank_bound)
    : cls_(cls), target_(std::move(target)), rank_bound_(rank_bound) {
  if (slot_rank(target_) > rank_bound)
    throw Error(ErrorKind::RankBoundExceeded, "object of rank " + std::to_string(target_.size()) +
                                                  " exceeds rank bound " + std::to_string(rank_bound));
  auto pieces = elementary_pieces(p, cls, target_);
  Assembly a{p, target_, pieces, rank_bound, {}, {}};
  std::vector<bool> used(target_.size(), false);
  a.run(used, 0);
  dens_ = std::move(a.out);
  auto id = find(Morphism::identity(p, target_));
  if (!id) throw Error(ErrorKind::Arithmetic, "identity denominator missing");
  identity_ = *id;

  for (std::size_t to = 0; to < dens_.size(); ++to)
    for (std::size_t from = 0; from < dens_.size(); ++from) {
      const auto& si = dens_[to];
      const auto& sj = dens_[from];
      Matrix m = postcompose_matrix(p, si.s, sj.apex);
      auto sol = solve_affine(m, sj.s.coeffs());
      if (!sol) continue;
      Morphism shape(p, sj.apex, si.apex);
      Transition t{from, to, shape.with_coeffs(sol->particular), {}};
      for (auto& k : sol->kernel) t.kernel.push_back(shape.with_coeffs(std::move(k)));
      if (from == to && t.kernel.empty()) continue;
      if (from == to) t.particular = Morphism::identity(p, si.apex);
      transitions_.push_back(std::move(t));
    }
}

std::optional<std::size_t> DenominatorSystem::find(const Morphism& s) const {
  for (std::size_t i = 0; i < dens_.size(); ++i)
    if (dens_[i].s == s) return i;
  return std::nullopt;
}

std::vector<const Transition*> DenominatorSystem::transitions_into(std::size_t to, std::size_t from) const {
  std::vector<const Transition*> out;
  for (const auto& t : transitions_)
    if (t.to == to && t.from == from) out.push_back(&t);
  return out;
}

QuotientHom::QuotientHom(const Presentation& p, std::shared_ptr<const DenominatorSystem> sys, SlotList y)
    : field_(p.field()), sys_(std::move(sys)), y_(std::move(y)), reducer_(p.field(), 0, {}) {
  const auto& s = *sys_;
  std::size_t total = 0;
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < s.size(); ++i) {
    offsets_.push_back(total);
    dims.push_back(Morphism(p, s.at(i).apex, y_).dim());
    total += dims.back();
  }
  offsets_.push_back(total);

  std::vector<Vec> rels;
  for (const auto& t : s.transitions()) {
    const std::size_t ni = dims[t.to];
    if (ni == 0) continue;
    auto place = [&](Vec& v, std::size_t den, const Vec& part, const Scalar& sign) {
      for (std::size_t k = 0; k < part.size(); ++k) v[offsets_[den] + k] += sign * part[k];
    };
    const Scalar one = p.field().one();
    if (t.from != t.to) {
      Matrix pm = precompose_matrix(p, t.particular, y_);
      for (std::size_t c = 0; c < ni; ++c) {
        Vec v = zeros(p.field(), total);
        v[offsets_[t.to] + c] = one;
        place(v, t.from, pm.column(c), -one);
        rels.push_back(std::move(v));
      }
    }
    for (const auto& k : t.kernel) {
      Matrix km = precompose_matrix(p, k, y_);
      for (std::size_t c = 0; c < ni; ++c) {
        Vec v = zeros(p.field(), total);
        place(v, t.from, km.column(c), one);
        if (!ttg::is_zero(v)) rels.push_back(std::move(v));
      }
    }
  }
  reducer_ = SubspaceReducer(p.field(), total, rels);
  for (std::size_t c : reducer_.free_coordinates()) {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), c);
    std::size_t den = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    Morphism num(p, s.at(den).apex, y_);
    num.coeffs()[c - offsets_[den]] = p.field().one();
    basis_.push_back(Roof{den, std::move(num)});
  }
}

Vec QuotientHom::coords(const Roof& r) const {
  if (r.denominator >= sys_->size() || r.numerator.src() != sys_->at(r.denominator).apex || r.numerator.dst() != y_)
    throw Error(ErrorKind::Schema, "roof does not belong to this hom space");
  Vec v = zeros(field_, offsets_.back());
  for (std::size_t k = 0; k < r.numerator.dim(); ++k) v[offsets_[r.denominator] + k] = r.numerator.coeffs()[k];
  return reducer_.quotient_coords(v);
}

QuotientEngine::QuotientEngine(const Presentation& p, RoofConfig cfg) : p_(p), cfg_(cfg) {
  if (cfg_.rank_bound < 1) throw Error(ErrorKind::Schema, "rank bound must be positive");
}

std::shared_ptr<const DenominatorSystem> QuotientEngine::system(OrbitSet cls, const SlotList& x, int rank_bound) const {
  auto key = std::make_tuple(cls.bits(), x, rank_bound);
  {
    std::lock_guard lock(mu_);
    if (auto it = systems_.find(key); it != systems_.end()) return it->second;
  }
  auto sys = std::make_shared<const DenominatorSystem>(p_, cls, x, rank_bound);
  std::lock_guard lock(mu_);
  return systems_.emplace(key, sys).first->second;
}

std::shared_ptr<const QuotientHom> QuotientEngine::hom(OrbitSet cls, const ObjectExpr& x, const ObjectExpr& y) const {
  SlotList xs = x.slots(), ys = y.slots();
  auto key = std::make_tuple(cls.bits(), xs, ys);
  {
    std::lock_guard lock(mu_);
    if (auto it = homs_.find(key); it != homs_.end()) return it->second;
  }
  if (y.rank() > cfg_.rank_bound)
    throw Error(ErrorKind::RankBoundExceeded, "object " + p_.format(y) + " exceeds rank bound " +
                                                  std::to_string(cfg_.rank_bound));
  auto h = std::make_shared<QuotientHom>(p_, system(cls, xs, cfg_.rank_bound), ys);
  QuotientHom wider(p_, system(cls, xs, cfg_.rank_bound + 1), ys);
  if (wider.dim() != h->dim()) {
    h->stabilized = false;
    if (cfg_.require_stabilized)
      throw Error(ErrorKind::NotStabilized,
                  "Hom(" + p_.format(x) + ", " + p_.format(y) + ") modulo {" + [&] {
                    std::string s;
                    for (const auto& n : orbit_names(p_, cls)) s += (s.empty() ? "" : ",") + n;
                    return s;
                  }() + "} has dimension " + std::to_string(h->dim()) + " at rank bound " +
                      std::to_string(cfg_.rank_bound) + " but " + std::to_string(wider.dim()) + " at " +
                      std::to_string(cfg_.rank_bound + 1));
  }
  std::lock_guard lock(mu_);
  return homs_.emplace(key, std::move(h)).first->second;
}

Roof QuotientEngine::compose(OrbitSet cls, const ObjectExpr& x, const ObjectExpr& y, const Roof& f,
                             const Roof& g) const {
  auto sx = system(cls, x.slots(), cfg_.rank_bound);
  auto sy = system(cls, y.slots(), cfg_.rank_bound);
  const Denominator& target = sy->at(g.denominator);
  auto attempt = [&](std::size_t k, const Morphism& u) -> std::optional<Roof> {
    Morphism au = ttg::compose(p_, f.numerator, u);
    Matrix m = postcompose_matrix(p_, target.s, sx->at(k).apex);
    auto v = solve(m, au.coeffs());
    if (!v) return std::nullopt;
    Morphism vm = Morphism(p_, sx->at(k).apex, target.apex).with_coeffs(std::move(*v));
    return Roof{k, ttg::compose(p_, g.numerator, vm)};
  };
  if (auto r = attempt(f.denominator, Morphism::identity(p_, sx->at(f.denominator).apex))) return *r;
  for (std::size_t k = 0; k < sx->size(); ++k) {
    if (k == f.denominator) continue;
    for (const Transition* t : sx->transitions_into(f.denominator, k)) {
      if (auto r = attempt(k, t->particular)) return *r;
      for (const auto& ker : t->kernel)
        if (auto r = attempt(k, t->particular + ker)) return *r;
    }
  }
  throw Error(ErrorKind::NotStabilized, "no common refinement for roof composition within rank bound " +
                                            std::to_string(cfg_.rank_bound));
}

Matrix QuotientEngine::restriction(OrbitSet small, OrbitSet large, const ObjectExpr& x, const ObjectExpr& y) const {
  if (!small.subset_of(large)) throw Error(ErrorKind::Schema, "restriction needs a growing denominator class");
  auto hs = hom(small, x, y);
  auto hl = hom(large, x, y);
  Matrix m(p_.field(), hl->dim(), hs->dim());
  for (std::size_t c = 0; c < hs->dim(); ++c) {
    const Roof& r = hs->basis(c);
    auto idx = hl->system().find(hs->system().at(r.denominator).s);
    if (!idx) throw Error(ErrorKind::NotStabilized, "denominator missing from the larger system");
    m.set_column(c, hl->coords(Roof{*idx, r.numerator}));
  }
  return m;
}

GradedRing QuotientEngine::end_unit(OrbitSet cls) const {
  const ObjectExpr& u = unit();
  GradedRing g;
  g.degree_lo = cfg_.degree_lo;
  g.degree_hi = cfg_.degree_hi;
  for (int d = cfg_.degree_lo; d <= cfg_.degree_hi; ++d) g.dims[d] = hom(cls, u, u.shifted(d))->dim();
  auto h0 = hom(cls, u, u);
  const std::size_t n = h0->dim();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("r" + std::to_string(i));
  std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mult[i][j] = h0->coords(compose(cls, u, u, h0->basis(j), h0->basis(i)));
  auto sys = system(cls, u.slots(), cfg_.rank_bound);
  Vec one = h0->coords(Roof{sys->identity_index(), Morphism::identity(p_, u.slots())});
  g.degree0 = CommAlgebra(p_.field(), names, mult, one);
  g.degree0.validate();
  g.degree0_basis = h0->basis();
  return g;
}

std::shared_ptr<const QuotientHom> quotient_hom(const QuotientContext& ctx, const ObjectExpr& x, const ObjectExpr& y,
                                                int d) {
  QuotientEngine e(*ctx.presentation, ctx.config);
  return e.hom(ctx.denominator_class, x, y.shifted(d));
}

GradedRing end_unit(const QuotientContext& ctx) {
  QuotientEngine e(*ctx.presentation, ctx.config);
  return e.end_unit(ctx.denominator_class);
}

}  // namespace ttg
