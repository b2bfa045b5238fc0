#include "ttg/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ttg/error.hpp"

namespace ttg {

// --- Morphism ----------------------------------------------------------------

Morphism::Morphism(const Presentation& p, SlotList src, SlotList dst) : src_(std::move(src)), dst_(std::move(dst)) {
  offsets_.reserve(src_.size() * dst_.size() + 1);
  std::size_t off = 0;
  for (const auto& d : dst_)
    for (const auto& s : src_) {
      offsets_.push_back(off);
      off += p.hom_basis(s.orbit, d.orbit, d.shift - s.shift).size();
    }
  offsets_.push_back(off);
  coeffs_ = zeros(p.field(), off);
}

Morphism Morphism::identity(const Presentation& p, const SlotList& slots) {
  Morphism m(p, slots, slots);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& id = p.identity(slots[i].orbit);
    if (!id) throw Error(ErrorKind::Schema, "orbit '" + p.orbits()[static_cast<std::size_t>(slots[i].orbit)] +
                                                "' has no identity morphism");
    auto blk = m.block(i, i);
    std::copy(id->begin(), id->end(), blk.begin());
  }
  return m;
}

std::span<const Scalar> Morphism::block(std::size_t j, std::size_t i) const {
  return std::span<const Scalar>(coeffs_).subspan(block_offset(j, i), block_size(j, i));
}

std::span<Scalar> Morphism::block(std::size_t j, std::size_t i) {
  return std::span<Scalar>(coeffs_).subspan(block_offset(j, i), block_size(j, i));
}

Morphism Morphism::shifted(int n) const {
  Morphism m = *this;
  m.src_ = ttg::shifted(src_, n);
  m.dst_ = ttg::shifted(dst_, n);
  return m;
}

Morphism Morphism::with_coeffs(Vec c) const {
  if (c.size() != coeffs_.size()) throw Error(ErrorKind::Arithmetic, "coefficient vector has wrong length");
  Morphism m = *this;
  m.coeffs_ = std::move(c);
  return m;
}

Morphism compose(const Presentation& p, const Morphism& g, const Morphism& f) {
  if (g.src() != f.dst()) throw Error(ErrorKind::Arithmetic, "composing non-composable morphisms");
  Morphism out(p, f.src(), g.dst());
  const auto& basis = p.basis();
  for (std::size_t k = 0; k < g.dst().size(); ++k)
    for (std::size_t i = 0; i < f.src().size(); ++i) {
      if (out.block_size(k, i) == 0) continue;
      auto dst_blk = out.block(k, i);
      for (std::size_t j = 0; j < f.dst().size(); ++j) {
        auto gb = g.block(k, j);
        auto fb = f.block(j, i);
        if (gb.empty() || fb.empty()) continue;
        const auto& gbasis = p.hom_basis(g.src()[j].orbit, g.dst()[k].orbit, g.dst()[k].shift - g.src()[j].shift);
        const auto& fbasis = p.hom_basis(f.src()[i].orbit, f.dst()[j].orbit, f.dst()[j].shift - f.src()[i].shift);
        for (std::size_t u = 0; u < gb.size(); ++u) {
          if (gb[u].is_zero()) continue;
          for (std::size_t v = 0; v < fb.size(); ++v) {
            if (fb[v].is_zero()) continue;
            Scalar c = gb[u] * fb[v];
            for (const auto& t : p.composition(gbasis[u], fbasis[v])) dst_blk[basis[t.basis].index] += c * t.coeff;
          }
        }
      }
    }
  return out;
}

Morphism operator+(const Morphism& a, const Morphism& b) { return a.with_coeffs(a.coeffs() + b.coeffs()); }
Morphism operator-(const Morphism& a, const Morphism& b) { return a.with_coeffs(a.coeffs() - b.coeffs()); }
Morphism scaled(const Morphism& m, const Scalar& c) { return m.with_coeffs(scaled(m.coeffs(), c)); }

Matrix postcompose_matrix(const Presentation& p, const Morphism& s, const SlotList& w) {
  Morphism t(p, w, s.src());
  Morphism probe(p, w, s.dst());
  Matrix m(p.field(), probe.dim(), t.dim());
  for (std::size_t c = 0; c < t.dim(); ++c) {
    Morphism e = t.with_coeffs(unit_vector(p.field(), t.dim(), c));
    m.set_column(c, compose(p, s, e).coeffs());
  }
  return m;
}

Matrix precompose_matrix(const Presentation& p, const Morphism& t, const SlotList& y) {
  Morphism f(p, t.dst(), y);
  Morphism probe(p, t.src(), y);
  Matrix m(p.field(), probe.dim(), f.dim());
  for (std::size_t c = 0; c < f.dim(); ++c) {
    Morphism e = f.with_coeffs(unit_vector(p.field(), f.dim(), c));
    m.set_column(c, compose(p, e, t).coeffs());
  }
  return m;
}

// --- Presentation ------------------------------------------------------------

Presentation::Presentation(Field field, std::vector<std::string> orbits, int window_lo, int window_hi)
    : field_(field), orbits_(std::move(orbits)), window_lo_(window_lo), window_hi_(window_hi) {
  if (window_lo_ > window_hi_) throw Error(ErrorKind::Schema, "hom_window must satisfy lo <= hi");
  std::set<std::string> seen;
  for (const auto& o : orbits_) {
    if (o.empty() || !(std::isalpha(static_cast<unsigned char>(o[0])) || o[0] == '_'))
      throw Error(ErrorKind::Schema, "orbit name '" + o + "' is not an identifier");
    for (char c : o)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw Error(ErrorKind::Schema, "orbit name '" + o + "' is not an identifier");
    if (!seen.insert(o).second) throw Error(ErrorKind::DuplicateName, "orbit '" + o + "'");
  }
  if (orbits_.size() > 64) throw Error(ErrorKind::TooManyOrbits, "at most 64 orbits are representable");
  identities_.assign(orbits_.size(), std::nullopt);
}

std::optional<int> Presentation::find_orbit(const std::string& name) const {
  auto it = std::find(orbits_.begin(), orbits_.end(), name);
  if (it == orbits_.end()) return std::nullopt;
  return static_cast<int>(it - orbits_.begin());
}

void Presentation::add_hom(int src, int dst, int degree, const std::vector<std::string>& basis_names) {
  if (!in_window(degree))
    throw Error(ErrorKind::DegreeOutOfWindow, "hom " + orbits_.at(static_cast<std::size_t>(src)) + " -> " +
                                                  orbits_.at(static_cast<std::size_t>(dst)) + " in degree " +
                                                  std::to_string(degree) + " lies outside [" +
                                                  std::to_string(window_lo_) + ", " + std::to_string(window_hi_) + "]");
  HomKey key{src, dst, degree};
  if (homs_.count(key))
    throw Error(ErrorKind::DuplicateName, "hom block " + orbits_[static_cast<std::size_t>(src)] + " -> " +
                                              orbits_[static_cast<std::size_t>(dst)] + " degree " +
                                              std::to_string(degree) + " given twice");
  if (basis_names.empty()) return;
  auto& ids = homs_[key];
  for (const auto& name : basis_names) {
    if (basis_index_.count(name)) throw Error(ErrorKind::DuplicateName, "basis element '" + name + "'");
    std::size_t id = basis_.size();
    basis_.push_back({name, key, ids.size()});
    basis_index_[name] = id;
    ids.push_back(id);
  }
}

std::optional<std::size_t> Presentation::find_basis(const std::string& name) const {
  auto it = basis_index_.find(name);
  if (it == basis_index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& Presentation::hom_basis(int src, int dst, int degree) const {
  static const std::vector<std::size_t> empty;
  auto it = homs_.find(HomKey{src, dst, degree});
  return it == homs_.end() ? empty : it->second;
}

void Presentation::set_composition(std::size_t g, std::size_t f, SparseVec result) {
  const auto& fk = basis_.at(f).hom;
  const auto& gk = basis_.at(g).hom;
  if (fk.dst != gk.src)
    throw Error(ErrorKind::Schema, "composition of non-composable '" + basis_[g].name + "' o '" + basis_[f].name + "'");
  HomKey target{fk.src, gk.dst, fk.degree + gk.degree};
  SparseVec cleaned;
  for (auto& t : result) {
    if (t.coeff.is_zero()) continue;
    if (basis_.at(t.basis).hom != target) {
      if (!in_window(target.degree))
        throw Error(ErrorKind::DegreeOutOfWindow, "composition '" + basis_[g].name + "' o '" + basis_[f].name +
                                                      "' lands in degree " + std::to_string(target.degree));
      throw Error(ErrorKind::Schema, "composition '" + basis_[g].name + "' o '" + basis_[f].name +
                                         "' names '" + basis_[t.basis].name + "' from the wrong hom block");
    }
    cleaned.push_back(t);
  }
  if (cleaned.empty())
    comp_.erase({g, f});
  else
    comp_[{g, f}] = std::move(cleaned);
}

const SparseVec& Presentation::composition(std::size_t g, std::size_t f) const {
  static const SparseVec empty;
  auto it = comp_.find({g, f});
  return it == comp_.end() ? empty : it->second;
}

void Presentation::add_triangle(Triangle t) { triangles_.push_back(std::move(t)); }

void Presentation::set_tensor(TensorTable t) {
  if (t.products.size() != orbits_.size()) throw Error(ErrorKind::Schema, "tensor table has wrong size");
  for (const auto& row : t.products)
    if (row.size() != orbits_.size()) throw Error(ErrorKind::Schema, "tensor table has wrong size");
  tensor_ = std::move(t);
}

const TensorTable& Presentation::tensor_table() const {
  if (!tensor_) throw Error(ErrorKind::NoTensorStructure, "presentation has no tensor table");
  return *tensor_;
}

void Presentation::finalize() {
  // The identity of orbit a is the unique u in Hom^0(a, a) with u o v = v for
  // every basis v landing in a and w o u = w for every basis w leaving a.
  for (std::size_t a = 0; a < orbits_.size(); ++a) {
    const int ai = static_cast<int>(a);
    const auto& end0 = hom_basis(ai, ai, 0);
    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t v = 0; v < basis_.size(); ++v) {
      const auto& hk = basis_[v].hom;
      if (hk.dst == ai) {
        const auto& blk = hom_basis(hk.src, ai, hk.degree);
        for (std::size_t r = 0; r < blk.size(); ++r) {
          Vec row = zeros(field_, end0.size());
          for (std::size_t k = 0; k < end0.size(); ++k)
            for (const auto& t : composition(end0[k], v))
              if (t.basis == blk[r]) row[k] += t.coeff;
          rows.push_back(std::move(row));
          rhs.push_back(blk[r] == v ? field_.one() : field_.zero());
        }
      }
      if (hk.src == ai) {
        const auto& blk = hom_basis(ai, hk.dst, hk.degree);
        for (std::size_t r = 0; r < blk.size(); ++r) {
          Vec row = zeros(field_, end0.size());
          for (std::size_t k = 0; k < end0.size(); ++k)
            for (const auto& t : composition(v, end0[k]))
              if (t.basis == blk[r]) row[k] += t.coeff;
          rows.push_back(std::move(row));
          rhs.push_back(blk[r] == v ? field_.one() : field_.zero());
        }
      }
    }
    if (end0.empty()) {
      identities_[a] = std::nullopt;
      continue;
    }
    auto sol = solve(Matrix::from_rows(field_, end0.size(), rows), rhs);
    identities_[a] = sol;
  }
}

// --- object-level operations -------------------------------------------------

std::size_t hom_dim(const Presentation& p, const ObjectExpr& x, const ObjectExpr& y, int d) {
  std::size_t total = 0;
  for (const auto& a : x.terms())
    for (const auto& b : y.terms())
      total += static_cast<std::size_t>(a.multiplicity) * static_cast<std::size_t>(b.multiplicity) *
               p.hom_basis(a.orbit, b.orbit, b.shift - a.shift + d).size();
  return total;
}

ObjectExpr tensor(const Presentation& p, const ObjectExpr& x, const ObjectExpr& y) {
  const auto& table = p.tensor_table();
  std::vector<ObjectExpr::Term> terms;
  for (const auto& a : x.terms())
    for (const auto& b : y.terms())
      for (auto t : table.products[static_cast<std::size_t>(a.orbit)][static_cast<std::size_t>(b.orbit)].terms()) {
        t.shift += a.shift + b.shift;
        t.multiplicity *= a.multiplicity * b.multiplicity;
        terms.push_back(t);
      }
  return ObjectExpr(std::move(terms));
}

namespace {

SparseVec compose_sparse(const Presentation& p, const SparseVec& g, const SparseVec& f) {
  std::map<std::size_t, Scalar> acc;
  for (const auto& gt : g)
    for (const auto& ft : f)
      for (const auto& t : p.composition(gt.basis, ft.basis)) {
        auto it = acc.find(t.basis);
        Scalar c = gt.coeff * ft.coeff * t.coeff;
        if (it == acc.end())
          acc.emplace(t.basis, c);
        else
          it->second += c;
      }
  SparseVec out;
  for (auto& [b, c] : acc)
    if (!c.is_zero()) out.push_back({b, c});
  return out;
}

std::string sparse_to_string(const Presentation& p, const SparseVec& v) {
  if (v.empty()) return "0";
  std::string s;
  for (const auto& t : v) {
    if (!s.empty()) s += " + ";
    s += t.coeff.to_string() + "*" + p.basis()[t.basis].name;
  }
  return s;
}

}  // namespace

ValidationReport validate(const Presentation& p) {
  ValidationReport rep;
  const auto& names = p.orbits();
  const auto& basis = p.basis();

  for (std::size_t a = 0; a < p.orbit_count(); ++a)
    if (!p.identity(static_cast<int>(a)))
      rep.violations.push_back({"identity", "orbit " + names[a] + " has no two-sided identity in Hom^0"});

  // Associativity over every composable basis triple.
  std::vector<std::vector<std::size_t>> from(p.orbit_count());
  for (std::size_t b = 0; b < basis.size(); ++b) from[static_cast<std::size_t>(basis[b].hom.src)].push_back(b);
  for (std::size_t f = 0; f < basis.size(); ++f)
    for (std::size_t g : from[static_cast<std::size_t>(basis[f].hom.dst)])
      for (std::size_t h : from[static_cast<std::size_t>(basis[g].hom.dst)]) {
        SparseVec one{{f, p.field().one()}};
        SparseVec gv{{g, p.field().one()}};
        SparseVec hv{{h, p.field().one()}};
        SparseVec left = compose_sparse(p, compose_sparse(p, hv, gv), one);
        SparseVec right = compose_sparse(p, hv, compose_sparse(p, gv, one));
        auto key = [](const SparseVec& v) {
          std::vector<std::pair<std::size_t, std::string>> k;
          for (const auto& t : v) k.emplace_back(t.basis, t.coeff.to_string());
          return k;
        };
        if (key(left) != key(right))
          rep.violations.push_back({"associativity", "(" + basis[h].name + " o " + basis[g].name + ") o " +
                                                         basis[f].name + " = " + sparse_to_string(p, left) + " but " +
                                                         basis[h].name + " o (" + basis[g].name + " o " +
                                                         basis[f].name + ") = " + sparse_to_string(p, right)});
      }

  if (p.has_tensor()) {
    const auto& table = p.tensor_table();
    const std::size_t n = p.orbit_count();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (!(table.products[a][b] == table.products[b][a]))
          rep.violations.push_back({"tensor-symmetry", names[a] + " (x) " + names[b] + " = " +
                                                           p.format(table.products[a][b]) + " but " + names[b] +
                                                           " (x) " + names[a] + " = " + p.format(table.products[b][a])});
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          auto A = ObjectExpr::single(static_cast<int>(a));
          auto B = ObjectExpr::single(static_cast<int>(b));
          auto C = ObjectExpr::single(static_cast<int>(c));
          auto l = tensor(p, tensor(p, A, B), C);
          auto r = tensor(p, A, tensor(p, B, C));
          if (!(l == r))
            rep.violations.push_back({"tensor-associativity", "(" + names[a] + " (x) " + names[b] + ") (x) " +
                                                                  names[c] + " = " + p.format(l) + " but " + names[a] +
                                                                  " (x) (" + names[b] + " (x) " + names[c] +
                                                                  ") = " + p.format(r)});
        }
    for (std::size_t a = 0; a < n; ++a) {
      auto A = ObjectExpr::single(static_cast<int>(a));
      auto u = tensor(p, table.unit, A);
      if (!(u == A))
        rep.violations.push_back({"unit", "unit (x) " + names[a] + " = " + p.format(u) + " != " + names[a]});
    }
  }

  for (std::size_t t = 0; t < p.triangles().size(); ++t) {
    const auto& tri = p.triangles()[t];
    bool ids_ok = true;
    for (const auto& e : {tri.x, tri.y, tri.z})
      for (const auto& term : e.terms())
        if (!p.identity(term.orbit)) ids_ok = false;
    if (!ids_ok) continue;
    std::string label = "triangle " + std::to_string(t) + " (" + p.format(tri.x) + " -> " + p.format(tri.y) +
                        " -> " + p.format(tri.z) + ")";
    if (!compose(p, tri.g, tri.f).is_zero()) rep.violations.push_back({"triangle", label + ": g o f != 0"});
    if (!compose(p, tri.h, tri.g).is_zero()) rep.violations.push_back({"triangle", label + ": h o g != 0"});
    if (!compose(p, tri.f.shifted(1), tri.h).is_zero())
      rep.violations.push_back({"triangle", label + ": f[1] o h != 0"});
  }
  return rep;
}

}  // namespace ttg
