#include "ttg/perf_oracle.hpp"

#include <algorithm>

#include "ttg/error.hpp"

namespace ttg {

// --- RMatrix -----------------------------------------------------------------

RMatrix RMatrix::zero(const CommAlgebra& r, std::size_t rows, std::size_t cols) {
  return {rows, cols, std::vector<Vec>(rows * cols, r.zero())};
}

RMatrix RMatrix::identity(const CommAlgebra& r, std::size_t n) { return scalar(r, n, r.unit()); }

RMatrix RMatrix::scalar(const CommAlgebra& r, std::size_t n, const Vec& a) {
  RMatrix m = zero(r, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = a;
  return m;
}

bool RMatrix::is_zero() const {
  for (const auto& e : entries)
    if (!ttg::is_zero(e)) return false;
  return true;
}

RMatrix mul(const CommAlgebra& r, const RMatrix& a, const RMatrix& b) {
  if (a.cols != b.rows) throw Error(ErrorKind::Arithmetic, "RMatrix shape mismatch in product");
  RMatrix out = RMatrix::zero(r, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Vec& aik = a.at(i, k);
      if (ttg::is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        const Vec& bkj = b.at(k, j);
        if (ttg::is_zero(bkj)) continue;
        out.at(i, j) = out.at(i, j) + r.mul(aik, bkj);
      }
    }
  return out;
}

RMatrix add(const RMatrix& a, const RMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw Error(ErrorKind::Arithmetic, "RMatrix shape mismatch in sum");
  RMatrix out = a;
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = out.entries[i] + b.entries[i];
  return out;
}

RMatrix sub(const RMatrix& a, const RMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw Error(ErrorKind::Arithmetic, "RMatrix shape mismatch in difference");
  RMatrix out = a;
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = out.entries[i] - b.entries[i];
  return out;
}

RMatrix scale(const CommAlgebra& r, const RMatrix& a, const Vec& c) {
  RMatrix out = a;
  for (auto& e : out.entries) e = r.mul(c, e);
  return out;
}

RMatrix scale(const RMatrix& a, const Scalar& c) {
  RMatrix out = a;
  for (auto& e : out.entries) e = scaled(e, c);
  return out;
}

RMatrix kron(const CommAlgebra& r, const RMatrix& a, const RMatrix& b) {
  RMatrix out = RMatrix::zero(r, a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (ttg::is_zero(a.at(i, j))) continue;
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l) out.at(i * b.rows + k, j * b.cols + l) = r.mul(a.at(i, j), b.at(k, l));
    }
  return out;
}

RMatrix block_diag(const CommAlgebra& r, const RMatrix& a, const RMatrix& b) {
  RMatrix out = RMatrix::zero(r, a.rows + b.rows, a.cols + b.cols);
  place(out, a, 0, 0);
  place(out, b, a.rows, a.cols);
  return out;
}

RMatrix submatrix(const RMatrix& a, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
  RMatrix out{rows, cols, {}};
  out.entries.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.entries.push_back(a.at(r0 + i, c0 + j));
  return out;
}

void place(RMatrix& dst, const RMatrix& src, std::size_t r0, std::size_t c0) {
  for (std::size_t i = 0; i < src.rows; ++i)
    for (std::size_t j = 0; j < src.cols; ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
}

Vec flatten(const RMatrix& a) {
  Vec out;
  for (const auto& e : a.entries) out.insert(out.end(), e.begin(), e.end());
  return out;
}

RMatrix unflatten(const CommAlgebra& r, std::size_t rows, std::size_t cols, const Vec& v) {
  const std::size_t n = r.dim();
  if (v.size() != rows * cols * n) throw Error(ErrorKind::Arithmetic, "flattened RMatrix has wrong length");
  RMatrix out{rows, cols, {}};
  out.entries.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k)
    out.entries.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(k * n),
                             v.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  return out;
}

// --- ProjComplex ---------------------------------------------------------------

ProjComplex::ProjComplex(int lo, std::vector<RMatrix> idems, std::vector<RMatrix> diffs)
    : lo_(lo), idems_(std::move(idems)), diffs_(std::move(diffs)) {
  if (!idems_.empty() && diffs_.size() + 1 != idems_.size())
    throw Error(ErrorKind::Schema, "complex needs one differential between consecutive terms");
  for (const auto& e : idems_)
    if (e.rows != e.cols) throw Error(ErrorKind::Schema, "idempotent matrices must be square");
  for (std::size_t i = 0; i < diffs_.size(); ++i)
    if (diffs_[i].cols != idems_[i].rows || diffs_[i].rows != idems_[i + 1].rows)
      throw Error(ErrorKind::Schema, "differential has the wrong shape");
  // Drop zero terms at either end.
  while (!idems_.empty() && idems_.back().rows == 0) {
    idems_.pop_back();
    if (!diffs_.empty()) diffs_.pop_back();
  }
  while (!idems_.empty() && idems_.front().rows == 0) {
    idems_.erase(idems_.begin());
    if (!diffs_.empty()) diffs_.erase(diffs_.begin());
    ++lo_;
  }
  if (idems_.empty()) lo_ = 0;
}

std::size_t ProjComplex::rank(int q) const {
  if (q < lo_ || q > hi()) return 0;
  return idems_[static_cast<std::size_t>(q - lo_)].rows;
}

RMatrix ProjComplex::idem(const CommAlgebra& r, int q) const {
  if (q < lo_ || q > hi()) return RMatrix::zero(r, 0, 0);
  return idems_[static_cast<std::size_t>(q - lo_)];
}

RMatrix ProjComplex::d(const CommAlgebra& r, int q) const {
  if (q < lo_ || q + 1 > hi()) return RMatrix::zero(r, rank(q + 1), rank(q));
  return diffs_[static_cast<std::size_t>(q - lo_)];
}

void ProjComplex::validate(const CommAlgebra& r) const {
  for (int q = lo_; q <= hi(); ++q) {
    RMatrix e = idem(r, q);
    if (mul(r, e, e) != e) throw Error(ErrorKind::Schema, "term " + std::to_string(q) + " is not an idempotent image");
    RMatrix dq = d(r, q);
    if (mul(r, mul(r, idem(r, q + 1), dq), e) != dq)
      throw Error(ErrorKind::Schema, "differential in degree " + std::to_string(q) + " ignores the idempotents");
    if (!mul(r, d(r, q + 1), dq).is_zero()) throw Error(ErrorKind::Schema, "d o d != 0 at degree " + std::to_string(q));
  }
}

RMatrix ChainMap::component(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, int q) const {
  auto it = comps.find(q);
  if (it != comps.end()) return it->second;
  return RMatrix::zero(r, f.rank(q + degree), e.rank(q));
}

ProjComplex unit_complex(const CommAlgebra& r) { return module_complex(r, RMatrix::identity(r, 1), 0); }

ProjComplex module_complex(const CommAlgebra& r, const RMatrix& idem, int degree) {
  (void)r;
  return ProjComplex(degree, {idem}, {});
}

ProjComplex shift(const CommAlgebra& r, const ProjComplex& e, int m) {
  if (e.empty()) return e;
  std::vector<RMatrix> idems, diffs;
  const Scalar sign = (m % 2 == 0) ? r.field().one() : -r.field().one();
  for (int q = e.lo(); q <= e.hi(); ++q) {
    idems.push_back(e.idem(r, q));
    if (q < e.hi()) diffs.push_back(scale(e.d(r, q), sign));
  }
  return ProjComplex(e.lo() - m, std::move(idems), std::move(diffs));
}

namespace {

std::pair<int, int> joint_range(const ProjComplex& a, int a_off, const ProjComplex& b, int b_off) {
  if (a.empty() && b.empty()) return {0, -1};
  if (a.empty()) return {b.lo() + b_off, b.hi() + b_off};
  if (b.empty()) return {a.lo() + a_off, a.hi() + a_off};
  return {std::min(a.lo() + a_off, b.lo() + b_off), std::max(a.hi() + a_off, b.hi() + b_off)};
}

}  // namespace

ProjComplex direct_sum(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b) {
  auto [lo, hi] = joint_range(a, 0, b, 0);
  std::vector<RMatrix> idems, diffs;
  for (int q = lo; q <= hi; ++q) {
    idems.push_back(block_diag(r, a.idem(r, q), b.idem(r, q)));
    if (q < hi) diffs.push_back(block_diag(r, a.d(r, q), b.d(r, q)));
  }
  return ProjComplex(lo, std::move(idems), std::move(diffs));
}

bool is_chain_map(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, const ChainMap& g) {
  const int p = g.degree;
  const Scalar sign = (p % 2 == 0) ? r.field().one() : -r.field().one();
  for (const auto& [q, m] : g.comps) {
    if (m.rows != f.rank(q + p) || m.cols != e.rank(q)) return false;
    if (mul(r, mul(r, f.idem(r, q + p), m), e.idem(r, q)) != m) return false;
  }
  if (e.empty()) return true;
  for (int q = e.lo() - 1; q <= e.hi(); ++q) {
    RMatrix lhs = mul(r, f.d(r, q + p), g.component(r, e, f, q));
    RMatrix rhs = scale(mul(r, g.component(r, e, f, q + 1), e.d(r, q)), sign);
    if (lhs != rhs) return false;
  }
  return true;
}

ProjComplex cone(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y, const ChainMap& f) {
  if (f.degree != 0 || !is_chain_map(r, x, y, f))
    throw Error(ErrorKind::NotAChainMap, "cone requires a degree-0 chain map");
  auto [lo, hi] = joint_range(x, -1, y, 0);
  std::vector<RMatrix> idems, diffs;
  const Scalar minus = -r.field().one();
  for (int q = lo; q <= hi; ++q) {
    idems.push_back(block_diag(r, x.idem(r, q + 1), y.idem(r, q)));
    if (q == hi) break;
    const std::size_t xr0 = x.rank(q + 1), yr0 = y.rank(q), xr1 = x.rank(q + 2), yr1 = y.rank(q + 1);
    RMatrix dq = RMatrix::zero(r, xr1 + yr1, xr0 + yr0);
    place(dq, scale(x.d(r, q + 1), minus), 0, 0);
    place(dq, f.component(r, x, y, q + 1), xr1, 0);
    place(dq, y.d(r, q), xr1, xr0);
    diffs.push_back(std::move(dq));
  }
  return ProjComplex(lo, std::move(idems), std::move(diffs));
}

ChainMap cone_inclusion(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y) {
  ChainMap m;
  if (y.empty()) return m;
  for (int q = y.lo(); q <= y.hi(); ++q) {
    RMatrix c = RMatrix::zero(r, x.rank(q + 1) + y.rank(q), y.rank(q));
    place(c, y.idem(r, q), x.rank(q + 1), 0);
    m.comps[q] = std::move(c);
  }
  return m;
}

ChainMap cone_projection(const CommAlgebra& r, const ProjComplex& x, const ProjComplex& y) {
  ChainMap m;
  if (x.empty()) return m;
  for (int q = x.lo() - 1; q <= x.hi() - 1; ++q) {
    RMatrix c = RMatrix::zero(r, x.rank(q + 1), x.rank(q + 1) + y.rank(q));
    place(c, x.idem(r, q + 1), 0, 0);
    m.comps[q] = std::move(c);
  }
  return m;
}

ProjComplex tensor_complex(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b) {
  if (a.empty() || b.empty()) return ProjComplex();
  const int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
  auto summands = [&](int n) {
    std::vector<std::pair<int, std::size_t>> out;  // (p, offset)
    std::size_t off = 0;
    for (int p = a.lo(); p <= a.hi(); ++p) {
      int q = n - p;
      if (q < b.lo() || q > b.hi()) continue;
      out.emplace_back(p, off);
      off += a.rank(p) * b.rank(q);
    }
    return std::make_pair(out, off);
  };
  std::vector<RMatrix> idems, diffs;
  for (int n = lo; n <= hi; ++n) {
    auto [src, src_rank] = summands(n);
    RMatrix e = RMatrix::zero(r, src_rank, src_rank);
    for (auto [p, off] : src) place(e, kron(r, a.idem(r, p), b.idem(r, n - p)), off, off);
    idems.push_back(std::move(e));
    if (n == hi) break;
    auto [dst, dst_rank] = summands(n + 1);
    RMatrix d = RMatrix::zero(r, dst_rank, src_rank);
    auto offset_of = [&](int p) -> std::optional<std::size_t> {
      for (auto [pp, off] : dst)
        if (pp == p) return off;
      return std::nullopt;
    };
    for (auto [p, off] : src) {
      const int q = n - p;
      if (auto o = offset_of(p + 1)) place(d, kron(r, a.d(r, p), b.idem(r, q)), *o, off);
      if (auto o = offset_of(p)) {
        RMatrix t = kron(r, a.idem(r, p), b.d(r, q));
        if (p % 2 != 0) t = scale(t, -r.field().one());
        place(d, t, *o, off);
      }
    }
    diffs.push_back(std::move(d));
  }
  return ProjComplex(lo, std::move(idems), std::move(diffs));
}

ProjComplex localize(const CommAlgebra& r, const ProjComplex& e, const Vec& idempotent) {
  if (e.empty()) return e;
  std::vector<RMatrix> idems, diffs;
  for (int q = e.lo(); q <= e.hi(); ++q) {
    idems.push_back(scale(r, e.idem(r, q), idempotent));
    if (q < e.hi()) diffs.push_back(scale(r, e.d(r, q), idempotent));
  }
  return ProjComplex(e.lo(), std::move(idems), std::move(diffs));
}

ChainMap identity_map(const CommAlgebra& r, const ProjComplex& e) {
  ChainMap m;
  for (int q = e.lo(); q <= e.hi() && !e.empty(); ++q) m.comps[q] = e.idem(r, q);
  return m;
}

ChainMap zero_map(int degree) {
  ChainMap m;
  m.degree = degree;
  return m;
}

ChainMap compose(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b, const ProjComplex& c,
                 const ChainMap& g, const ChainMap& f) {
  ChainMap out;
  out.degree = f.degree + g.degree;
  for (const auto& [q, fm] : f.comps) {
    if (c.rank(q + out.degree) == 0 || a.rank(q) == 0) continue;
    out.comps[q] = mul(r, g.component(r, b, c, q + f.degree), fm);
  }
  return out;
}

ChainMap add(const CommAlgebra& r, const ProjComplex& a, const ProjComplex& b, const ChainMap& f,
             const ChainMap& g) {
  if (f.degree != g.degree) throw Error(ErrorKind::Arithmetic, "adding chain maps of different degrees");
  ChainMap out;
  out.degree = f.degree;
  for (int q = a.lo(); q <= a.hi() && !a.empty(); ++q)
    out.comps[q] = ttg::add(f.component(r, a, b, q), g.component(r, a, b, q));
  return out;
}

// --- Homology ----------------------------------------------------------------

Homology::Homology(Field f, int degree, std::size_t ambient, std::vector<Vec> reps, std::vector<Vec> boundaries,
                   std::vector<Vec> cycles)
    : field_(f),
      degree_(degree),
      ambient_(ambient),
      reps_(std::move(reps)),
      boundaries_(f, ambient, boundaries),
      cycles_(f, ambient, cycles) {
  std::vector<Vec> cols;
  for (const auto& v : reps_) cols.push_back(boundaries_.reduce(v));
  reduced_reps_ = Matrix::from_columns(f, ambient_, cols);
}

bool Homology::is_cycle(const Vec& v) const { return cycles_.contains(v); }

Vec Homology::coords(const Vec& v) const {
  if (!is_cycle(v)) throw Error(ErrorKind::NotAChainMap, "element is not a cycle of the hom complex");
  if (reps_.empty()) return {};
  auto s = solve(reduced_reps_, boundaries_.reduce(v));
  if (!s) throw Error(ErrorKind::Arithmetic, "cycle class outside the homology basis");
  return *s;
}

// --- HomComplex ----------------------------------------------------------------

HomComplex::HomComplex(const CommAlgebra& r, ProjComplex e, ProjComplex f) : r_(&r), e_(std::move(e)), f_(std::move(f)) {}

std::vector<HomComplex::Block> HomComplex::blocks(int p) const {
  std::vector<Block> out;
  std::size_t off = 0;
  if (e_.empty()) return out;
  for (int q = e_.lo(); q <= e_.hi(); ++q) {
    std::size_t rows = f_.rank(q + p), cols = e_.rank(q);
    if (rows == 0 || cols == 0) continue;
    out.push_back({q, rows, cols, off});
    off += rows * cols * r_->dim();
  }
  return out;
}

std::size_t HomComplex::ambient_dim(int p) const {
  std::size_t total = 0;
  for (const auto& b : blocks(p)) total += b.rows * b.cols * r_->dim();
  return total;
}

std::pair<int, int> HomComplex::degree_range() const {
  if (e_.empty() || f_.empty()) return {0, -1};
  return {f_.lo() - e_.hi(), f_.hi() - e_.lo()};
}

Vec HomComplex::to_coords(const ChainMap& g) const {
  Vec out;
  for (const auto& b : blocks(g.degree)) {
    Vec part = flatten(g.component(*r_, e_, f_, b.q));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

ChainMap HomComplex::from_coords(int p, const Vec& v) const {
  ChainMap g;
  g.degree = p;
  const std::size_t n = r_->dim();
  for (const auto& b : blocks(p)) {
    Vec part(v.begin() + static_cast<std::ptrdiff_t>(b.offset),
             v.begin() + static_cast<std::ptrdiff_t>(b.offset + b.rows * b.cols * n));
    g.comps[b.q] = unflatten(*r_, b.rows, b.cols, part);
  }
  return g;
}

std::vector<Vec> HomComplex::module_basis(int p) const {
  const Field f = r_->field();
  const std::size_t amb = ambient_dim(p);
  const std::size_t n = r_->dim();
  std::vector<Vec> out;
  for (const auto& b : blocks(p)) {
    const std::size_t len = b.rows * b.cols * n;
    RMatrix ef = f_.idem(*r_, b.q + p), ee = e_.idem(*r_, b.q);
    std::vector<Vec> cols;
    for (std::size_t k = 0; k < len; ++k) {
      RMatrix phi = unflatten(*r_, b.rows, b.cols, unit_vector(f, len, k));
      cols.push_back(flatten(mul(*r_, mul(*r_, ef, phi), ee)));
    }
    Matrix m = Matrix::from_columns(f, len, cols);
    for (auto c : independent_columns(m)) {
      Vec v = zeros(f, amb);
      std::copy(cols[c].begin(), cols[c].end(), v.begin() + static_cast<std::ptrdiff_t>(b.offset));
      out.push_back(std::move(v));
    }
  }
  return out;
}

Vec HomComplex::differential(int p, const Vec& gv) const {
  const CommAlgebra& r = *r_;
  ChainMap g = from_coords(p, gv);
  const Scalar sign = (p % 2 == 0) ? r.field().one() : -r.field().one();
  ChainMap out;
  out.degree = p + 1;
  for (const auto& b : blocks(p + 1)) {
    const int q = b.q;
    RMatrix lhs = mul(r, f_.d(r, q + p), g.component(r, e_, f_, q));
    RMatrix rhs = scale(mul(r, g.component(r, e_, f_, q + 1), e_.d(r, q)), sign);
    out.comps[q] = sub(lhs, rhs);
  }
  return to_coords(out);
}

Homology HomComplex::homology(int p, const std::optional<Vec>& preferred) const {
  const Field f = r_->field();
  const std::size_t amb = ambient_dim(p);
  auto basis = module_basis(p);
  std::vector<Vec> cycles;
  if (!basis.empty()) {
    std::vector<Vec> images;
    for (const auto& b : basis) images.push_back(differential(p, b));
    Matrix dm = Matrix::from_columns(f, ambient_dim(p + 1), images);
    for (const auto& c : kernel_basis(dm)) {
      Vec z = zeros(f, amb);
      for (std::size_t i = 0; i < basis.size(); ++i) axpy(z, c[i], basis[i]);
      cycles.push_back(std::move(z));
    }
  }
  std::vector<Vec> boundaries;
  for (const auto& b : module_basis(p - 1)) {
    Vec img = differential(p - 1, b);
    if (!is_zero(img)) boundaries.push_back(std::move(img));
  }
  std::vector<Vec> candidates;
  if (preferred) candidates.push_back(*preferred);
  candidates.insert(candidates.end(), cycles.begin(), cycles.end());
  SubspaceReducer cyc(f, amb, cycles);
  std::vector<Vec> reps;
  std::vector<Vec> spanning = boundaries;
  for (const auto& c : candidates) {
    if (!cyc.contains(c)) continue;
    SubspaceReducer red(f, amb, spanning);
    if (red.contains(c)) continue;
    reps.push_back(c);
    spanning.push_back(c);
  }
  return Homology(f, p, amb, std::move(reps), std::move(boundaries), std::move(cycles));
}

std::size_t chain_hom_dim(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f, int d) {
  return HomComplex(r, e, f).homology(d).dim();
}

bool is_acyclic(const CommAlgebra& r, const ProjComplex& e) {
  HomComplex h(r, e, e);
  return h.homology(0).dim() == 0;
}

Scalar random_scalar(Field f, std::mt19937_64& rng) {
  if (f.is_rational()) return f.from_int(std::uniform_int_distribution<int>(-3, 3)(rng));
  return f.from_int(static_cast<std::int64_t>(std::uniform_int_distribution<std::uint64_t>(0, f.characteristic() - 1)(rng)));
}

std::optional<Equivalence> find_equivalence(const CommAlgebra& r, const ProjComplex& e, const ProjComplex& f,
                                            std::uint64_t seed, int attempts) {
  HomComplex hef(r, e, f), hfe(r, f, e), hee(r, e, e), hff(r, f, f);
  Vec id_e = hee.to_coords(identity_map(r, e));
  Vec id_f = hff.to_coords(identity_map(r, f));
  Homology ee = hee.homology(0, id_e), ff = hff.homology(0, id_f);
  if (ee.dim() == 0 || ff.dim() == 0) {
    if (ee.dim() == 0 && ff.dim() == 0) return Equivalence{zero_map(0), zero_map(0)};
    return std::nullopt;
  }
  Homology ef = hef.homology(0), fe = hfe.homology(0);
  if (ef.dim() == 0 || fe.dim() == 0) return std::nullopt;
  const Vec target_e = ee.coords(id_e), target_f = ff.coords(id_f);
  std::mt19937_64 rng(seed);
  const Field k = r.field();
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Vec phi_v = zeros(k, hef.ambient_dim(0));
    for (const auto& rep : ef.reps()) axpy(phi_v, random_scalar(k, rng), rep);
    ChainMap phi = hef.from_coords(0, phi_v);
    std::vector<Vec> cols;
    std::vector<ChainMap> psis;
    for (const auto& rep : fe.reps()) {
      psis.push_back(hfe.from_coords(0, rep));
      cols.push_back(ee.coords(hee.to_coords(compose(r, e, f, e, psis.back(), phi))));
    }
    auto c = solve(Matrix::from_columns(k, ee.dim(), cols), target_e);
    if (!c) continue;
    Vec psi_v = zeros(k, hfe.ambient_dim(0));
    for (std::size_t i = 0; i < psis.size(); ++i) axpy(psi_v, (*c)[i], fe.reps()[i]);
    ChainMap psi = hfe.from_coords(0, psi_v);
    if (ff.coords(hff.to_coords(compose(r, f, e, f, phi, psi))) != target_f) continue;
    return Equivalence{phi, psi};
  }
  return std::nullopt;
}

}  // namespace ttg
