#include "ttg/comm_algebra.hpp"

#include <algorithm>
#include <random>

#include "ttg/error.hpp"
#include "ttg/poly.hpp"

namespace ttg {

CommAlgebra::CommAlgebra(Field f, std::vector<std::string> names, std::vector<std::vector<Vec>> mult, Vec unit)
    : field_(f), names_(std::move(names)), mult_(std::move(mult)), unit_(std::move(unit)) {
  const std::size_t n = names_.size();
  if (n > kMaxAlgebraDim)
    throw Error(ErrorKind::DimensionTooLarge, "algebra dimension " + std::to_string(n) + " exceeds " +
                                                  std::to_string(kMaxAlgebraDim));
  if (mult_.size() != n || unit_.size() != n) throw Error(ErrorKind::Schema, "structure constants have wrong shape");
  for (const auto& row : mult_) {
    if (row.size() != n) throw Error(ErrorKind::Schema, "structure constants have wrong shape");
    for (const auto& v : row)
      if (v.size() != n) throw Error(ErrorKind::Schema, "structure constants have wrong shape");
  }
}

Vec CommAlgebra::mul(const Vec& a, const Vec& b) const {
  Vec out = zero();
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (b[j].is_zero()) continue;
      axpy(out, a[i] * b[j], mult_[i][j]);
    }
  }
  return out;
}

Vec CommAlgebra::power(const Vec& a, std::uint64_t e) const {
  Vec result = unit_;
  Vec base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

Matrix CommAlgebra::left_mult(const Vec& a) const {
  Matrix m(field_, dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) m.set_column(j, mul(a, basis(j)));
  return m;
}

void CommAlgebra::validate() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (mult_[i][j] != mult_[j][i])
        throw Error(ErrorKind::NotCommutative, names_[i] + " * " + names_[j] + " != " + names_[j] + " * " + names_[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (mul(mult_[i][j], basis(k)) != mul(basis(i), mult_[j][k]))
          throw Error(ErrorKind::Schema, "multiplication is not associative on (" + names_[i] + ", " + names_[j] +
                                             ", " + names_[k] + ")");
  for (std::size_t i = 0; i < n; ++i)
    if (mul(unit_, basis(i)) != basis(i)) throw Error(ErrorKind::Schema, "unit does not act as identity on " + names_[i]);
}

std::string CommAlgebra::format(const Vec& a) const {
  std::string out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += a[i].to_string() + "*" + names_[i];
  }
  return out.empty() ? "0" : out;
}

Corner corner(const CommAlgebra& r, const Vec& e) {
  const Field f = r.field();
  Matrix le = r.left_mult(e);
  auto cols = independent_columns(le);
  std::vector<Vec> basis;
  for (auto c : cols) basis.push_back(le.column(c));
  const std::size_t m = basis.size();
  Matrix incl = Matrix::from_columns(f, r.dim(), basis);
  auto coords = [&](const Vec& v) {
    auto s = solve(incl, v);
    if (!s) throw Error(ErrorKind::Arithmetic, "element is not in the corner");
    return *s;
  };
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("c" + std::to_string(i));
  std::vector<std::vector<Vec>> mult(m, std::vector<Vec>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mult[i][j] = coords(r.mul(basis[i], basis[j]));
  Vec unit = m == 0 ? Vec{} : coords(e);
  Matrix proj(f, m, r.dim());
  for (std::size_t j = 0; j < r.dim(); ++j)
    if (m) proj.set_column(j, coords(r.mul(e, r.basis(j))));
  return {CommAlgebra(f, std::move(names), std::move(mult), std::move(unit)), incl, proj};
}

namespace {

std::vector<Vec> span_basis(Field f, std::size_t n, const std::vector<Vec>& vs) {
  if (vs.empty()) return {};
  Matrix m = Matrix::from_columns(f, n, vs);
  std::vector<Vec> out;
  for (auto c : independent_columns(m)) out.push_back(vs[c]);
  return out;
}

}  // namespace

std::vector<Vec> nilradical(const CommAlgebra& r) {
  const Field f = r.field();
  const std::size_t n = r.dim();
  if (n == 0) return {};
  Matrix m(f, n, n);
  if (!f.is_rational()) {
    // a is nilpotent iff a^(p^k) = 0 once p^k >= n, and a |-> a^(p^k) is linear.
    const std::uint64_t p = f.characteristic();
    std::uint64_t q = p;
    while (q < n) q *= p;
    for (std::size_t j = 0; j < n; ++j) m.set_column(j, r.power(r.basis(j), q));
  } else {
    // Radical of the trace form.
    std::vector<Matrix> l;
    for (std::size_t i = 0; i < n; ++i) l.push_back(r.left_mult(r.basis(i)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Matrix prod = l[i] * l[j];
        Scalar tr = f.zero();
        for (std::size_t k = 0; k < n; ++k) tr += prod(k, k);
        m(i, j) = tr;
      }
  }
  return kernel_basis(m);
}

std::vector<Vec> ideal_power(const CommAlgebra& r, const std::vector<Vec>& ideal, std::size_t k) {
  std::vector<Vec> cur = span_basis(r.field(), r.dim(), ideal);
  for (std::size_t step = 1; step < k && !cur.empty(); ++step) {
    std::vector<Vec> next;
    for (const auto& a : cur)
      for (const auto& b : ideal) next.push_back(r.mul(a, b));
    cur = span_basis(r.field(), r.dim(), next);
  }
  return cur;
}

namespace {

/// R modulo a nil ideal, with the maps needed to lift idempotents back.
struct Quotient {
  CommAlgebra algebra;
  std::vector<std::size_t> free;  // R coordinate carrying each quotient basis element
};

Quotient semisimple_quotient(const CommAlgebra& r, const std::vector<Vec>& nil) {
  const Field f = r.field();
  SubspaceReducer red(f, r.dim(), nil);
  const auto& free = red.free_coordinates();
  const std::size_t m = free.size();
  std::vector<std::string> names;
  for (auto c : free) names.push_back(r.names()[c]);
  std::vector<std::vector<Vec>> mult(m, std::vector<Vec>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) mult[i][j] = red.quotient_coords(r.mul(r.basis(free[i]), r.basis(free[j])));
  return {CommAlgebra(f, std::move(names), std::move(mult), red.quotient_coords(r.unit())), free};
}

/// Minimal polynomial of c inside the corner with unit e.
Poly minimal_polynomial(const CommAlgebra& s, const Vec& e, const Vec& c) {
  const Field f = s.field();
  std::vector<Vec> powers{e};
  while (true) {
    Vec next = s.mul(powers.back(), c);
    Matrix m = Matrix::from_columns(f, s.dim(), powers);
    auto sol = solve(m, next);
    if (sol) {
      std::vector<Scalar> coeffs;
      for (auto& v : *sol) coeffs.push_back(-v);
      coeffs.push_back(f.one());
      return Poly(f, std::move(coeffs));
    }
    powers.push_back(next);
  }
}

Vec eval_poly(const CommAlgebra& s, const Poly& p, const Vec& unit, const Vec& c) {
  Vec acc = s.zero();
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    acc = s.mul(acc, c);
    axpy(acc, p.coeffs()[i], unit);
  }
  return acc;
}

std::vector<Vec> split_char_p(const CommAlgebra& s) {
  const Field f = s.field();
  const std::size_t m = s.dim();
  const std::uint64_t p = f.characteristic();
  Matrix frob(f, m, m);
  for (std::size_t j = 0; j < m; ++j) frob.set_column(j, s.power(s.basis(j), p) - s.basis(j));
  auto berlekamp = kernel_basis(frob);
  std::mt19937_64 rng(0x5eed);
  std::vector<Vec> idems{s.unit()};
  for (const auto& b : berlekamp) {
    std::vector<Vec> next;
    for (const auto& e : idems) {
      Vec c = s.mul(e, b);
      Poly mp = minimal_polynomial(s, e, c);
      if (mp.degree() <= 1) {
        next.push_back(e);
        continue;
      }
      auto roots = split_roots(mp, rng);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        Vec acc = e;
        for (std::size_t j = 0; j < roots.size(); ++j) {
          if (j == i) continue;
          Vec lin = c - scaled(e, roots[j]);
          acc = scaled(s.mul(acc, lin), (roots[i] - roots[j]).inverse());
        }
        next.push_back(acc);
      }
    }
    idems = std::move(next);
  }
  return idems;
}

std::vector<Vec> split_char_0(const CommAlgebra& s) {
  const Field f = s.field();
  const std::size_t m = s.dim();
  if (m <= 1) return {s.unit()};
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uniform_int_distribution<int> dist(-(2 + attempt), 2 + attempt);
    Vec b = s.zero();
    for (std::size_t i = 0; i < m; ++i) b[i] = f.from_int(dist(rng));
    Poly mp = minimal_polynomial(s, s.unit(), b);
    if (static_cast<std::size_t>(mp.degree()) != m) continue;
    auto factors = factor_rational(mp);
    std::vector<Vec> out;
    for (const auto& fi : factors) {
      Poly cof = divmod(mp, fi).first;
      auto eg = ext_gcd(cof, fi);
      if (eg.g.degree() != 0) throw Error(ErrorKind::Arithmetic, "minimal polynomial is not squarefree");
      out.push_back(eval_poly(s, eg.s * cof, s.unit(), b));
    }
    return out;
  }
  throw Error(ErrorKind::Arithmetic, "no generating element found for the semisimple quotient");
}

Vec lift_idempotent(const CommAlgebra& r, Vec a) {
  const Field f = r.field();
  for (int it = 0; it < 64; ++it) {
    Vec a2 = r.mul(a, a);
    if (a2 == a) return a;
    Vec a3 = r.mul(a2, a);
    a = scaled(a2, f.from_int(3)) - scaled(a3, f.from_int(2));
  }
  throw Error(ErrorKind::Arithmetic, "idempotent lifting did not converge");
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.characteristic() == 0) return a.rational() < b.rational();
  return a.residue() < b.residue();
}

}  // namespace

std::vector<Vec> primitive_idempotents(const CommAlgebra& r) {
  if (r.dim() == 0) return {};
  auto nil = nilradical(r);
  Quotient q = semisimple_quotient(r, nil);
  auto idems = r.field().is_rational() ? split_char_0(q.algebra) : split_char_p(q.algebra);
  std::vector<Vec> out;
  for (const auto& e : idems) {
    Vec pre = r.zero();
    for (std::size_t i = 0; i < q.free.size(); ++i) pre[q.free[i]] = e[i];
    out.push_back(lift_idempotent(r, pre));
  }
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == b[i]) continue;
      return scalar_less(b[i], a[i]);
    }
    return false;
  });
  return out;
}

LocalSignature local_signature(const CommAlgebra& local) {
  LocalSignature sig;
  sig.dim = local.dim();
  auto nil = nilradical(local);
  sig.residue_degree = local.dim() - nil.size();
  for (std::size_t k = 1;; ++k) {
    auto nk = ideal_power(local, nil, k);
    if (nk.empty()) break;
    sig.loewy.push_back(nk.size());
  }
  return sig;
}

Vec SpecRing::idempotent_of(PointSet u) const {
  Vec e = ring.zero();
  for (std::size_t i = 0; i < idempotents.size(); ++i)
    if (point_in(u, i)) e = e + idempotents[i];
  return e;
}

SpecRing spec_ring(const CommAlgebra& r) {
  if (r.dim() > kMaxAlgebraDim) throw Error(ErrorKind::DimensionTooLarge, "algebra dimension exceeds 8");
  r.validate();
  SpecRing s;
  s.ring = r;
  s.idempotents = primitive_idempotents(r);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < s.idempotents.size(); ++i) labels.push_back("e" + std::to_string(i + 1));
  std::vector<PointSet> closed;
  for (std::size_t i = 0; i < s.idempotents.size(); ++i) closed.push_back(1ULL << i);
  s.space = FiniteSpace(std::move(labels), closed);
  return s;
}

bool is_unital_hom(const CommAlgebra& a, const CommAlgebra& b, const Matrix& m) {
  if (m.rows() != b.dim() || m.cols() != a.dim()) return false;
  if (a.dim() == 0) return b.dim() == 0 || is_zero(b.unit());
  if (m * a.unit() != b.unit()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (m * a.product(i, j) != b.mul(m.column(i), m.column(j))) return false;
  return true;
}

namespace {

/// Isomorphism between local algebras of the form k[x]/(x^m).
std::optional<Matrix> local_iso(const CommAlgebra& a, const CommAlgebra& b, std::string& reason) {
  const Field f = a.field();
  auto sa = local_signature(a);
  auto sb = local_signature(b);
  if (!(sa == sb)) {
    reason = "local factors have different signatures";
    return std::nullopt;
  }
  if (sa.residue_degree != 1) {
    reason = "local factor with residue field larger than the base field is unsupported";
    return std::nullopt;
  }
  if (!sa.loewy.empty() && sa.loewy[0] - (sa.loewy.size() > 1 ? sa.loewy[1] : 0) != 1) {
    reason = "local factor is not monogenic";
    return std::nullopt;
  }
  auto generator = [](const CommAlgebra& r) {
    auto nil = nilradical(r);
    if (nil.empty()) return r.zero();
    auto n2 = ideal_power(r, nil, 2);
    SubspaceReducer red(r.field(), r.dim(), n2);
    for (const auto& v : nil)
      if (!red.contains(v)) return v;
    return r.zero();
  };
  Vec x = generator(a), y = generator(b);
  std::vector<Vec> pa{a.unit()}, pb{b.unit()};
  for (std::size_t k = 1; k < a.dim(); ++k) {
    pa.push_back(a.mul(pa.back(), x));
    pb.push_back(b.mul(pb.back(), y));
  }
  Matrix ma = Matrix::from_columns(f, a.dim(), pa);
  Matrix mb = Matrix::from_columns(f, b.dim(), pb);
  auto inv = inverse(ma);
  if (!inv) {
    reason = "powers of the nilpotent generator do not span";
    return std::nullopt;
  }
  return mb * *inv;
}

}  // namespace

IsoResult find_isomorphism(const CommAlgebra& a, const CommAlgebra& b) {
  IsoResult res;
  if (!(a.field() == b.field())) {
    res.reason = "algebras are over different fields";
    return res;
  }
  const Field f = a.field();
  if (a.dim() != b.dim()) {
    res.reason = "dimensions differ (" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")";
    return res;
  }
  auto ea = primitive_idempotents(a);
  auto eb = primitive_idempotents(b);
  if (ea.size() != eb.size()) {
    res.reason = "numbers of local factors differ";
    return res;
  }
  std::vector<Corner> ca, cb;
  std::vector<LocalSignature> sa, sb;
  for (const auto& e : ea) {
    ca.push_back(corner(a, e));
    sa.push_back(local_signature(ca.back().algebra));
  }
  for (const auto& e : eb) {
    cb.push_back(corner(b, e));
    sb.push_back(local_signature(cb.back().algebra));
  }
  Matrix total(f, b.dim(), a.dim());
  std::vector<bool> used(eb.size(), false);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    std::size_t j = 0;
    while (j < eb.size() && (used[j] || !(sa[i] == sb[j]))) ++j;
    if (j == eb.size()) {
      res.reason = "local factor " + std::to_string(i) + " has no partner with the same signature";
      return res;
    }
    used[j] = true;
    auto phi = local_iso(ca[i].algebra, cb[j].algebra, res.reason);
    if (!phi) return res;
    total = total + cb[j].inclusion * *phi * ca[i].projection;
  }
  if (!is_unital_hom(a, b, total) || !inverse(total)) {
    res.reason = "constructed map failed verification";
    return res;
  }
  res.map = total;
  return res;
}

}  // namespace ttg
