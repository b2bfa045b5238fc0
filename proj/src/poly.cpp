#include "ttg/poly.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "ttg/error.hpp"

namespace ttg {

using boost::multiprecision::cpp_int;

Poly::Poly(Field f, std::vector<Scalar> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(Field f, const Scalar& c) { return Poly(f, {c}); }

Poly Poly::x(Field f) { return Poly(f, {f.zero(), f.one()}); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  Scalar inv = c_.back().inverse();
  Poly out = *this;
  for (auto& c : out.c_) c *= inv;
  return out;
}

Scalar Poly::eval(const Scalar& x) const {
  Scalar acc = field_.zero();
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Poly(a.field_, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Poly(a.field_, std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field_);
  std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1, a.field_.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Poly(a.field_, std::move(c));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorKind::Arithmetic, "polynomial division by zero");
  Field f = a.field();
  std::vector<Scalar> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(f), a};
  std::vector<Scalar> q(static_cast<std::size_t>(a.degree() - db + 1), f.zero());
  Scalar inv = b.leading().inverse();
  for (int i = a.degree(); i >= db; --i) {
    Scalar c = r[static_cast<std::size_t>(i)] * inv;
    q[static_cast<std::size_t>(i - db)] = c;
    if (c.is_zero()) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
  Field f = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(f, f.one()), s1(f);
  Poly t0(f), t1 = Poly::constant(f, f.one());
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Scalar inv = r0.leading().inverse();
  Poly c = Poly::constant(f, inv);
  return {r0 * c, s0 * c, t0 * c};
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& mod) {
  Field f = base.field();
  Poly result = Poly::constant(f, f.one()) % mod;
  Poly b = base % mod;
  while (e > 0) {
    if (e & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return result;
}

namespace {

void split_rec(const Poly& f, std::mt19937_64& rng, std::vector<Scalar>& out) {
  Field k = f.field();
  if (f.degree() <= 0) return;
  if (f.degree() == 1) {
    Poly m = f.monic();
    out.push_back(-m.coeff(0));
    return;
  }
  const std::uint64_t p = k.characteristic();
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  for (int attempt = 0; attempt < 256; ++attempt) {
    Poly shift(k, {k.from_int(static_cast<std::int64_t>(dist(rng))), k.one()});
    Poly h = powmod(shift, (p - 1) / 2, f) - Poly::constant(k, k.one());
    Poly g = gcd(f, h);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      split_rec(g, rng, out);
      split_rec(divmod(f, g).first, rng, out);
      return;
    }
  }
  throw Error(ErrorKind::Arithmetic, "root splitting did not converge");
}

}  // namespace

std::vector<Scalar> split_roots(const Poly& f, std::mt19937_64& rng) {
  Field k = f.field();
  if (k.is_rational()) throw Error(ErrorKind::Unsupported, "split_roots needs a prime field");
  std::vector<Scalar> out;
  const std::uint64_t p = k.characteristic();
  if (p < (1u << 16)) {
    for (std::uint64_t a = 0; a < p && static_cast<int>(out.size()) < f.degree(); ++a) {
      Scalar s = k.from_int(static_cast<std::int64_t>(a));
      if (f.eval(s).is_zero()) out.push_back(s);
    }
  } else {
    split_rec(f, rng, out);
    std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return a.residue() < b.residue(); });
  }
  if (static_cast<int>(out.size()) != f.degree())
    throw Error(ErrorKind::Arithmetic, "polynomial does not split into distinct linear factors");
  return out;
}

// --- factoring over Q ---------------------------------------------------------

namespace {

using IntPoly = std::vector<cpp_int>;

IntPoly primitive_integer(const Poly& f) {
  cpp_int lcm = 1;
  for (const auto& c : f.coeffs()) {
    cpp_int d = boost::multiprecision::denominator(c.rational());
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  IntPoly out;
  cpp_int g = 0;
  for (const auto& c : f.coeffs()) {
    Rational v = c.rational() * Rational(lcm);
    out.push_back(boost::multiprecision::numerator(v));
    g = boost::multiprecision::gcd(g, out.back());
  }
  if (g != 0)
    for (auto& c : out) c /= g;
  if (!out.empty() && out.back() < 0)
    for (auto& c : out) c = -c;
  return out;
}

cpp_int eval_int(const IntPoly& f, const cpp_int& x) {
  cpp_int acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

std::vector<cpp_int> divisors(cpp_int n) {
  if (n < 0) n = -n;
  std::vector<cpp_int> small, large;
  const cpp_int limit = 10000000;
  for (cpp_int d = 1; d * d <= n; ++d) {
    if (d > limit) throw Error(ErrorKind::Unsupported, "integer too large to factor by trial division");
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

/// Lagrange interpolation through (xs[i], ys[i]) over Q.
Poly interpolate(Field q, const std::vector<cpp_int>& xs, const std::vector<cpp_int>& ys) {
  Poly acc(q);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Poly term = Poly::constant(q, q.from_rational(Rational(ys[i])));
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      Poly lin(q, {q.from_rational(Rational(-xs[j])), q.one()});
      term = term * lin * Poly::constant(q, q.from_rational(Rational(1) / Rational(xs[i] - xs[j])));
    }
    acc = acc + term;
  }
  return acc;
}

bool integral(const Poly& f) {
  for (const auto& c : f.coeffs())
    if (boost::multiprecision::denominator(c.rational()) != 1) return false;
  return true;
}

/// Finds a nontrivial factor of degree k of the primitive polynomial f, if any.
std::optional<Poly> kronecker_factor(const Poly& f, int k) {
  Field q = f.field();
  IntPoly fi = primitive_integer(f);
  std::vector<std::pair<cpp_int, cpp_int>> pts;
  for (int x = 0; pts.size() < static_cast<std::size_t>(k + 1) && x < 64; ++x)
    for (int sgn : {1, -1}) {
      if (x == 0 && sgn < 0) continue;
      cpp_int xv = sgn * x;
      cpp_int v = eval_int(fi, xv);
      if (v == 0) return Poly(q, {q.from_rational(Rational(-xv)), q.one()});
      if (pts.size() < static_cast<std::size_t>(k + 1)) pts.emplace_back(xv, v);
    }
  std::vector<std::vector<cpp_int>> choices;
  std::size_t combos = 1;
  for (auto& [x, v] : pts) {
    auto ds = divisors(v);
    std::vector<cpp_int> signed_ds;
    for (auto& d : ds) {
      signed_ds.push_back(d);
      signed_ds.push_back(-d);
    }
    combos *= signed_ds.size();
    if (combos > 2000000) throw Error(ErrorKind::Unsupported, "polynomial too large for Kronecker factoring");
    choices.push_back(std::move(signed_ds));
  }
  std::vector<cpp_int> xs;
  for (auto& pt : pts) xs.push_back(pt.first);
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    std::vector<cpp_int> ys;
    for (std::size_t i = 0; i < idx.size(); ++i) ys.push_back(choices[i][idx[i]]);
    Poly g = interpolate(q, xs, ys);
    if (g.degree() == k && integral(g)) {
      auto [quo, rem] = divmod(f, g);
      if (rem.is_zero()) return g.monic();
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Poly> factor_rational(const Poly& f) {
  Field q = f.field();
  if (!q.is_rational()) throw Error(ErrorKind::Unsupported, "factor_rational needs the rationals");
  std::vector<Poly> out;
  std::vector<Poly> work{f.monic()};
  while (!work.empty()) {
    Poly g = work.back();
    work.pop_back();
    if (g.degree() <= 1) {
      if (g.degree() == 1) out.push_back(g);
      continue;
    }
    std::optional<Poly> h;
    for (int k = 1; k <= g.degree() / 2 && !h; ++k) h = kronecker_factor(g, k);
    if (!h) {
      out.push_back(g);
      continue;
    }
    work.push_back(*h);
    work.push_back(divmod(g, *h).first.monic());
  }
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
      if (a.coeffs()[i].rational() != b.coeffs()[i].rational()) return a.coeffs()[i].rational() < b.coeffs()[i].rational();
    return false;
  });
  return out;
}

}  // namespace ttg
