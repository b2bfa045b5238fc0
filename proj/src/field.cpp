#include "ttg/field.hpp"

#include <cctype>

#include "ttg/error.hpp"

namespace ttg {

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw Error(ErrorKind::Arithmetic, "division by zero in F_" + std::to_string(p));
  return t < 0 ? t + p : t;
}

std::int64_t reduce(const boost::multiprecision::cpp_int& v, std::uint32_t p) {
  boost::multiprecision::cpp_int r = v % p;
  if (r < 0) r += p;
  return static_cast<std::int64_t>(r);
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(std::uint32_t characteristic) : p_(characteristic) {
  if (p_ != 0 && !is_prime(p_))
    throw Error(ErrorKind::Schema, "field characteristic must be 0 or a prime, got " + std::to_string(p_));
}

Scalar Field::zero() const {
  Scalar s;
  s.p_ = p_;
  return s;
}

Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(std::int64_t v) const {
  Scalar s;
  s.p_ = p_;
  if (p_ == 0) {
    s.q_ = v;
  } else {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    s.m_ = r < 0 ? r + p_ : r;
  }
  return s;
}

Scalar Field::from_rational(const Rational& q) const {
  Scalar s;
  s.p_ = p_;
  if (p_ == 0) {
    s.q_ = q;
  } else {
    std::int64_t num = reduce(boost::multiprecision::numerator(q), p_);
    std::int64_t den = reduce(boost::multiprecision::denominator(q), p_);
    if (den == 0) throw Error(ErrorKind::Arithmetic, "denominator divisible by the characteristic");
    s.m_ = static_cast<std::int64_t>((static_cast<__int128>(num) * mod_inverse(den, p_)) % p_);
  }
  return s;
}

Scalar Field::parse(std::string_view text) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> boost::multiprecision::cpp_int {
    s = trim(s);
    if (s.empty()) throw Error(ErrorKind::Schema, "empty scalar");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw Error(ErrorKind::Schema, "malformed scalar '" + std::string(s) + "'");
    for (std::size_t k = i; k < s.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k])))
        throw Error(ErrorKind::Schema, "malformed scalar '" + std::string(s) + "'");
    boost::multiprecision::cpp_int v(std::string(s.substr(i)));
    return s[0] == '-' ? -v : v;
  };
  std::string_view t = trim(text);
  auto slash = t.find('/');
  boost::multiprecision::cpp_int num = parse_int(t.substr(0, slash));
  boost::multiprecision::cpp_int den = 1;
  if (slash != std::string_view::npos) den = parse_int(t.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::Schema, "zero denominator in '" + std::string(t) + "'");
  return from_rational(Rational(num, den));
}

void Scalar::check_same(const Scalar& o) const {
  if (p_ != o.p_)
    throw Error(ErrorKind::Arithmetic, "mixing characteristics " + std::to_string(p_) + " and " +
                                           std::to_string(o.p_));
}

bool Scalar::is_zero() const noexcept { return p_ == 0 ? q_.is_zero() : m_ == 0; }

bool Scalar::is_one() const noexcept { return p_ == 0 ? q_ == 1 : m_ == 1; }

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (p_ == 0)
    s.q_ = -q_;
  else if (m_ != 0)
    s.m_ = p_ - m_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (p_ == 0) {
    q_ += o.q_;
  } else {
    m_ += o.m_;
    if (m_ >= static_cast<std::int64_t>(p_)) m_ -= p_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(o);
  if (p_ == 0) {
    q_ -= o.q_;
  } else {
    m_ -= o.m_;
    if (m_ < 0) m_ += p_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (p_ == 0)
    q_ *= o.q_;
  else
    m_ = (m_ * o.m_) % p_;
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::Arithmetic, "inverse of zero");
  Scalar s = *this;
  if (p_ == 0)
    s.q_ = 1 / q_;
  else
    s.m_ = mod_inverse(m_, p_);
  return s;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  a.check_same(b);
  return a.p_ == 0 ? a.q_ == b.q_ : a.m_ == b.m_;
}

std::string Scalar::to_string() const {
  if (p_ != 0) return std::to_string(m_);
  auto num = boost::multiprecision::numerator(q_);
  auto den = boost::multiprecision::denominator(q_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace ttg
