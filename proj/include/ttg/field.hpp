#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ttg {

using Rational = boost::multiprecision::cpp_rational;

class Scalar;

/// A prime field F_p, or the rationals when the characteristic is 0.
class Field {
 public:
  explicit Field(std::uint32_t characteristic = 0);

  std::uint32_t characteristic() const noexcept { return p_; }
  bool is_rational() const noexcept { return p_ == 0; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t v) const;
  Scalar from_rational(const Rational& q) const;
  /// Decimal integer or "p/q".
  Scalar parse(std::string_view text) const;

  friend bool operator==(Field a, Field b) noexcept { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n) noexcept;

/// Element of a Field. Carries its characteristic; mixing fields throws.
class Scalar {
 public:
  Scalar() = default;

  std::uint32_t characteristic() const noexcept { return p_; }
  Field field() const { return Field(p_); }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar inverse() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Residue in [0, p) for prime fields.
  std::int64_t residue() const noexcept { return m_; }
  const Rational& rational() const noexcept { return q_; }

  std::string to_string() const;

 private:
  friend class Field;
  void check_same(const Scalar& o) const;

  std::uint32_t p_ = 0;
  std::int64_t m_ = 0;
  Rational q_;
};

}  // namespace ttg
