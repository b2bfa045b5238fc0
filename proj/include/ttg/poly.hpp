#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ttg/field.hpp"

namespace ttg {

/// Univariate polynomial, coefficients from the constant term up. The zero
/// polynomial has no coefficients.
class Poly {
 public:
  explicit Poly(Field f) : field_(f) {}
  Poly(Field f, std::vector<Scalar> coeffs);
  static Poly constant(Field f, const Scalar& c);
  static Poly x(Field f);

  Field field() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
  Scalar leading() const { return c_.empty() ? field_.zero() : c_.back(); }
  Poly monic() const;
  Scalar eval(const Scalar& x) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  Field field_;
  std::vector<Scalar> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
/// Returns (g, s, t) with s*a + t*b = g monic.
struct ExtGcd {
  Poly g, s, t;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);
Poly powmod(const Poly& base, std::uint64_t e, const Poly& mod);

/// Roots of a polynomial over F_p that splits into distinct linear factors.
std::vector<Scalar> split_roots(const Poly& f, std::mt19937_64& rng);

/// Monic irreducible factors over Q of a squarefree polynomial.
std::vector<Poly> factor_rational(const Poly& f);

}  // namespace ttg
