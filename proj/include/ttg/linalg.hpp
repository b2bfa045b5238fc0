#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ttg/field.hpp"

namespace ttg {

using Vec = std::vector<Scalar>;

Vec zeros(Field f, std::size_t n);
Vec unit_vector(Field f, std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
/// y += a * x
void axpy(Vec& y, const Scalar& a, const Vec& x);
Vec scaled(const Vec& x, const Scalar& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);

class Matrix {
 public:
  Matrix() = default;
  Matrix(Field f, std::size_t rows, std::size_t cols);

  static Matrix identity(Field f, std::size_t n);
  static Matrix from_columns(Field f, std::size_t rows, const std::vector<Vec>& cols);
  static Matrix from_rows(Field f, std::size_t cols, const std::vector<Vec>& rows);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec column(std::size_t j) const;
  void set_column(std::size_t j, const Vec& v);
  Matrix transpose() const;
  bool is_zero() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vec operator*(const Matrix& a, const Vec& v);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct Echelon {
  Matrix reduced;                    // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

Echelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
std::vector<Vec> kernel_basis(const Matrix& m);
std::vector<std::size_t> independent_columns(const Matrix& m);
std::optional<Vec> solve(const Matrix& a, const Vec& b);

struct AffineSolution {
  Vec particular;
  std::vector<Vec> kernel;
};
std::optional<AffineSolution> solve_affine(const Matrix& a, const Vec& b);
std::optional<Matrix> inverse(const Matrix& m);

/// Ambient space k^n modulo a subspace. The quotient basis is the set of
/// non-pivot coordinates of the subspace's reduced echelon basis.
class SubspaceReducer {
 public:
  SubspaceReducer(Field f, std::size_t ambient, const std::vector<Vec>& spanning);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t subspace_dim() const { return pivots_.size(); }
  std::size_t quotient_dim() const { return free_.size(); }
  const std::vector<std::size_t>& free_coordinates() const { return free_; }

  Vec reduce(const Vec& v) const;
  Vec quotient_coords(const Vec& v) const;
  bool contains(const Vec& v) const { return is_zero(reduce(v)); }

 private:
  Field field_;
  std::size_t ambient_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
};

}  // namespace ttg
