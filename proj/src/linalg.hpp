// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace loopterm {

using Vec = std::vector<Rational>;

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);

// All binary operations throw Error(DimensionMismatch) on size mismatch.
Rational dot(const Vec &a, const Vec &b);
Vec add(const Vec &a, const Vec &b);
Vec sub(const Vec &a, const Vec &b);
Vec scale(const Vec &a, const Rational &s);
Vec negate(const Vec &a);
Vec concat(const Vec &a, const Vec &b);
Vec slice(const Vec &a, std::size_t begin, std::size_t count);
bool is_zero(const Vec &a);
Rational max_abs(const Vec &a);

/// Positive multiple of `a` with coprime integer entries. Zero stays zero.
Vec primitive(const Vec &a);

/// primitive() with the first nonzero entry made positive (for lines).
Vec primitive_unsigned(const Vec &a);

std::string to_string(const Vec &a);

/// Dense row-major rational matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec> &rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational &operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vec row(std::size_t i) const;
  Vec apply(const Vec &x) const;
  Matrix operator*(const Matrix &other) const;

  bool operator==(const Matrix &other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::size_t rank(std::vector<Vec> vectors);

/// Reduced row-echelon basis of span(vectors), each row made primitive.
std::vector<Vec> canonical_basis(const std::vector<Vec> &vectors);

/// Coefficients c with sum c_i basis_i == v, if v is in the span. Requires a
/// linearly independent basis; throws Precondition otherwise.
std::optional<Vec> coordinates(const std::vector<Vec> &basis, const Vec &v);

} // namespace loopterm
