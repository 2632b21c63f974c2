// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "linalg.hpp"

#include "errors.hpp"

#include <algorithm>

namespace loopterm {

namespace {

void check_same(const Vec &a, const Vec &b, const char *op) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": vectors of length " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
}

// In-place Gaussian elimination to reduced row-echelon form; returns pivot
// columns.
std::vector<std::size_t> rref(std::vector<Vec> &rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty())
    return pivots;
  std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0)
      ++p;
    if (p == rows.size())
      continue;
    std::swap(rows[r], rows[p]);
    Rational inv = 1 / rows[r][c];
    for (auto &x : rows[r])
      x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][c]) == 0)
        continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j)
        rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

} // namespace

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit(std::size_t n, std::size_t i) {
  Vec v = zeros(n);
  v.at(i) = 1;
  return v;
}

Rational dot(const Vec &a, const Vec &b) {
  check_same(a, b, "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0)
      s += a[i] * b[i];
  return s;
}

Vec add(const Vec &a, const Vec &b) {
  check_same(a, b, "add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec &a, const Vec &b) {
  check_same(a, b, "sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec &a, const Rational &s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] * s;
  return r;
}

Vec negate(const Vec &a) { return scale(a, Rational(-1)); }

Vec concat(const Vec &a, const Vec &b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Vec slice(const Vec &a, std::size_t begin, std::size_t count) {
  require(begin + count <= a.size(), ErrorCode::DimensionMismatch,
          "slice out of range");
  return Vec(a.begin() + static_cast<std::ptrdiff_t>(begin),
             a.begin() + static_cast<std::ptrdiff_t>(begin + count));
}

bool is_zero(const Vec &a) {
  return std::all_of(a.begin(), a.end(),
                     [](const Rational &x) { return sgn(x) == 0; });
}

Rational max_abs(const Vec &a) {
  Rational m = 0;
  for (const auto &x : a)
    if (abs(x) > m)
      m = abs(x);
  return m;
}

Vec primitive(const Vec &a) {
  if (is_zero(a))
    return a;
  Integer l = 1;
  for (const auto &x : a)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  Integer g = 0;
  for (const auto &x : a) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = Rational(a[i].get_num() * (l / a[i].get_den()) / g);
  return r;
}

Vec primitive_unsigned(const Vec &a) {
  Vec r = primitive(a);
  for (const auto &x : r) {
    if (sgn(x) == 0)
      continue;
    if (sgn(x) < 0)
      r = negate(r);
    break;
  }
  return r;
}

std::string to_string(const Vec &a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i)
      s += ", ";
    s += to_string(a[i]);
  }
  return s + ")";
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec> &rows) {
  if (rows.empty())
    return Matrix();
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == m.cols_, ErrorCode::DimensionMismatch,
            "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

Vec Matrix::row(std::size_t i) const {
  require(i < rows_, ErrorCode::DimensionMismatch, "row index out of range");
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vec Matrix::apply(const Vec &x) const {
  if (x.size() != cols_)
    throw Error(ErrorCode::DimensionMismatch,
                "matrix with " + std::to_string(cols_) +
                    " columns applied to vector of length " +
                    std::to_string(x.size()));
  Vec r = zeros(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0)
        r[i] += (*this)(i, j) * x[j];
  return r;
}

Matrix Matrix::operator*(const Matrix &other) const {
  require(cols_ == other.rows_, ErrorCode::DimensionMismatch,
          "matrix product dimension mismatch");
  Matrix r(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      for (std::size_t j = 0; j < other.cols_; ++j)
        r(i, j) += (*this)(i, k) * other(k, j);
  return r;
}

std::size_t rank(std::vector<Vec> vectors) { return rref(vectors).size(); }

std::vector<Vec> canonical_basis(const std::vector<Vec> &vectors) {
  std::vector<Vec> rows = vectors;
  rref(rows);
  for (auto &r : rows)
    r = primitive_unsigned(r);
  return rows;
}

std::optional<Vec> coordinates(const std::vector<Vec> &basis, const Vec &v) {
  const std::size_t k = basis.size();
  if (k == 0)
    return is_zero(v) ? std::optional<Vec>(Vec{}) : std::nullopt;
  const std::size_t n = v.size();
  for (const auto &b : basis)
    require(b.size() == n, ErrorCode::DimensionMismatch,
            "basis vector dimension mismatch");
  // Augmented system: n equations, k unknowns.
  std::vector<Vec> rows(n, Vec(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      rows[i][j] = basis[j][i];
    rows[i][k] = v[i];
  }
  auto pivots = rref(rows);
  std::size_t real_pivots = 0;
  for (auto c : pivots) {
    if (c == k)
      return std::nullopt; // inconsistent
    ++real_pivots;
  }
  require(real_pivots == k, ErrorCode::Precondition,
          "coordinates: basis is linearly dependent");
  Vec c(k);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    c[pivots[r]] = rows[r][k];
  return c;
}

} // namespace loopterm
