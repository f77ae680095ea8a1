#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gcv {

/// Dense row-major matrix over an exact field (Gauss or Scalar).
template <class F>
class Matrix {
public:
  Matrix(std::size_t rows, std::size_t cols, const F& zero)
      : rows_(rows), cols_(cols), data_(rows * cols, zero) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<F> data_;
};

/// In-place reduced row echelon form; returns pivot columns in order.
/// Only the first `limit` columns are eligible as pivots.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m, std::size_t limit) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t pick = row;
    while (pick < m.rows() && m(pick, col).is_zero()) ++pick;
    if (pick == m.rows()) continue;
    m.swap_rows(row, pick);
    F inv = F(m(row, col));
    inv = inv.inverse();
    for (std::size_t c = col; c < m.cols(); ++c) {
      if (!m(row, c).is_zero()) m(row, c) = m(row, c) * inv;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      F factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (!m(row, c).is_zero()) m(r, c) = m(r, c) - factor * m(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of {x : A x = 0}, one vector per free column.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> a, const F& zero, const F& one) {
  auto pivots = rref(a, a.cols());
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(a.cols(), zero);
    v[free] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = zero - a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
struct LinearSolution {
  std::vector<F> particular;  // free variables set to zero
  std::size_t nullity = 0;
};

/// Solves A x = b. Returns nullopt when the system is inconsistent.
template <class F>
std::optional<LinearSolution<F>> solve(const Matrix<F>& a, const std::vector<F>& b, const F& zero) {
  if (b.size() != a.rows()) throw std::invalid_argument("right-hand side has wrong length");
  Matrix<F> aug(a.rows(), a.cols() + 1, zero);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  auto pivots = rref(aug, a.cols());
  for (std::size_t r = pivots.size(); r < a.rows(); ++r) {
    if (!aug(r, a.cols()).is_zero()) return std::nullopt;
  }
  LinearSolution<F> out;
  out.particular.assign(a.cols(), zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) out.particular[pivots[r]] = aug(r, a.cols());
  out.nullity = a.cols() - pivots.size();
  return out;
}

template <class F>
std::size_t rank(Matrix<F> a) {
  return rref(a, a.cols()).size();
}

}  // namespace gcv
