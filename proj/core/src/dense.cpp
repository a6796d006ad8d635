#include "fwsdp/dense.hpp"

#include <algorithm>
#include <cmath>

#include "fwsdp/errors.hpp"

namespace fwsdp::detail {

Vec matvec(const Mat& a, const Vec& x) {
  Vec y(static_cast<size_t>(a.rows), 0.0);
  for (int r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + static_cast<size_t>(r) * a.cols;
    double s = 0.0;
    for (int c = 0; c < a.cols; ++c) s += row[c] * x[static_cast<size_t>(c)];
    y[static_cast<size_t>(r)] = s;
  }
  return y;
}

Vec matvec_transpose(const Mat& a, const Vec& x) {
  Vec y(static_cast<size_t>(a.cols), 0.0);
  for (int r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + static_cast<size_t>(r) * a.cols;
    const double xr = x[static_cast<size_t>(r)];
    if (xr == 0.0) continue;
    for (int c = 0; c < a.cols; ++c) y[static_cast<size_t>(c)] += row[c] * xr;
  }
  return y;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double s, const Vec& x, Vec& y) {
  for (size_t k = 0; k < x.size(); ++k) y[k] += s * x[k];
}

Cholesky::Cholesky(const Mat& m) : n_(m.rows) {
  if (m.rows != m.cols) throw Error("Cholesky requires a square matrix");
  double max_diag = 0.0;
  for (int k = 0; k < n_; ++k) max_diag = std::max(max_diag, std::abs(m.at(k, k)));
  if (factor(m, 0.0)) return;
  // Degenerate pivot: shift and accept a slightly regularized solve.
  regularized_ = true;
  const double shift = std::max(max_diag, 1.0) * 1e-10;
  if (!factor(m, shift))
    throw NumericalError("normal equations are numerically singular");
}

bool Cholesky::factor(const Mat& m, double shift) {
  l_ = Mat(n_, n_);
  double max_diag = 0.0;
  for (int k = 0; k < n_; ++k) max_diag = std::max(max_diag, std::abs(m.at(k, k)));
  const double pivot_floor = std::max(max_diag, 1.0) * 1e-14;
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c <= r; ++c) {
      double s = m.at(r, c) + (r == c ? shift : 0.0);
      for (int k = 0; k < c; ++k) s -= l_.at(r, k) * l_.at(c, k);
      if (r == c) {
        if (s <= pivot_floor) return false;
        l_.at(r, r) = std::sqrt(s);
      } else {
        l_.at(r, c) = s / l_.at(c, c);
      }
    }
  }
  return true;
}

Vec Cholesky::solve(const Vec& rhs) const {
  Vec y(rhs);
  for (int r = 0; r < n_; ++r) {
    double s = y[static_cast<size_t>(r)];
    for (int k = 0; k < r; ++k) s -= l_.at(r, k) * y[static_cast<size_t>(k)];
    y[static_cast<size_t>(r)] = s / l_.at(r, r);
  }
  for (int r = n_ - 1; r >= 0; --r) {
    double s = y[static_cast<size_t>(r)];
    for (int k = r + 1; k < n_; ++k) s -= l_.at(k, r) * y[static_cast<size_t>(k)];
    y[static_cast<size_t>(r)] = s / l_.at(r, r);
  }
  return y;
}

}  // namespace fwsdp::detail
