#include "fwsdp/symmetric_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fwsdp/errors.hpp"

namespace fwsdp {

namespace {

void check_dim(int n) {
  if (n < 1) throw Error("matrix dimension must be positive, got " + std::to_string(n));
}

void check_finite(const std::vector<double>& data) {
  for (double v : data)
    if (!std::isfinite(v)) throw NumericalError("matrix has non-finite entries");
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int n) : n_(n) {
  check_dim(n);
  data_.assign(static_cast<size_t>(n) * n, 0.0);
}

size_t SymmetricMatrix::idx(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_)
    throw Error("matrix index (" + std::to_string(a) + "," + std::to_string(b) +
                ") out of range for dimension " + std::to_string(n_));
  return static_cast<size_t>(a) * n_ + b;
}

SymmetricMatrix SymmetricMatrix::from_rows(int n, const std::vector<double>& rows,
                                           double sym_tol) {
  check_dim(n);
  if (rows.size() != static_cast<size_t>(n) * n)
    throw Error("expected " + std::to_string(n) + "x" + std::to_string(n) +
                " entries, got " + std::to_string(rows.size()));
  check_finite(rows);
  SymmetricMatrix m(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double upper = rows[static_cast<size_t>(a) * n + b];
      const double lower = rows[static_cast<size_t>(b) * n + a];
      if (std::abs(upper - lower) > sym_tol)
        throw Error("matrix is not symmetric at (" + std::to_string(a) + "," +
                    std::to_string(b) + "): " + std::to_string(upper) + " vs " +
                    std::to_string(lower));
      m.set(a, b, a == b ? upper : 0.5 * (upper + lower));
    }
  }
  return m;
}

SymmetricMatrix SymmetricMatrix::identity(int n) {
  SymmetricMatrix m(n);
  for (int a = 0; a < n; ++a) m.set(a, a, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix m(static_cast<int>(d.size()));
  for (int a = 0; a < m.dim(); ++a) m.set(a, a, d[static_cast<size_t>(a)]);
  return m;
}

void SymmetricMatrix::set(int a, int b, double value) {
  if (!std::isfinite(value)) throw NumericalError("non-finite matrix entry");
  data_[idx(a, b)] = value;
  data_[idx(b, a)] = value;
}

void SymmetricMatrix::add(int a, int b, double value) { set(a, b, (*this)(a, b) + value); }

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (int a = 0; a < n_; ++a) t += (*this)(a, a);
  return t;
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  if (n_ != other.n_) throw Error("dimension mismatch in matrix sum");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double inner(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw Error("dimension mismatch in inner product");
  double s = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (size_t k = 0; k < da.size(); ++k) s += da[k] * db[k];
  return s;
}

double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw Error("dimension mismatch in matrix comparison");
  double m = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
  return m;
}

namespace {

// Sum of squared off-diagonal entries of the work array.
double off_diagonal_sq(const std::vector<double>& w, int n) {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double v = w[static_cast<size_t>(a) * n + b];
      s += 2.0 * v * v;
    }
  return s;
}

}  // namespace

EigenDecomposition sym_eigen(const SymmetricMatrix& a) {
  check_finite(a.data());
  const int n = a.dim();
  std::vector<double> w = a.data();
  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) v[static_cast<size_t>(k) * n + k] = 1.0;

  auto at = [&](std::vector<double>& m, int r, int c) -> double& {
    return m[static_cast<size_t>(r) * n + c];
  };

  const double frob_sq = std::max(inner(a, a), 1e-300);
  const double stop_sq = 1e-24 * frob_sq;  // 1e-12 relative off-diagonal norm
  const int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_sq(w, n) <= stop_sq) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(w, p, q);
        if (apq == 0.0) continue;
        const double app = at(w, p, p);
        const double aqq = at(w, q, q);
        // Stable rotation: smaller root of t^2 + 2 t theta - 1 = 0.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(w, p, p) = app - t * apq;
        at(w, q, q) = aqq + t * apq;
        at(w, p, q) = 0.0;
        at(w, q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = at(w, r, p);
            const double arq = at(w, r, q);
            at(w, r, p) = at(w, p, r) = arp - s * (arq + tau * arp);
            at(w, r, q) = at(w, q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = at(v, r, p);
          const double vrq = at(v, r, q);
          at(v, r, p) = vrp - s * (vrq + tau * vrp);
          at(v, r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (sweep == max_sweeps && off_diagonal_sq(w, n) > stop_sq)
    throw NumericalError("Jacobi eigensolver did not converge in " +
                         std::to_string(max_sweeps) + " sweeps");

  EigenDecomposition out;
  out.n = n;
  out.values.resize(static_cast<size_t>(n));
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return w[static_cast<size_t>(x) * n + x] < w[static_cast<size_t>(y) * n + y];
  });
  out.vectors.assign(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<size_t>(k)];
    out.values[static_cast<size_t>(k)] = w[static_cast<size_t>(src) * n + src];
    for (int r = 0; r < n; ++r)
      out.vectors[static_cast<size_t>(r) * n + k] = v[static_cast<size_t>(r) * n + src];
  }
  return out;
}

double min_eigenvalue(const SymmetricMatrix& a) { return sym_eigen(a).values.front(); }

SymmetricMatrix psd_project(const SymmetricMatrix& a) {
  const int n = a.dim();
  // 1x1 shortcut keeps the solver's inner loop off the eigensolver.
  if (n == 1) {
    SymmetricMatrix r(1);
    r.set(0, 0, std::max(a(0, 0), 0.0));
    return r;
  }
  const EigenDecomposition e = sym_eigen(a);
  if (e.values.front() >= 0.0) return a;
  SymmetricMatrix r(n);
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double lam = e.values[static_cast<size_t>(k)];
        if (lam <= 0.0) continue;
        s += lam * e.vector(x, k) * e.vector(y, k);
      }
      r.set(x, y, s);
    }
  }
  return r;
}

SymmetricMatrix extract_pair(const SymmetricMatrix& x, const Partition& alpha,
                             int i, int j) {
  if (x.dim() != alpha.dimension())
    throw Error("matrix dimension " + std::to_string(x.dim()) +
                " does not match partition dimension " +
                std::to_string(alpha.dimension()));
  const PairRange r = pair_range(alpha, i, j);
  SymmetricMatrix out(r.pair_dim());
  auto row_of = [&](int local) {
    return local < r.len_i ? r.off_i + local : r.off_j + (local - r.len_i);
  };
  for (int a = 0; a < out.dim(); ++a)
    for (int b = a; b < out.dim(); ++b) out.set(a, b, x(row_of(a), row_of(b)));
  return out;
}

SymmetricMatrix scatter_pair(const SymmetricMatrix& x_ij, const Partition& alpha,
                             int i, int j) {
  const PairRange r = pair_range(alpha, i, j);
  if (x_ij.dim() != r.pair_dim())
    throw Error("pair block dimension " + std::to_string(x_ij.dim()) +
                " does not match k_i + k_j = " + std::to_string(r.pair_dim()));
  SymmetricMatrix out(alpha.dimension());
  auto row_of = [&](int local) {
    return local < r.len_i ? r.off_i + local : r.off_j + (local - r.len_i);
  };
  for (int a = 0; a < x_ij.dim(); ++a)
    for (int b = a; b < x_ij.dim(); ++b) out.set(row_of(a), row_of(b), x_ij(a, b));
  return out;
}

}  // namespace fwsdp
