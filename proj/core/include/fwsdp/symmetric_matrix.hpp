#pragma once

#include <vector>

#include "fwsdp/partition.hpp"

namespace fwsdp {

/// Dense real symmetric matrix. Storage is the full square, kept exactly
/// symmetric: every mutation writes both triangles, and construction from
/// raw data symmetrizes. All entries must be finite.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Zero matrix of dimension n >= 1.
  explicit SymmetricMatrix(int n);

  /// Builds from full square data laid out row-major. Asymmetry up to
  /// `sym_tol` (absolute) is averaged away; beyond it is an error.
  static SymmetricMatrix from_rows(int n, const std::vector<double>& rows,
                                   double sym_tol = 1e-12);
  static SymmetricMatrix identity(int n);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  int dim() const { return n_; }
  double operator()(int a, int b) const { return data_[idx(a, b)]; }
  /// Writes both (a,b) and (b,a).
  void set(int a, int b, double value);
  void add(int a, int b, double value);

  const std::vector<double>& data() const { return data_; }

  double trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double s);
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) {
    a += b;
    return a;
  }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) {
    a *= s;
    return a;
  }

 private:
  size_t idx(int a, int b) const;
  int n_ = 0;
  std::vector<double> data_;
};

/// Trace inner product <A,B> = sum_ab A_ab B_ab.
double inner(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// Entrywise max norm of A - B.
double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// A = V diag(values) V^T with `values` ascending and V orthonormal.
/// Column k of `vectors` (row-major n x n) is the eigenvector for values[k].
struct EigenDecomposition {
  int n = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  double vector(int row, int k) const { return vectors[static_cast<size_t>(row) * n + k]; }
};

/// Cyclic Jacobi eigendecomposition. Deterministic; throws NumericalError
/// on non-finite input or if the sweep cap is exhausted before the
/// off-diagonal norm falls under 1e-12 relative.
EigenDecomposition sym_eigen(const SymmetricMatrix& a);

double min_eigenvalue(const SymmetricMatrix& a);

/// Nearest PSD matrix in Frobenius norm: eigenvalues clamped at zero.
SymmetricMatrix psd_project(const SymmetricMatrix& a);

/// The (k_i + k_j) x (k_i + k_j) submatrix [[X_ii, X_ij], [X_ji, X_jj]]
/// selected by the rows of blocks i and j. 1-indexed blocks, i < j.
SymmetricMatrix extract_pair(const SymmetricMatrix& x, const Partition& alpha,
                             int i, int j);

/// Adjoint of extract_pair: embeds a pair-sized matrix into an N x N matrix
/// that is zero outside the four (i, j) blocks.
SymmetricMatrix scatter_pair(const SymmetricMatrix& x_ij, const Partition& alpha,
                             int i, int j);

}  // namespace fwsdp
