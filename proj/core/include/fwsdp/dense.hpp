#pragma once

#include <vector>

namespace fwsdp::detail {

using Vec = std::vector<double>;

/// Row-major rectangular matrix for the solver's vectorized data. Not part
/// of the public modeling surface; SymmetricMatrix is.
struct Mat {
  int rows = 0;
  int cols = 0;
  Vec data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

Vec matvec(const Mat& a, const Vec& x);
Vec matvec_transpose(const Mat& a, const Vec& x);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
/// y += s * x
void axpy(double s, const Vec& x, Vec& y);

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix. Retries once with a diagonal shift when a pivot degenerates, so
/// consistent rank-deficient normal equations still solve; `regularized`
/// records that fallback.
class Cholesky {
 public:
  /// `m` is n x n, only the lower triangle is read.
  explicit Cholesky(const Mat& m);

  Vec solve(const Vec& rhs) const;
  bool regularized() const { return regularized_; }
  int dim() const { return n_; }

 private:
  bool factor(const Mat& m, double shift);
  int n_ = 0;
  Mat l_;
  bool regularized_ = false;
};

}  // namespace fwsdp::detail
