#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fwsdp::testing {

SymmetricMatrix comparison_matrix(const SymmetricMatrix& x) {
  SymmetricMatrix c(x.dim());
  for (int a = 0; a < x.dim(); ++a) {
    c.set(a, a, x(a, a));
    for (int b = a + 1; b < x.dim(); ++b) c.set(a, b, -std::abs(x(a, b)));
  }
  return c;
}

SddDecision sdd_feasible_scaling(const SymmetricMatrix& x, int iterations) {
  const int n = x.dim();
  SddDecision out;

  // Necessary conditions on the diagonal.
  std::vector<int> active;
  for (int a = 0; a < n; ++a) {
    if (x(a, a) > 0.0) {
      active.push_back(a);
      continue;
    }
    double row = 0.0;
    for (int b = 0; b < n; ++b)
      if (b != a) row += std::abs(x(a, b));
    if (x(a, a) < 0.0 || row > 0.0) {
      out.feasible = false;
      out.spectral_slack = 1.0;
      return out;
    }
    // zero diagonal with a zero row: drop it
  }
  if (active.empty()) {
    out.feasible = true;
    out.spectral_slack = -1.0;
    return out;
  }

  // Power iteration on S_ab = |X_ab| / sqrt(X_aa X_bb); the scalings d with
  // X_aa d_a >= sum |X_ab| d_b exist iff the spectral radius is <= 1.
  const int k = static_cast<int>(active.size());
  std::vector<double> s(static_cast<size_t>(k) * k, 0.0);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) {
      if (p == q) continue;
      const int a = active[static_cast<size_t>(p)];
      const int b = active[static_cast<size_t>(q)];
      s[static_cast<size_t>(p) * k + q] =
          std::abs(x(a, b)) / std::sqrt(x(a, a) * x(b, b));
    }

  std::vector<double> v(static_cast<size_t>(k), 1.0);
  std::vector<double> sv(static_cast<size_t>(k), 0.0);
  double rho = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double norm = 0.0;
    for (int p = 0; p < k; ++p) {
      double acc = 0.0;
      for (int q = 0; q < k; ++q) acc += s[static_cast<size_t>(p) * k + q] * v[static_cast<size_t>(q)];
      sv[static_cast<size_t>(p)] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      rho = 0.0;
      break;
    }
    double num = 0.0, den = 0.0;
    for (int p = 0; p < k; ++p) {
      num += v[static_cast<size_t>(p)] * sv[static_cast<size_t>(p)];
      den += v[static_cast<size_t>(p)] * v[static_cast<size_t>(p)];
    }
    rho = std::abs(num / den);
    for (int p = 0; p < k; ++p) v[static_cast<size_t>(p)] = sv[static_cast<size_t>(p)] / norm;
  }

  out.spectral_slack = rho - 1.0;
  out.feasible = rho <= 1.0 + 1e-10;
  return out;
}

double sdd_margin_eigen(const SymmetricMatrix& x) {
  return std::max(0.0, -min_eigenvalue(comparison_matrix(x)));
}

}  // namespace fwsdp::testing
