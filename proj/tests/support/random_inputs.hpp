#pragma once

#include <random>

#include "fwsdp/partition.hpp"
#include "fwsdp/symmetric_matrix.hpp"

namespace fwsdp::testing {

using Rng = std::mt19937_64;

inline SymmetricMatrix random_symmetric(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  SymmetricMatrix m(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m.set(a, b, dist(rng));
  return m;
}

// G^T G + ridge * I, positive semidefinite by construction.
inline SymmetricMatrix random_psd(int n, Rng& rng, double ridge = 0.0) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> g(static_cast<size_t>(n) * n);
  for (double& v : g) v = dist(rng);
  SymmetricMatrix m(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double s = a == b ? ridge : 0.0;
      for (int k = 0; k < n; ++k)
        s += g[static_cast<size_t>(k) * n + a] * g[static_cast<size_t>(k) * n + b];
      m.set(a, b, s);
    }
  }
  return m;
}

// All contiguous partitions (compositions) of n.
inline std::vector<Partition> all_partitions(int n) {
  std::vector<Partition> out;
  const int masks = 1 << (n - 1);
  for (int mask = 0; mask < masks; ++mask) {
    std::vector<int> sizes;
    int run = 1;
    for (int cut = 0; cut < n - 1; ++cut) {
      if (mask & (1 << cut)) {
        sizes.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    sizes.push_back(run);
    out.emplace_back(std::move(sizes));
  }
  return out;
}

}  // namespace fwsdp::testing
