#pragma once

#include <string>

#include "fwsdp/certificate.hpp"
#include "fwsdp/polynomial.hpp"
#include "fwsdp/symmetric_matrix.hpp"

#ifndef FWSDP_TEST_DATA_DIR
#error "FWSDP_TEST_DATA_DIR must be defined by the build"
#endif

namespace fwsdp::testing {

inline std::string data_path(const std::string& name) {
  return std::string(FWSDP_TEST_DATA_DIR) + "/" + name;
}

// 4x4 PSD matrix with a known pairwise decomposition; mirrors
// data/fw4_matrix.json.
inline SymmetricMatrix fw4_matrix() {
  return SymmetricMatrix::from_rows(4, {6, 8, -2, -2,    //
                                        8, 16, 1, 1,     //
                                        -2, 1, 10, -1,   //
                                        -2, 1, -1, 24});
}

// The six 2x2 blocks certifying fw4_matrix under the all-ones partition;
// mirrors data/fw4_certificate.json.
inline FW2Certificate fw4_certificate() {
  FW2Certificate cert{Partition({1, 1, 1, 1})};
  cert.set_block(1, 2, SymmetricMatrix::from_rows(2, {4.5, 8, 8, 14.5}));
  cert.set_block(1, 3, SymmetricMatrix::from_rows(2, {1, -2, -2, 6}));
  cert.set_block(1, 4, SymmetricMatrix::from_rows(2, {0.5, -2, -2, 12}));
  cert.set_block(2, 3, SymmetricMatrix::from_rows(2, {1, 1, 1, 2}));
  cert.set_block(2, 4, SymmetricMatrix::from_rows(2, {0.5, 1, 1, 6}));
  cert.set_block(3, 4, SymmetricMatrix::from_rows(2, {2, -1, -1, 6}));
  return cert;
}

// 3x3 polynomial matrix in two variables whose pairwise-SOS decomposition
// exists under the natural row partition but not entrywise: the diagonal
// shift 0.315 sits between the two feasibility thresholds.
inline PolynomialMatrix shifted_pmatrix() {
  const int vars = 2;
  auto x = Polynomial::variable(vars, 0);
  auto y = Polynomial::variable(vars, 1);
  const Polynomial shift = Polynomial::constant(vars, 0.315);
  const Polynomial cross = x + y;

  PolynomialMatrix p(3, vars);
  p.set(0, 0, 4.0 * (x * x) + 9.0 * (y * y) + shift);
  p.set(1, 1, 9.0 * (x * x) + 4.0 * (y * y) + shift);
  p.set(2, 2, 1.0 * (x * x) + 25.0 * (y * y) + shift);
  p.set(0, 1, cross);
  p.set(0, 2, cross);
  p.set(1, 2, cross);
  return p;
}

}  // namespace fwsdp::testing
