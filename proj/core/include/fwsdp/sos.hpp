#pragma once

#include <optional>
#include <vector>

#include "fwsdp/certificate.hpp"
#include "fwsdp/conic_program.hpp"
#include "fwsdp/polynomial.hpp"

namespace fwsdp {

/// Cone placed on the Gram matrix of an SOS program.
struct SosCone {
  enum class Kind { full, fw2, block };
  Kind kind = Kind::full;
  /// Explicit partition for block mode (scalar programs only; matrix
  /// programs derive the natural row partition).
  std::optional<Partition> block_partition;
  /// Alternative block-mode spec: uniform partition with this many blocks.
  std::optional<int> uniform_blocks;

  static SosCone full() { return {}; }
  static SosCone fw2() { return {Kind::fw2, std::nullopt, std::nullopt}; }
  static SosCone block(Partition alpha) {
    return {Kind::block, std::move(alpha), std::nullopt};
  }
  static SosCone block_uniform(int p) { return {Kind::block, std::nullopt, p}; }
};

/// The polynomial sum_ab Q_ab m_a m_b over the basis monomials, with like
/// terms combined.
Polynomial gram_reconstruct(const SymmetricMatrix& q, const MonomialBasis& basis);

/// A built SOS program plus the bookkeeping needed to interpret solutions.
struct SosProgram {
  ConicProgram program;
  MonomialBasis basis;
  int gram_dim = 0;
  /// Partition applied to the Gram matrix ({N} for the full cone).
  Partition gram_partition = Partition({1});
  /// Index of the free gamma variable in the free segment, -1 when absent.
  int gamma_index = -1;
};

/// Coefficient matching for v^T Q v = f0 + sum_i y_i f_i with objective
/// <b, y>; Q lives in the PSD cone (full), the all-ones pairwise cone
/// (fw2), or the pairwise cone of a block partition. The half-degree is
/// inferred as ceil(deg/2) over f0 and the f_i.
SosProgram sos_program(const Polynomial& f0, const std::vector<Polynomial>& fs,
                       const std::vector<double>& b, const SosCone& mode);

/// Matrix SOS: P(x) - gamma*I = (I kron v_d)^T Q (I kron v_d), with gamma
/// present only when gamma_objective (objective max gamma, encoded as
/// min -gamma). Block mode uses the natural partition that groups the Gram
/// matrix by matrix row, p blocks of size C(m+d, d).
SosProgram matrix_sos_program(const PolynomialMatrix& p, bool gamma_objective,
                              const SosCone& mode);

/// Largest gamma with f0 - gamma certified SOS in the given cone mode.
struct SosBound {
  double gamma = 0.0;
  Solution solution;
  SosProgram prog;
};
SosBound sos_bound(const Polynomial& f0, const SosCone& mode,
                   const SolverOptions& opts = membership_solver_options());

/// Feasibility of an SOS program decided through the margin form: smallest
/// t >= 0 such that the Gram shifted by t*I admits the required
/// decomposition. Feasible iff the margin vanishes.
struct SosFeasibility {
  bool feasible = false;
  double margin = 0.0;
  double tol_margin = 0.0;
  Solution solution;
};
SosFeasibility matrix_sos_feasible(const PolynomialMatrix& p, const SosCone& mode,
                                   const SolverOptions& opts = membership_solver_options(),
                                   double tol_margin = 1e-4);

/// Reconstructs the polynomial matrix certified by a Gram matrix in the
/// (I kron v_d) pairing; inverse of the coefficient-matching constraints.
PolynomialMatrix matrix_gram_reconstruct(const SymmetricMatrix& q, int size,
                                         const MonomialBasis& basis);

/// Chained quadratic benchmark polynomial in n >= 3 variables: squared
/// coupling brackets plus the square of the coordinate sum, degree 4.
Polynomial benchmark_q(int n);

}  // namespace fwsdp
