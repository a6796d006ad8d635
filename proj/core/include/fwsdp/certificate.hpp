#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwsdp/partition.hpp"
#include "fwsdp/solver.hpp"
#include "fwsdp/symmetric_matrix.hpp"

namespace fwsdp {

/// Witness that a matrix lies in the pairwise block cone of a partition:
/// one PSD block per stored pair (i, j), i < j; missing pairs are zero.
/// The witnessed matrix is the sum of the scattered blocks.
struct FW2Certificate {
  Partition alpha;
  std::map<std::pair<int, int>, SymmetricMatrix> blocks;

  explicit FW2Certificate(Partition a) : alpha(std::move(a)) {}

  /// Stores a block after checking the (i, j) range and dimension; zero
  /// blocks are dropped rather than stored.
  void set_block(int i, int j, SymmetricMatrix value);
  /// Stored block or a zero matrix of the pair dimension.
  SymmetricMatrix block(int i, int j) const;
  bool has_block(int i, int j) const;
};

/// Sum of the scattered pair blocks.
SymmetricMatrix assemble(const FW2Certificate& cert);

struct VerifyReport {
  double sum_error = 0.0;      // max-norm of assemble(cert) - X
  double min_block_eig = 0.0;  // min over stored blocks; 0 if none stored
  bool valid = false;
  double tol_sum = 0.0;
  double tol_psd = 0.0;
};

VerifyReport verify_certificate(const FW2Certificate& cert, const SymmetricMatrix& x,
                                double tol_sum = 1e-9, double tol_psd = 1e-9);

/// Dual-cone test data: every pairwise submatrix of Z must be PSD.
struct DualWitness {
  SymmetricMatrix z;
  /// (i, j, min eigenvalue of the pair submatrix), lexicographic pair order.
  std::vector<std::tuple<int, int, double>> pair_eigs;
  double min_pair_eig = 0.0;
  bool member = false;
  double tol_psd = 0.0;
};

DualWitness dual_membership(const SymmetricMatrix& z, const Partition& alpha,
                            double tol_psd = 1e-9);

/// Rewrites a certificate under a finer partition beta as one under a
/// coarser alpha (beta must refine alpha) without changing the assembled
/// matrix. Merges one adjacent block pair at a time; the merged pair's
/// mutual block is split equally across the remaining blocks and the
/// retained blocks are embedded with zero padding. Merging to a single
/// block is not representable and is an error.
FW2Certificate coarsen_certificate(const FW2Certificate& cert, const Partition& alpha);

enum class MembershipStatus { member, non_member, numerical_failure };

struct MembershipReport {
  MembershipStatus status = MembershipStatus::numerical_failure;
  /// Smallest t >= 0 with X + t*I in the cone, to solver accuracy.
  double margin = 0.0;
  double tol_margin = 0.0;
  std::optional<FW2Certificate> certificate;
  std::optional<DualWitness> witness;
  Residuals solver_residuals;
  long iterations = 0;
  std::string diagnostic;
};

/// Default solver options for membership margins: tight tolerances, high
/// iteration cap.
SolverOptions membership_solver_options();

/// Decides X in FW_{alpha,2} by the margin program min t, X + t*I in the
/// cone. Member iff t* <= tol_margin (default 1e-6 * (1 + |X|_max)). With
/// p <= 2 blocks the cone is the full PSD cone and the test reduces to an
/// eigenvalue check. Non-members carry a separating dual witness when the
/// solver's multipliers validate against dual_membership.
MembershipReport membership(const SymmetricMatrix& x, const Partition& alpha,
                            const SolverOptions& opts = membership_solver_options(),
                            double tol_margin = -1.0);

}  // namespace fwsdp
