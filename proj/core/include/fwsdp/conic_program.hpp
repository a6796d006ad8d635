#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwsdp/partition.hpp"
#include "fwsdp/symmetric_matrix.hpp"

namespace fwsdp {

/// Product cone: an ordered list of PSD blocks followed by an optional free
/// (unconstrained) segment of raw scalar variables.
struct ConeLayout {
  std::vector<int> psd_dims;
  int free_dim = 0;

  int block_count() const { return static_cast<int>(psd_dims.size()); }
};

/// One symmetric data matrix over the product cone: a symmetric block per
/// PSD block plus a linear functional on the free segment. Represents C or
/// one A_i; pairs with a variable point via `inner`.
struct BlockMatrix {
  std::vector<SymmetricMatrix> blocks;
  std::vector<double> free_coeffs;

  static BlockMatrix zero(const ConeLayout& cone);
};

enum class Provenance { original, restricted, relaxed };

/// Standard primal-form conic program
///   min <C,X>  s.t.  <A_i,X> = b_i,  X in (PSD blocks) x R^free.
struct ConicProgram {
  ConeLayout cone;
  BlockMatrix objective;
  std::vector<BlockMatrix> constraints;
  std::vector<double> rhs;

  Provenance provenance = Provenance::original;
  /// Partition of the split block, for restricted/relaxed programs.
  std::optional<Partition> partition;
  /// (i, j) pair label per PSD block when the blocks realize a pairwise
  /// decomposition; 1-indexed, empty otherwise.
  std::vector<std::pair<int, int>> pair_labels;
  /// Index of the 1x1 margin variable block appended by margin_program,
  /// -1 when absent.
  int margin_block = -1;
  /// Offset of the vectorized free symmetric variable created by
  /// relax_dual_fw (upper triangle, row-major); -1 when absent.
  int free_x_offset = -1;

  int constraint_count() const { return static_cast<int>(constraints.size()); }
  /// Checks every A_i and C conforms to the cone layout and b has length m.
  void validate() const;
};

/// Primal-dual point audited by kkt_residuals; what the solver returns.
enum class SolveStatus { optimal, infeasible_suspected, max_iterations };

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;

  double max() const;
};

struct Solution {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<SymmetricMatrix> blocks;
  std::vector<double> free_values;
  std::vector<double> dual;
  double objective = 0.0;
  Residuals residuals;
  long iterations = 0;
  double rho_final = 0.0;
  std::string diagnostic;
  /// Fixed-point residual per iteration, recorded only on request.
  std::vector<double> merit_history;
};

/// Reads SDPA sparse (.dat-s) text as primal data: min <C,X>. Comment lines
/// (* or ") precede the counts; negative block sizes denote diagonal blocks
/// and are modeled as that many 1x1 PSD blocks. Throws ParseError with the
/// offending line number.
ConicProgram parse_sdpa(const std::string& text);

/// Inverse of parse_sdpa on the data model. Programs with a free segment
/// have no SDPA form; that is an error.
std::string emit_sdpa(const ConicProgram& prog);

/// Replaces the single PSD block (dimension N = alpha.dimension()) with the
/// p(p-1)/2 pairwise blocks of the partition; objective and constraints are
/// extracted per pair, b unchanged. A free segment passes through. With
/// p <= 2 the pairwise cone is the full PSD cone and the program is
/// returned unchanged apart from provenance.
ConicProgram restrict_fw(const ConicProgram& prog, const Partition& alpha);

/// Outer counterpart: the matrix variable becomes free and one auxiliary
/// PSD block Y_ij = E_ij X E_ij^T is linked in per pair, appending the
/// linking equalities after the original ones.
ConicProgram relax_dual_fw(const ConicProgram& prog, const Partition& alpha);

/// Margin form of the restriction: minimize t over pairwise blocks plus a
/// 1x1 block t >= 0 such that the assembled matrix minus t*I satisfies the
/// original equalities. Feasible for every input; t* = 0 exactly when the
/// restriction itself is feasible. The original objective is discarded.
ConicProgram margin_program(const ConicProgram& prog, const Partition& alpha);

/// Margin value of a margin_program solution.
double margin_value(const ConicProgram& prog, const Solution& sol);

/// Assembles the pairwise solution blocks of a restricted program back into
/// the N x N matrix variable. Block layout must match pair_ranges(alpha).
SymmetricMatrix recover_X(const Solution& sol, const Partition& alpha);

}  // namespace fwsdp
