#pragma once

#include <iosfwd>

#include "fwsdp/conic_program.hpp"

namespace fwsdp {

/// Options for the operator-splitting solver. Tolerances are relative.
struct SolverOptions {
  long max_iterations = 20000;
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  double eps_gap = 1e-6;
  double rho = 1.0;
  bool adaptive_rho = true;
  /// Seed for the optional randomized restart; has no effect while
  /// randomized_restart is off (the default), iterates start at zero.
  unsigned long seed = 0;
  bool randomized_restart = false;
  int verbosity = 0;
  /// CSV iteration log (iteration, rho, residuals, objective) when set and
  /// verbosity > 0.
  std::ostream* log = nullptr;
  /// Record the per-iteration fixed-point residual into the solution.
  bool record_merit = false;

  void validate() const;
};

/// Two-block splitting: an equality-constrained least-squares step (normal
/// equations factorized once), a cone projection, and a dual update.
/// Deterministic given identical options.
Solution solve(const ConicProgram& prog, const SolverOptions& opts = {});

/// Residuals of an arbitrary candidate point, recomputed from the program
/// data: primal |Ax-b|/(1+|b|), dual distance of C - A^T y to the dual
/// cone (relative), and the normalized objective gap.
Residuals kkt_residuals(const ConicProgram& prog, const Solution& point);

namespace detail {

// Solver internals exposed for white-box tests: the scaled vectorization
// (trace inner products become dot products) and the cone-projection step.

std::vector<double> svec_point(const ConeLayout& cone,
                               const std::vector<SymmetricMatrix>& blocks,
                               const std::vector<double>& free_values);

void unsvec_point(const ConeLayout& cone, const std::vector<double>& v,
                  std::vector<SymmetricMatrix>& blocks,
                  std::vector<double>& free_values);

/// z-step of the solver: per-block PSD projection, identity on the free
/// segment.
void project_svec_point(const ConeLayout& cone, std::vector<double>& v);

}  // namespace detail

}  // namespace fwsdp
