#include "fwsdp/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwsdp/errors.hpp"

namespace fwsdp {

void FW2Certificate::set_block(int i, int j, SymmetricMatrix value) {
  const PairRange r = pair_range(alpha, i, j);
  if (value.dim() != r.pair_dim())
    throw Error("certificate block (" + std::to_string(i) + "," + std::to_string(j) +
                ") has dimension " + std::to_string(value.dim()) + ", expected " +
                std::to_string(r.pair_dim()));
  if (value.max_abs() == 0.0) {
    blocks.erase({i, j});
    return;
  }
  blocks.insert_or_assign({i, j}, std::move(value));
}

SymmetricMatrix FW2Certificate::block(int i, int j) const {
  const PairRange r = pair_range(alpha, i, j);
  auto it = blocks.find({i, j});
  if (it == blocks.end()) return SymmetricMatrix(r.pair_dim());
  return it->second;
}

bool FW2Certificate::has_block(int i, int j) const {
  return blocks.find({i, j}) != blocks.end();
}

SymmetricMatrix assemble(const FW2Certificate& cert) {
  SymmetricMatrix sum(cert.alpha.dimension());
  for (const auto& [key, value] : cert.blocks)
    sum += scatter_pair(value, cert.alpha, key.first, key.second);
  return sum;
}

VerifyReport verify_certificate(const FW2Certificate& cert, const SymmetricMatrix& x,
                                double tol_sum, double tol_psd) {
  if (x.dim() != cert.alpha.dimension())
    throw Error("matrix dimension " + std::to_string(x.dim()) +
                " does not match certificate partition dimension " +
                std::to_string(cert.alpha.dimension()));
  VerifyReport report;
  report.tol_sum = tol_sum;
  report.tol_psd = tol_psd;
  report.sum_error = max_abs_diff(assemble(cert), x);
  report.min_block_eig = 0.0;
  bool first = true;
  for (const auto& [key, value] : cert.blocks) {
    const double eig = min_eigenvalue(value);
    report.min_block_eig = first ? eig : std::min(report.min_block_eig, eig);
    first = false;
  }
  report.valid = report.sum_error <= tol_sum && report.min_block_eig >= -tol_psd;
  return report;
}

DualWitness dual_membership(const SymmetricMatrix& z, const Partition& alpha,
                            double tol_psd) {
  if (z.dim() != alpha.dimension())
    throw Error("matrix dimension " + std::to_string(z.dim()) +
                " does not match partition dimension " +
                std::to_string(alpha.dimension()));
  DualWitness w;
  w.z = z;
  w.tol_psd = tol_psd;
  const int p = alpha.block_count();
  if (p <= 1) {
    // No pairs: the single-block dual test is the PSD test on Z itself.
    const double eig = min_eigenvalue(z);
    w.pair_eigs.emplace_back(1, 1, eig);
    w.min_pair_eig = eig;
  } else {
    bool first = true;
    for (const PairRange& r : pair_ranges(alpha)) {
      const double eig = min_eigenvalue(extract_pair(z, alpha, r.i, r.j));
      w.pair_eigs.emplace_back(r.i, r.j, eig);
      w.min_pair_eig = first ? eig : std::min(w.min_pair_eig, eig);
      first = false;
    }
  }
  w.member = w.min_pair_eig >= -tol_psd;
  return w;
}

namespace {

// Rows [0, len_b) of the swapped block come after rows [0, len_a) of the
// original; used when a permutation flips a stored pair's order.
SymmetricMatrix swap_pair_groups(const SymmetricMatrix& b, int len_a, int len_b) {
  SymmetricMatrix out(b.dim());
  auto map_row = [&](int r) { return r < len_b ? r + len_a : r - len_b; };
  for (int x = 0; x < b.dim(); ++x)
    for (int y = x; y < b.dim(); ++y) out.set(x, y, b(map_row(x), map_row(y)));
  return out;
}

// Reorders blocks so that new position k holds old block perm[k] (1-indexed).
FW2Certificate permute_certificate(const FW2Certificate& cert,
                                   const std::vector<int>& perm) {
  const int p = cert.alpha.block_count();
  std::vector<int> new_sizes(static_cast<size_t>(p));
  std::vector<int> position(static_cast<size_t>(p) + 1, 0);
  for (int k = 1; k <= p; ++k) {
    new_sizes[static_cast<size_t>(k) - 1] = cert.alpha.block_size(perm[static_cast<size_t>(k) - 1]);
    position[static_cast<size_t>(perm[static_cast<size_t>(k) - 1])] = k;
  }
  FW2Certificate out{Partition(new_sizes)};
  for (const auto& [key, value] : cert.blocks) {
    const int pi = position[static_cast<size_t>(key.first)];
    const int pj = position[static_cast<size_t>(key.second)];
    if (pi < pj) {
      out.set_block(pi, pj, value);
    } else {
      out.set_block(pj, pi,
                    swap_pair_groups(value, cert.alpha.block_size(key.first),
                                     cert.alpha.block_size(key.second)));
    }
  }
  return out;
}

// Merges the last two blocks of the partition. The mutual block of the
// merged pair is split equally (factor 1/(p-1)) across the new tail blocks;
// the old blocks touching the pair embed with zero padding.
FW2Certificate merge_tail(const FW2Certificate& cert) {
  const int q = cert.alpha.block_count();  // blocks q-1 and q merge
  if (q < 3)
    throw Error("cannot merge a certificate down to a single block; the "
                "single-block cone has no pairwise representation");
  const int p = q - 1;  // block count after the merge
  const int k_p = cert.alpha.block_size(p);
  const int k_q = cert.alpha.block_size(q);

  std::vector<int> sizes(cert.alpha.sizes().begin(), cert.alpha.sizes().end() - 2);
  sizes.push_back(k_p + k_q);
  FW2Certificate out{Partition(sizes)};

  for (int i = 1; i + 1 < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (cert.has_block(i, j)) out.set_block(i, j, cert.block(i, j));

  const SymmetricMatrix mutual = cert.block(p, q);
  const double split = 1.0 / (p - 1);
  for (int i = 1; i < p; ++i) {
    const int k_i = cert.alpha.block_size(i);
    SymmetricMatrix merged(k_i + k_p + k_q);
    const SymmetricMatrix left = cert.block(i, p);
    const SymmetricMatrix right = cert.block(i, q);
    // rows: [0,k_i) block i, [k_i,k_i+k_p) old block p, tail old block q
    for (int a = 0; a < k_i + k_p; ++a)
      for (int b = a; b < k_i + k_p; ++b) merged.add(a, b, left(a, b));
    auto tail_row = [&](int local) { return local < k_i ? local : local + k_p; };
    for (int a = 0; a < k_i + k_q; ++a)
      for (int b = a; b < k_i + k_q; ++b) merged.add(tail_row(a), tail_row(b), right(a, b));
    for (int a = 0; a < k_p + k_q; ++a)
      for (int b = a; b < k_p + k_q; ++b) merged.add(k_i + a, k_i + b, split * mutual(a, b));
    out.set_block(i, p, merged);
  }
  return out;
}

// Merges adjacent blocks (q, q+1); pairs not at the tail are rotated there
// and back, which leaves the assembled matrix untouched.
FW2Certificate merge_adjacent(const FW2Certificate& cert, int q) {
  const int p = cert.alpha.block_count();
  if (q + 1 == p) return merge_tail(cert);
  std::vector<int> to_tail;
  for (int k = 1; k <= p; ++k)
    if (k != q && k != q + 1) to_tail.push_back(k);
  to_tail.push_back(q);
  to_tail.push_back(q + 1);
  FW2Certificate merged = merge_tail(permute_certificate(cert, to_tail));
  std::vector<int> back;
  for (int k = 1; k < q; ++k) back.push_back(k);
  back.push_back(p - 1);  // merged block sits at the tail
  for (int k = q; k <= p - 2; ++k) back.push_back(k);
  return permute_certificate(merged, back);
}

}  // namespace

FW2Certificate coarsen_certificate(const FW2Certificate& cert, const Partition& alpha) {
  if (!is_subpartition(cert.alpha, alpha))
    throw Error("partition " + cert.alpha.to_text() + " does not refine " +
                alpha.to_text());
  if (cert.alpha == alpha) return cert;
  if (alpha.block_count() < 2)
    throw Error("cannot coarsen to a single-block partition; the single-block "
                "cone has no pairwise representation");

  // Merge left to right: alpha block i absorbs its beta blocks one at a time.
  FW2Certificate current = cert;
  size_t beta_pos = 0;
  for (int i = 1; i <= alpha.block_count(); ++i) {
    int absorbed = 0;
    int acc = 0;
    while (acc < alpha.block_size(i)) {
      acc += cert.alpha.sizes()[beta_pos++];
      ++absorbed;
    }
    for (int t = 1; t < absorbed; ++t) current = merge_adjacent(current, i);
  }
  return current;
}

SolverOptions membership_solver_options() {
  SolverOptions opts;
  opts.max_iterations = 200000;
  opts.eps_primal = 1e-9;
  opts.eps_dual = 1e-9;
  opts.eps_gap = 1e-9;
  opts.adaptive_rho = true;
  return opts;
}

namespace {

// Single-PSD-block program whose equalities pin every entry of X.
ConicProgram entry_match_program(const SymmetricMatrix& x) {
  const int n = x.dim();
  ConicProgram prog;
  prog.cone.psd_dims = {n};
  prog.objective = BlockMatrix::zero(prog.cone);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      BlockMatrix row = BlockMatrix::zero(prog.cone);
      row.blocks[0].set(a, b, a == b ? 1.0 : 0.5);
      prog.constraints.push_back(std::move(row));
      prog.rhs.push_back(x(a, b));
    }
  }
  return prog;
}

// Multipliers of the entry constraints, assembled as a symmetric matrix and
// negated: a candidate separating witness in the dual cone.
SymmetricMatrix witness_from_duals(const std::vector<double>& y, int n) {
  SymmetricMatrix z(n);
  size_t k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b, ++k) z.set(a, b, a == b ? -y[k] : -0.5 * y[k]);
  return z;
}

MembershipReport psd_membership(const SymmetricMatrix& x, const Partition& alpha,
                                double tol_margin) {
  MembershipReport report;
  report.tol_margin = tol_margin;
  const EigenDecomposition eig = sym_eigen(x);
  const double lam = eig.values.front();
  report.margin = std::max(0.0, -lam);
  report.iterations = 0;
  if (report.margin <= tol_margin) {
    report.status = MembershipStatus::member;
    if (alpha.block_count() == 2) {
      FW2Certificate cert{alpha};
      cert.set_block(1, 2, x);
      report.certificate = std::move(cert);
    }
  } else {
    report.status = MembershipStatus::non_member;
    // Rank-one separator from the most negative eigenvector.
    SymmetricMatrix z(x.dim());
    for (int a = 0; a < x.dim(); ++a)
      for (int b = a; b < x.dim(); ++b) z.set(a, b, eig.vector(a, 0) * eig.vector(b, 0));
    DualWitness w = dual_membership(z, alpha, 1e-9);
    if (w.member && inner(x, z) < 0.0) report.witness = std::move(w);
  }
  return report;
}

}  // namespace

MembershipReport membership(const SymmetricMatrix& x, const Partition& alpha,
                            const SolverOptions& opts, double tol_margin) {
  if (x.dim() != alpha.dimension())
    throw Error("matrix dimension " + std::to_string(x.dim()) +
                " does not match partition dimension " +
                std::to_string(alpha.dimension()));
  if (tol_margin < 0.0) tol_margin = 1e-6 * (1.0 + x.max_abs());
  if (alpha.block_count() <= 2) return psd_membership(x, alpha, tol_margin);

  const ConicProgram margin = margin_program(entry_match_program(x), alpha);
  Solution sol;
  try {
    sol = solve(margin, opts);
  } catch (const NumericalError& err) {
    MembershipReport report;
    report.status = MembershipStatus::numerical_failure;
    report.tol_margin = tol_margin;
    report.diagnostic = err.what();
    return report;
  }

  MembershipReport report;
  report.tol_margin = tol_margin;
  report.margin = margin_value(margin, sol);
  report.solver_residuals = sol.residuals;
  report.iterations = sol.iterations;
  if (sol.status != SolveStatus::optimal) {
    report.status = MembershipStatus::numerical_failure;
    report.diagnostic = sol.diagnostic.empty()
                            ? "margin program did not converge"
                            : sol.diagnostic;
    return report;
  }

  if (report.margin <= tol_margin) {
    report.status = MembershipStatus::member;
    FW2Certificate cert{alpha};
    const auto pairs = pair_ranges(alpha);
    const double drop = 1e-14 * (1.0 + x.max_abs());
    for (size_t k = 0; k < pairs.size(); ++k) {
      SymmetricMatrix block = psd_project(sol.blocks[k]);
      if (block.max_abs() > drop) cert.set_block(pairs[k].i, pairs[k].j, std::move(block));
    }
    report.certificate = std::move(cert);
  } else {
    report.status = MembershipStatus::non_member;
    const SymmetricMatrix z = witness_from_duals(sol.dual, x.dim());
    DualWitness w = dual_membership(z, alpha, 1e-8 * (1.0 + z.max_abs()));
    if (w.member && inner(x, z) < 0.0) report.witness = std::move(w);
  }
  return report;
}

}  // namespace fwsdp
