#include "fwsdp/conic_program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwsdp/errors.hpp"

namespace fwsdp {

BlockMatrix BlockMatrix::zero(const ConeLayout& cone) {
  BlockMatrix m;
  m.blocks.reserve(cone.psd_dims.size());
  for (int dim : cone.psd_dims) m.blocks.emplace_back(dim);
  m.free_coeffs.assign(static_cast<size_t>(cone.free_dim), 0.0);
  return m;
}

double Residuals::max() const { return std::max(primal, std::max(dual, gap)); }

namespace {

void check_conforms(const BlockMatrix& m, const ConeLayout& cone, const std::string& what) {
  if (m.blocks.size() != cone.psd_dims.size())
    throw Error(what + " has " + std::to_string(m.blocks.size()) +
                " blocks, cone has " + std::to_string(cone.psd_dims.size()));
  for (size_t k = 0; k < m.blocks.size(); ++k)
    if (m.blocks[k].dim() != cone.psd_dims[k])
      throw Error(what + " block " + std::to_string(k + 1) + " has dimension " +
                  std::to_string(m.blocks[k].dim()) + ", cone expects " +
                  std::to_string(cone.psd_dims[k]));
  if (static_cast<int>(m.free_coeffs.size()) != cone.free_dim)
    throw Error(what + " free part has length " + std::to_string(m.free_coeffs.size()) +
                ", cone expects " + std::to_string(cone.free_dim));
}

}  // namespace

void ConicProgram::validate() const {
  if (cone.psd_dims.empty() && cone.free_dim == 0)
    throw Error("program has an empty cone");
  for (int dim : cone.psd_dims)
    if (dim < 1) throw Error("PSD block dimensions must be positive");
  if (cone.free_dim < 0) throw Error("free segment length must be nonnegative");
  check_conforms(objective, cone, "objective");
  if (constraints.size() != rhs.size())
    throw Error("constraint count " + std::to_string(constraints.size()) +
                " does not match rhs length " + std::to_string(rhs.size()));
  for (size_t i = 0; i < constraints.size(); ++i)
    check_conforms(constraints[i], cone, "constraint " + std::to_string(i + 1));
}

namespace {

// Splits the unique PSD block of `prog` into the pairwise blocks of alpha.
// With p == 1 the pairwise cone degenerates to the full PSD cone and the
// data passes through.
ConicProgram split_block(const ConicProgram& prog, const Partition& alpha,
                         Provenance provenance) {
  prog.validate();
  if (prog.cone.block_count() != 1)
    throw Error("the transformation applies to single-PSD-block programs; this "
                "one has " + std::to_string(prog.cone.block_count()) + " blocks");
  const int n = prog.cone.psd_dims[0];
  if (n != alpha.dimension())
    throw Error("partition dimension " + std::to_string(alpha.dimension()) +
                " does not match the PSD block dimension " + std::to_string(n));

  ConicProgram out;
  out.provenance = provenance;
  out.partition = alpha;
  out.cone.free_dim = prog.cone.free_dim;
  out.rhs = prog.rhs;

  if (alpha.block_count() == 1) {
    out.cone.psd_dims = prog.cone.psd_dims;
    out.objective = prog.objective;
    out.constraints = prog.constraints;
    return out;
  }

  const auto pairs = pair_ranges(alpha);
  for (const PairRange& r : pairs) {
    out.cone.psd_dims.push_back(r.pair_dim());
    out.pair_labels.emplace_back(r.i, r.j);
  }
  auto split = [&](const BlockMatrix& m) {
    BlockMatrix s;
    s.blocks.reserve(pairs.size());
    for (const PairRange& r : pairs)
      s.blocks.push_back(extract_pair(m.blocks[0], alpha, r.i, r.j));
    s.free_coeffs = m.free_coeffs;
    return s;
  };
  out.objective = split(prog.objective);
  out.constraints.reserve(prog.constraints.size());
  for (const BlockMatrix& a : prog.constraints) out.constraints.push_back(split(a));
  return out;
}

}  // namespace

ConicProgram restrict_fw(const ConicProgram& prog, const Partition& alpha) {
  return split_block(prog, alpha, Provenance::restricted);
}

ConicProgram margin_program(const ConicProgram& prog, const Partition& alpha) {
  ConicProgram out = split_block(prog, alpha, Provenance::restricted);
  out.cone.psd_dims.push_back(1);
  out.margin_block = out.cone.block_count() - 1;

  out.objective = BlockMatrix::zero(out.cone);
  out.objective.blocks.back().set(0, 0, 1.0);

  for (size_t i = 0; i < out.constraints.size(); ++i) {
    out.constraints[i].blocks.emplace_back(1);
    out.constraints[i].blocks.back().set(0, 0, -prog.constraints[i].blocks[0].trace());
  }
  return out;
}

double margin_value(const ConicProgram& prog, const Solution& sol) {
  if (prog.margin_block < 0) throw Error("program has no margin block");
  if (prog.margin_block >= static_cast<int>(sol.blocks.size()))
    throw Error("solution does not cover the margin block");
  return sol.blocks[static_cast<size_t>(prog.margin_block)](0, 0);
}

ConicProgram relax_dual_fw(const ConicProgram& prog, const Partition& alpha) {
  prog.validate();
  if (prog.cone.block_count() != 1)
    throw Error("the transformation applies to single-PSD-block programs; this "
                "one has " + std::to_string(prog.cone.block_count()) + " blocks");
  const int n = prog.cone.psd_dims[0];
  if (n != alpha.dimension())
    throw Error("partition dimension " + std::to_string(alpha.dimension()) +
                " does not match the PSD block dimension " + std::to_string(n));

  ConicProgram out;
  out.provenance = Provenance::relaxed;
  out.partition = alpha;

  if (alpha.block_count() == 1) {
    out.cone = prog.cone;
    out.objective = prog.objective;
    out.constraints = prog.constraints;
    out.rhs = prog.rhs;
    return out;
  }

  const int old_free = prog.cone.free_dim;
  const int tri = n * (n + 1) / 2;
  out.free_x_offset = old_free;
  const auto pairs = pair_ranges(alpha);
  for (const PairRange& r : pairs) {
    out.cone.psd_dims.push_back(r.pair_dim());
    out.pair_labels.emplace_back(r.i, r.j);
  }
  out.cone.free_dim = old_free + tri;

  // X becomes free: the functional <A,X> reads 2*A_ab off the diagonal.
  auto tri_index = [&](int a, int b) {
    // row-major upper triangle of an n x n matrix
    return old_free + a * n - a * (a - 1) / 2 + (b - a);
  };
  auto to_free = [&](const BlockMatrix& m) {
    BlockMatrix f = BlockMatrix::zero(out.cone);
    std::copy(m.free_coeffs.begin(), m.free_coeffs.end(), f.free_coeffs.begin());
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        f.free_coeffs[static_cast<size_t>(tri_index(a, b))] =
            (a == b ? 1.0 : 2.0) * m.blocks[0](a, b);
    return f;
  };

  out.objective = to_free(prog.objective);
  out.constraints.reserve(prog.constraints.size());
  for (const BlockMatrix& a : prog.constraints) out.constraints.push_back(to_free(a));
  out.rhs = prog.rhs;

  // Linking rows Y_ij = E_ij X E_ij^T, one per upper-triangle entry.
  for (size_t k = 0; k < pairs.size(); ++k) {
    const PairRange& r = pairs[k];
    auto row_of = [&](int local) {
      return local < r.len_i ? r.off_i + local : r.off_j + (local - r.len_i);
    };
    for (int a = 0; a < r.pair_dim(); ++a) {
      for (int b = a; b < r.pair_dim(); ++b) {
        BlockMatrix row = BlockMatrix::zero(out.cone);
        row.blocks[k].set(a, b, a == b ? 1.0 : 0.5);
        row.free_coeffs[static_cast<size_t>(tri_index(std::min(row_of(a), row_of(b)),
                                                      std::max(row_of(a), row_of(b))))] = -1.0;
        out.constraints.push_back(std::move(row));
        out.rhs.push_back(0.0);
      }
    }
  }
  return out;
}

SymmetricMatrix recover_X(const Solution& sol, const Partition& alpha) {
  if (alpha.block_count() == 1) {
    if (sol.blocks.size() != 1)
      throw Error("expected a single solution block for a one-block partition");
    return sol.blocks[0];
  }
  const auto pairs = pair_ranges(alpha);
  if (sol.blocks.size() != pairs.size())
    throw Error("solution has " + std::to_string(sol.blocks.size()) +
                " blocks, partition induces " + std::to_string(pairs.size()) + " pairs");
  SymmetricMatrix x(alpha.dimension());
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (sol.blocks[k].dim() != pairs[k].pair_dim())
      throw Error("solution block " + std::to_string(k + 1) + " has dimension " +
                  std::to_string(sol.blocks[k].dim()) + ", pair expects " +
                  std::to_string(pairs[k].pair_dim()));
    x += scatter_pair(sol.blocks[k], alpha, pairs[k].i, pairs[k].j);
  }
  return x;
}

}  // namespace fwsdp
