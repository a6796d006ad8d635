#include "fwsdp/sos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fwsdp/errors.hpp"

namespace fwsdp {

namespace {

Polynomial::Exponents add_exps(const Polynomial::Exponents& a,
                               const Polynomial::Exponents& b) {
  Polynomial::Exponents e(a);
  for (size_t v = 0; v < e.size(); ++v) e[v] += b[v];
  return e;
}

Partition gram_partition_for(const SosCone& mode, int gram_dim,
                             const std::optional<Partition>& natural) {
  switch (mode.kind) {
    case SosCone::Kind::full:
      return Partition({gram_dim});
    case SosCone::Kind::fw2:
      return Partition(std::vector<int>(static_cast<size_t>(gram_dim), 1));
    case SosCone::Kind::block:
      if (mode.block_partition) {
        if (mode.block_partition->dimension() != gram_dim)
          throw Error("block partition covers dimension " +
                      std::to_string(mode.block_partition->dimension()) +
                      ", Gram matrix has dimension " + std::to_string(gram_dim));
        return *mode.block_partition;
      }
      if (mode.uniform_blocks) return uniform_partition(gram_dim, *mode.uniform_blocks);
      if (natural) return *natural;
      throw Error("block mode needs a partition or a uniform block count");
  }
  throw Error("unknown cone mode");
}

}  // namespace

Polynomial gram_reconstruct(const SymmetricMatrix& q, const MonomialBasis& basis) {
  if (q.dim() != basis.size())
    throw Error("Gram dimension " + std::to_string(q.dim()) +
                " does not match basis size " + std::to_string(basis.size()));
  Polynomial out(basis.n_vars);
  for (int a = 0; a < q.dim(); ++a)
    for (int b = a; b < q.dim(); ++b)
      out.add_term(add_exps(basis.exponents[static_cast<size_t>(a)],
                            basis.exponents[static_cast<size_t>(b)]),
                   (a == b ? 1.0 : 2.0) * q(a, b));
  return out;
}

SosProgram sos_program(const Polynomial& f0, const std::vector<Polynomial>& fs,
                       const std::vector<double>& b, const SosCone& mode) {
  if (fs.size() != b.size())
    throw Error("objective vector length " + std::to_string(b.size()) +
                " does not match the multiplier count " + std::to_string(fs.size()));
  const int n = f0.n_vars();
  int max_deg = f0.degree();
  for (const Polynomial& f : fs) {
    if (f.n_vars() != n) throw Error("multiplier variable count mismatch");
    max_deg = std::max(max_deg, f.degree());
  }
  const int d = (max_deg + 1) / 2;

  SosProgram sp;
  sp.basis = monomial_basis(n, d);
  sp.gram_dim = sp.basis.size();
  sp.gram_partition = gram_partition_for(mode, sp.gram_dim, std::nullopt);

  ConicProgram full;
  full.cone.psd_dims = {sp.gram_dim};
  full.cone.free_dim = static_cast<int>(fs.size());
  full.objective = BlockMatrix::zero(full.cone);
  std::copy(b.begin(), b.end(), full.objective.free_coeffs.begin());

  // One equality per monomial of degree <= 2d, in graded-lex order.
  const MonomialBasis products = monomial_basis(n, 2 * d);
  std::map<Polynomial::Exponents, int> row_of;
  for (int r = 0; r < products.size(); ++r)
    row_of.emplace(products.exponents[static_cast<size_t>(r)], r);
  full.constraints.assign(static_cast<size_t>(products.size()),
                          BlockMatrix::zero(full.cone));
  full.rhs.assign(static_cast<size_t>(products.size()), 0.0);

  for (int a = 0; a < sp.gram_dim; ++a) {
    for (int bb = a; bb < sp.gram_dim; ++bb) {
      const auto key = add_exps(sp.basis.exponents[static_cast<size_t>(a)],
                                sp.basis.exponents[static_cast<size_t>(bb)]);
      full.constraints[static_cast<size_t>(row_of.at(key))].blocks[0].add(a, bb, 1.0);
    }
  }
  for (const auto& [exps, coeff] : f0.terms()) {
    auto it = row_of.find(exps);
    if (it == row_of.end())
      throw Error("degree overflow: f0 has a term beyond degree " + std::to_string(2 * d));
    full.rhs[static_cast<size_t>(it->second)] = coeff;
  }
  for (size_t i = 0; i < fs.size(); ++i) {
    for (const auto& [exps, coeff] : fs[i].terms()) {
      auto it = row_of.find(exps);
      if (it == row_of.end())
        throw Error("degree overflow in multiplier " + std::to_string(i + 1));
      full.constraints[static_cast<size_t>(it->second)].free_coeffs[i] = -coeff;
    }
  }

  sp.program = mode.kind == SosCone::Kind::full
                   ? std::move(full)
                   : restrict_fw(full, sp.gram_partition);
  return sp;
}

SosProgram matrix_sos_program(const PolynomialMatrix& p, bool gamma_objective,
                              const SosCone& mode) {
  const int n = p.size();
  const int vars = p.n_vars();
  const int d = (p.degree() + 1) / 2;

  SosProgram sp;
  sp.basis = monomial_basis(vars, d);
  const int s = sp.basis.size();
  sp.gram_dim = n * s;
  sp.gram_partition = gram_partition_for(
      mode, sp.gram_dim, Partition(std::vector<int>(static_cast<size_t>(n), s)));

  ConicProgram full;
  full.cone.psd_dims = {sp.gram_dim};
  full.cone.free_dim = gamma_objective ? 1 : 0;
  full.objective = BlockMatrix::zero(full.cone);
  if (gamma_objective) {
    full.objective.free_coeffs[0] = -1.0;  // min -gamma
    sp.gamma_index = 0;
  }

  const MonomialBasis products = monomial_basis(vars, 2 * d);
  std::map<Polynomial::Exponents, int> row_of;
  for (int r = 0; r < products.size(); ++r)
    row_of.emplace(products.exponents[static_cast<size_t>(r)], r);
  const int rows_per_entry = products.size();

  // Row layout: entries (r, s) of the upper triangle in row-major order,
  // each with one equality per monomial of degree <= 2d.
  int entry_index = 0;
  std::map<std::pair<int, int>, int> entry_base;
  for (int er = 0; er < n; ++er)
    for (int es = er; es < n; ++es) entry_base[{er, es}] = entry_index++ * rows_per_entry;
  full.constraints.assign(static_cast<size_t>(entry_index) * rows_per_entry,
                          BlockMatrix::zero(full.cone));
  full.rhs.assign(full.constraints.size(), 0.0);

  for (int er = 0; er < n; ++er) {
    for (int es = er; es < n; ++es) {
      const int base = entry_base.at({er, es});
      if (er == es) {
        for (int a = 0; a < s; ++a)
          for (int bb = a; bb < s; ++bb) {
            const auto key = add_exps(sp.basis.exponents[static_cast<size_t>(a)],
                                      sp.basis.exponents[static_cast<size_t>(bb)]);
            full.constraints[static_cast<size_t>(base + row_of.at(key))]
                .blocks[0]
                .add(er * s + a, er * s + bb, 1.0);
          }
      } else {
        for (int a = 0; a < s; ++a)
          for (int bb = 0; bb < s; ++bb) {
            const auto key = add_exps(sp.basis.exponents[static_cast<size_t>(a)],
                                      sp.basis.exponents[static_cast<size_t>(bb)]);
            full.constraints[static_cast<size_t>(base + row_of.at(key))]
                .blocks[0]
                .add(er * s + a, es * s + bb, 0.5);
          }
      }
      const Polynomial& entry = p.at(er, es);
      for (const auto& [exps, coeff] : entry.terms()) {
        auto it = row_of.find(exps);
        if (it == row_of.end())
          throw Error("degree overflow in matrix entry (" + std::to_string(er + 1) +
                      "," + std::to_string(es + 1) + ")");
        full.rhs[static_cast<size_t>(base + it->second)] = coeff;
      }
      if (gamma_objective && er == es) {
        // (P - gamma I)_rr shifts the constant coefficient only.
        const Polynomial::Exponents zero(static_cast<size_t>(vars), 0);
        full.constraints[static_cast<size_t>(base + row_of.at(zero))].free_coeffs[0] = 1.0;
      }
    }
  }

  sp.program = mode.kind == SosCone::Kind::full
                   ? std::move(full)
                   : restrict_fw(full, sp.gram_partition);
  return sp;
}

SosBound sos_bound(const Polynomial& f0, const SosCone& mode, const SolverOptions& opts) {
  // max gamma with f0 - gamma SOS, via min y s.t. v^T Q v = f0 + y.
  SosBound out;
  out.prog = sos_program(f0, {Polynomial::constant(f0.n_vars(), 1.0)}, {1.0}, mode);
  out.solution = solve(out.prog.program, opts);
  out.gamma = -out.solution.objective;
  return out;
}

SosFeasibility matrix_sos_feasible(const PolynomialMatrix& p, const SosCone& mode,
                                   const SolverOptions& opts, double tol_margin) {
  SosProgram full = matrix_sos_program(p, false, SosCone::full());
  const Partition alpha = gram_partition_for(
      mode, full.gram_dim,
      Partition(std::vector<int>(static_cast<size_t>(p.size()), full.basis.size())));

  SosFeasibility out;
  if (tol_margin < 0.0) {
    double scale = 0.0;
    for (double v : full.program.rhs) scale = std::max(scale, std::abs(v));
    tol_margin = 1e-6 * (1.0 + scale);
  }
  out.tol_margin = tol_margin;
  const ConicProgram margin = margin_program(full.program, alpha);
  out.solution = solve(margin, opts);
  if (out.solution.status != SolveStatus::optimal)
    throw NumericalError("margin program did not converge: " + out.solution.diagnostic);
  out.margin = margin_value(margin, out.solution);
  out.feasible = out.margin <= tol_margin;
  return out;
}

PolynomialMatrix matrix_gram_reconstruct(const SymmetricMatrix& q, int size,
                                         const MonomialBasis& basis) {
  const int s = basis.size();
  if (q.dim() != size * s)
    throw Error("Gram dimension " + std::to_string(q.dim()) +
                " does not match size * basis = " + std::to_string(size * s));
  PolynomialMatrix out(size, basis.n_vars);
  for (int er = 0; er < size; ++er) {
    for (int es = er; es < size; ++es) {
      Polynomial entry(basis.n_vars);
      for (int a = 0; a < s; ++a)
        for (int bb = 0; bb < s; ++bb)
          entry.add_term(add_exps(basis.exponents[static_cast<size_t>(a)],
                                  basis.exponents[static_cast<size_t>(bb)]),
                         q(er * s + a, es * s + bb));
      out.set(er, es, std::move(entry));
    }
  }
  return out;
}

Polynomial benchmark_q(int n) {
  if (n < 3) throw Error("the benchmark polynomial needs n >= 3 variables");
  auto x = [&](int i) { return Polynomial::variable(n, i); };  // 0-based
  const Polynomial one = Polynomial::constant(n, 1.0);

  auto bracket = [&](int i) {
    // (3 - 2 x_i) x_i + 1 plus the neighbour couplings
    Polynomial h = 3.0 * x(i) - 2.0 * (x(i) * x(i)) + one;
    if (i > 0) h -= x(i - 1);
    if (i + 1 < n) h -= 2.0 * x(i + 1);
    return h;
  };

  Polynomial q(n);
  for (int i = 0; i < n; ++i) {
    const Polynomial h = bracket(i);
    q += h * h;
  }
  Polynomial sum(n);
  for (int i = 0; i < n; ++i) sum += x(i);
  q += sum * sum;
  return q;
}

}  // namespace fwsdp
