#include "fwsdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <random>

#include "fwsdp/dense.hpp"
#include "fwsdp/errors.hpp"

namespace fwsdp {

namespace {

using detail::Cholesky;
using detail::Mat;
using detail::Vec;

constexpr double kSqrt2 = 1.4142135623730951;

// Scaled vectorization: per PSD block the upper triangle with off-diagonal
// entries times sqrt(2), so plain dot products realize the trace inner
// product; the free segment is appended raw.
struct VecLayout {
  std::vector<int> dims;
  std::vector<int> offsets;
  int free_offset = 0;
  int free_dim = 0;
  int total = 0;

  static int tri(int n) { return n * (n + 1) / 2; }
};

VecLayout make_layout(const ConeLayout& cone) {
  VecLayout layout;
  layout.dims = cone.psd_dims;
  int offset = 0;
  for (int dim : cone.psd_dims) {
    layout.offsets.push_back(offset);
    offset += VecLayout::tri(dim);
  }
  layout.free_offset = offset;
  layout.free_dim = cone.free_dim;
  layout.total = offset + cone.free_dim;
  return layout;
}

Vec vectorize(const BlockMatrix& m, const VecLayout& layout) {
  Vec v(static_cast<size_t>(layout.total), 0.0);
  for (size_t k = 0; k < m.blocks.size(); ++k) {
    const SymmetricMatrix& blk = m.blocks[k];
    size_t pos = static_cast<size_t>(layout.offsets[k]);
    for (int a = 0; a < blk.dim(); ++a)
      for (int b = a; b < blk.dim(); ++b)
        v[pos++] = (a == b) ? blk(a, a) : kSqrt2 * blk(a, b);
  }
  std::copy(m.free_coeffs.begin(), m.free_coeffs.end(),
            v.begin() + layout.free_offset);
  return v;
}

SymmetricMatrix devectorize_block(const Vec& v, int offset, int dim) {
  SymmetricMatrix m(dim);
  size_t pos = static_cast<size_t>(offset);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b, ++pos)
      m.set(a, b, (a == b) ? v[pos] : v[pos] / kSqrt2);
  return m;
}

void project_onto_cone(Vec& v, const VecLayout& layout) {
  for (size_t k = 0; k < layout.dims.size(); ++k) {
    const int dim = layout.dims[k];
    const int offset = layout.offsets[k];
    if (dim == 1) {
      v[static_cast<size_t>(offset)] = std::max(v[static_cast<size_t>(offset)], 0.0);
      continue;
    }
    const SymmetricMatrix projected = psd_project(devectorize_block(v, offset, dim));
    size_t pos = static_cast<size_t>(offset);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b, ++pos)
        v[pos] = (a == b) ? projected(a, a) : kSqrt2 * projected(a, b);
  }
  // free segment: identity
}

// Distance of v to the dual cone (PSD on PSD blocks, {0} on the free
// segment), squared accumulation in the scaled coordinates.
double dual_cone_distance(const Vec& v, const VecLayout& layout) {
  double sq = 0.0;
  for (size_t k = 0; k < layout.dims.size(); ++k) {
    const int dim = layout.dims[k];
    const int offset = layout.offsets[k];
    if (dim == 1) {
      const double neg = std::min(v[static_cast<size_t>(offset)], 0.0);
      sq += neg * neg;
      continue;
    }
    const EigenDecomposition eig = sym_eigen(devectorize_block(v, offset, dim));
    for (double lam : eig.values) {
      if (lam < 0.0) sq += lam * lam;
    }
  }
  for (int f = 0; f < layout.free_dim; ++f) {
    const double c = v[static_cast<size_t>(layout.free_offset + f)];
    sq += c * c;
  }
  return std::sqrt(sq);
}

struct VecProblem {
  VecLayout layout;
  Mat a;  // m x total
  Vec b;
  Vec c;
  int m = 0;
};

VecProblem vectorize_program(const ConicProgram& prog) {
  VecProblem vp;
  vp.layout = make_layout(prog.cone);
  vp.m = prog.constraint_count();
  vp.c = vectorize(prog.objective, vp.layout);
  vp.b = prog.rhs;
  vp.a = Mat(vp.m, vp.layout.total);
  for (int i = 0; i < vp.m; ++i) {
    const Vec row = vectorize(prog.constraints[static_cast<size_t>(i)], vp.layout);
    std::copy(row.begin(), row.end(),
              vp.a.data.begin() + static_cast<size_t>(i) * vp.layout.total);
  }
  return vp;
}

Solution make_solution(const ConicProgram& prog, const VecProblem& vp, const Vec& z,
                       const Vec& nu) {
  Solution sol;
  for (size_t k = 0; k < vp.layout.dims.size(); ++k)
    sol.blocks.push_back(
        devectorize_block(z, vp.layout.offsets[k], vp.layout.dims[k]));
  sol.free_values.assign(z.begin() + vp.layout.free_offset, z.end());
  sol.dual = nu;
  sol.objective = detail::dot(vp.c, z);
  sol.residuals = kkt_residuals(prog, sol);
  return sol;
}

}  // namespace

namespace detail {

std::vector<double> svec_point(const ConeLayout& cone,
                               const std::vector<SymmetricMatrix>& blocks,
                               const std::vector<double>& free_values) {
  BlockMatrix bm;
  bm.blocks = blocks;
  bm.free_coeffs = free_values;
  return vectorize(bm, make_layout(cone));
}

void unsvec_point(const ConeLayout& cone, const std::vector<double>& v,
                  std::vector<SymmetricMatrix>& blocks,
                  std::vector<double>& free_values) {
  const VecLayout layout = make_layout(cone);
  if (static_cast<int>(v.size()) != layout.total)
    throw Error("vectorized point has the wrong length");
  blocks.clear();
  for (size_t k = 0; k < layout.dims.size(); ++k)
    blocks.push_back(devectorize_block(v, layout.offsets[k], layout.dims[k]));
  free_values.assign(v.begin() + layout.free_offset, v.end());
}

void project_svec_point(const ConeLayout& cone, std::vector<double>& v) {
  const VecLayout layout = make_layout(cone);
  if (static_cast<int>(v.size()) != layout.total)
    throw Error("vectorized point has the wrong length");
  project_onto_cone(v, layout);
}

}  // namespace detail

void SolverOptions::validate() const {
  if (max_iterations < 1) throw Error("max_iterations must be at least 1");
  if (eps_primal <= 0.0 || eps_dual <= 0.0 || eps_gap <= 0.0)
    throw Error("solver tolerances must be positive");
  if (rho <= 0.0) throw Error("penalty parameter must be positive");
}

Residuals kkt_residuals(const ConicProgram& prog, const Solution& point) {
  prog.validate();
  const VecProblem vp = vectorize_program(prog);
  BlockMatrix bm;
  bm.blocks = point.blocks;
  bm.free_coeffs = point.free_values;
  if (bm.blocks.size() != prog.cone.psd_dims.size() ||
      static_cast<int>(bm.free_coeffs.size()) != prog.cone.free_dim)
    throw Error("candidate point does not match the cone layout");
  if (static_cast<int>(point.dual.size()) != vp.m)
    throw Error("candidate dual has length " + std::to_string(point.dual.size()) +
                ", expected " + std::to_string(vp.m));
  const Vec x = vectorize(bm, vp.layout);

  Residuals res;
  Vec ax = detail::matvec(vp.a, x);
  detail::axpy(-1.0, vp.b, ax);
  res.primal = detail::norm2(ax) / (1.0 + detail::norm2(vp.b));

  Vec d = vp.c;
  const Vec aty = detail::matvec_transpose(vp.a, point.dual);
  detail::axpy(-1.0, aty, d);
  res.dual = dual_cone_distance(d, vp.layout) / (1.0 + detail::norm2(vp.c));

  const double pobj = detail::dot(vp.c, x);
  const double dobj = detail::dot(vp.b, point.dual);
  res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  return res;
}

Solution solve(const ConicProgram& prog, const SolverOptions& opts) {
  prog.validate();
  opts.validate();
  const VecProblem vp = vectorize_program(prog);
  const int n = vp.layout.total;
  const int m = vp.m;

  // Normal equations A A^T, factorized once; rho only enters right-hand
  // sides, so adaptive rescaling needs no refactorization.
  std::unique_ptr<Cholesky> chol;
  if (m > 0) {
    Mat gram(m, m);
    for (int r = 0; r < m; ++r) {
      const double* row_r = vp.a.data.data() + static_cast<size_t>(r) * n;
      for (int c = 0; c <= r; ++c) {
        const double* row_c = vp.a.data.data() + static_cast<size_t>(c) * n;
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += row_r[k] * row_c[k];
        gram.at(r, c) = s;
        gram.at(c, r) = s;
      }
    }
    chol = std::make_unique<Cholesky>(gram);

    // Consistency pre-check of the equality system: an inconsistent system
    // can never be feasible, conically or otherwise.
    Vec nu_ls = chol->solve(vp.b);
    const Vec x_ls = detail::matvec_transpose(vp.a, nu_ls);
    Vec gap = detail::matvec(vp.a, x_ls);
    detail::axpy(-1.0, vp.b, gap);
    const double inconsistency = detail::norm2(gap) / (1.0 + detail::norm2(vp.b));
    if (inconsistency > 1e-8) {
      Solution sol = make_solution(prog, vp, Vec(static_cast<size_t>(n), 0.0),
                                   Vec(static_cast<size_t>(m), 0.0));
      sol.status = SolveStatus::infeasible_suspected;
      sol.diagnostic = "equality system is inconsistent: least-squares residual " +
                       std::to_string(inconsistency);
      return sol;
    }
  }

  auto solve_normal = [&](Vec rhs) {
    Vec nu = chol->solve(rhs);
    // one refinement pass against A A^T
    Vec r = detail::matvec(vp.a, detail::matvec_transpose(vp.a, nu));
    for (int i = 0; i < m; ++i) r[static_cast<size_t>(i)] = rhs[static_cast<size_t>(i)] - r[static_cast<size_t>(i)];
    detail::axpy(1.0, chol->solve(r), nu);
    return nu;
  };

  const double bnorm = detail::norm2(vp.b);
  const double cnorm = detail::norm2(vp.c);
  const Vec ac = m > 0 ? detail::matvec(vp.a, vp.c) : Vec{};

  const int max_attempts = opts.randomized_restart ? 2 : 1;
  Solution best_solution;
  double best_score = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec z(static_cast<size_t>(n), 0.0);
    Vec u(static_cast<size_t>(n), 0.0);
    Vec nu(static_cast<size_t>(m), 0.0);
    if (attempt > 0) {
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (double& v : z) v = dist(rng);
      project_onto_cone(z, vp.layout);
    }

    double rho = opts.rho;
    Vec x(static_cast<size_t>(n), 0.0);
    std::vector<double> merit;
    if (opts.record_merit) merit.reserve(static_cast<size_t>(opts.max_iterations));

    long iter = 0;
    bool converged = false;
    Vec best_z = z, best_nu = nu;
    double best_local = std::numeric_limits<double>::infinity();

    if (opts.verbosity > 0 && opts.log)
      *opts.log << "iteration,rho,primal,dual,gap,objective\n";

    const long check_every = 10;
    for (iter = 1; iter <= opts.max_iterations; ++iter) {
      // x-step: argmin <c,x> + rho/2 |x - (z - u)|^2  s.t. Ax = b
      Vec w = z;
      detail::axpy(-1.0, u, w);
      if (m > 0) {
        Vec rhs = detail::matvec(vp.a, w);
        for (int i = 0; i < m; ++i)
          rhs[static_cast<size_t>(i)] =
              rho * (vp.b[static_cast<size_t>(i)] - rhs[static_cast<size_t>(i)]) +
              ac[static_cast<size_t>(i)];
        nu = solve_normal(rhs);
        x = w;
        detail::axpy(-1.0 / rho, vp.c, x);
        detail::axpy(1.0 / rho, detail::matvec_transpose(vp.a, nu), x);
      } else {
        x = w;
        detail::axpy(-1.0 / rho, vp.c, x);
      }

      if (opts.record_merit) {
        // fixed-point residual |x^{k+1} - z^k|
        double sq = 0.0;
        for (int k = 0; k < n; ++k) {
          const double d = x[static_cast<size_t>(k)] - z[static_cast<size_t>(k)];
          sq += d * d;
        }
        merit.push_back(std::sqrt(sq));
      }

      // z-step: cone projection of x + u
      Vec v = x;
      detail::axpy(1.0, u, v);
      Vec z_prev = z;
      z = v;
      project_onto_cone(z, vp.layout);

      // scaled dual update
      u = v;
      detail::axpy(-1.0, z, u);

      const bool last = iter == opts.max_iterations;
      if (iter % check_every != 0 && !last) continue;

      // Termination on the cone-feasible point (z, nu, s = -rho u).
      Vec az_b = detail::matvec(vp.a, z);
      detail::axpy(-1.0, vp.b, az_b);
      const double primal = detail::norm2(az_b) / (1.0 + bnorm);
      double dual_sq = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = rho * (z_prev[static_cast<size_t>(k)] - z[static_cast<size_t>(k)]);
        dual_sq += d * d;
      }
      const double dual = std::sqrt(dual_sq) / (1.0 + cnorm);
      const double pobj = detail::dot(vp.c, z);
      const double dobj = detail::dot(vp.b, nu);
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      if (opts.verbosity > 0 && opts.log)
        *opts.log << iter << ',' << rho << ',' << primal << ',' << dual << ','
                  << gap << ',' << pobj << "\n";

      const double score = std::max({primal, dual, gap});
      if (score < best_local) {
        best_local = score;
        best_z = z;
        best_nu = nu;
      }

      if (primal <= opts.eps_primal && dual <= opts.eps_dual && gap <= opts.eps_gap) {
        converged = true;
        break;
      }

      if (opts.adaptive_rho && !last) {
        // classic splitting residual balance; y = rho * u is kept fixed
        Vec xz = x;
        detail::axpy(-1.0, z, xz);
        const double r_norm = detail::norm2(xz);
        const double s_norm = std::sqrt(dual_sq);
        double new_rho = rho;
        if (r_norm > 10.0 * s_norm)
          new_rho = std::min(rho * 2.0, 1e4);
        else if (s_norm > 10.0 * r_norm)
          new_rho = std::max(rho / 2.0, 1e-4);
        if (new_rho != rho) {
          const double scale = rho / new_rho;
          for (double& uv : u) uv *= scale;
          rho = new_rho;
        }
      }
    }

    Solution sol = make_solution(prog, vp, converged ? z : best_z,
                                 converged ? nu : best_nu);
    sol.status = converged ? SolveStatus::optimal : SolveStatus::max_iterations;
    sol.iterations = std::min(iter, opts.max_iterations);
    sol.rho_final = rho;
    sol.merit_history = std::move(merit);
    if (chol && chol->regularized())
      sol.diagnostic = "normal equations regularized (rank-deficient rows)";
    if (!converged && sol.diagnostic.empty())
      sol.diagnostic = "iteration limit reached at combined residual " +
                       std::to_string(sol.residuals.max());

    if (converged) return sol;
    if (sol.residuals.max() < best_score) {
      best_score = sol.residuals.max();
      best_solution = std::move(sol);
    }
  }
  return best_solution;
}

}  // namespace fwsdp
