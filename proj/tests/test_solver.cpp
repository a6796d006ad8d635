#include <doctest.h>

#include <cmath>

#include "fwsdp/errors.hpp"
#include "fwsdp/io.hpp"
#include "fwsdp/solver.hpp"
#include "support/fixtures.hpp"
#include "support/random_inputs.hpp"

using namespace fwsdp;

namespace {

// min c*x s.t. a*x = b over the 1x1 PSD cone
ConicProgram scalar_program(double c, double a, double b) {
  ConicProgram prog;
  prog.cone.psd_dims = {1};
  prog.objective = BlockMatrix::zero(prog.cone);
  prog.objective.blocks[0].set(0, 0, c);
  prog.constraints.push_back(BlockMatrix::zero(prog.cone));
  prog.constraints[0].blocks[0].set(0, 0, a);
  prog.rhs = {b};
  return prog;
}

ConicProgram load_sdpa(const std::string& name) {
  return parse_sdpa(read_text_file(testing::data_path(name)));
}

SolverOptions tight_options() {
  SolverOptions opts;
  opts.eps_primal = opts.eps_dual = opts.eps_gap = 1e-8;
  opts.max_iterations = 100000;
  return opts;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("scalar cone program has the closed-form solution") {
  const Solution sol = solve(scalar_program(3.0, 2.0, 4.0), tight_options());
  CHECK(sol.status == SolveStatus::optimal);
  CHECK(sol.blocks[0](0, 0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.objective == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("trace minimization reaches the rank-one optimum") {
  const Solution sol = solve(load_sdpa("trace_min_2x2.dat-s"), tight_options());
  CHECK(sol.status == SolveStatus::optimal);
  // 2x2 PSD with unit off-diagonal: x11 + x22 >= 2 sqrt(x11 x22) >= 2
  CHECK(std::abs(sol.objective - 2.0) <= 1e-4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(sol.blocks[0](a, b) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("restricted all-pairs program attains the blockwise optimum") {
  // every pair block is [[a,1],[1,c]] with a*c >= 1, so each trace is >= 2
  // and the three blocks give 6; attained by ones(3) + I.
  const ConicProgram restricted =
      restrict_fw(load_sdpa("all_pairs_3.dat-s"), Partition({1, 1, 1}));
  const Solution sol = solve(restricted, tight_options());
  CHECK(sol.status == SolveStatus::optimal);
  CHECK(std::abs(sol.objective - 6.0) <= 1e-3);

  const SymmetricMatrix x = recover_X(sol, Partition({1, 1, 1}));
  CHECK(min_eigenvalue(x) >= -1e-6);
  // the assembled objective matches the restricted objective (adjoint identity)
  const ConicProgram original = load_sdpa("all_pairs_3.dat-s");
  CHECK(std::abs(inner(original.objective.blocks[0], x) - sol.objective) <= 1e-8);
}

TEST_CASE("full all-pairs program attains trace 3 at the all-ones matrix") {
  const Solution sol = solve(load_sdpa("all_pairs_3.dat-s"), tight_options());
  CHECK(sol.status == SolveStatus::optimal);
  // pairwise: x_aa x_bb >= 1 so x_aa + x_bb >= 2; summing gives trace >= 3
  CHECK(std::abs(sol.objective - 3.0) <= 1e-3);
}

TEST_CASE("relaxed all-pairs program is a lower bound") {
  const ConicProgram relaxed =
      relax_dual_fw(load_sdpa("all_pairs_3.dat-s"), Partition({1, 1, 1}));
  const Solution sol = solve(relaxed, tight_options());
  CHECK(sol.status == SolveStatus::optimal);
  CHECK(sol.objective <= 3.0 + 1e-5);
  // with unit off-diagonals the pairwise PSD constraints force
  // x_aa x_bb >= 1, so min x11+x22+x33 = 3: the relaxation is tight here
  CHECK(std::abs(sol.objective - 3.0) <= 1e-3);
}

TEST_CASE("kkt_residuals audits candidate points") {
  const ConicProgram prog = scalar_program(3.0, 2.0, 4.0);
  Solution exact;
  exact.blocks = {SymmetricMatrix::diagonal({2.0})};
  exact.dual = {1.5};  // c - a*y = 0
  exact.objective = 6.0;
  const Residuals at_exact = kkt_residuals(prog, exact);
  CHECK(at_exact.primal <= 1e-12);
  CHECK(at_exact.dual <= 1e-12);
  CHECK(at_exact.gap <= 1e-12);

  Solution zero;
  zero.blocks = {SymmetricMatrix(1)};
  zero.dual = {0.0};
  const Residuals at_zero = kkt_residuals(prog, zero);
  CHECK(at_zero.primal == doctest::Approx(4.0 / 5.0));  // |b| / (1 + |b|)

  const Solution sol = solve(prog, tight_options());
  const Residuals audited = kkt_residuals(prog, sol);
  CHECK(audited.primal <= 1e-8);
  CHECK(audited.dual <= 1e-8);
  CHECK(audited.gap <= 1e-8);
}

TEST_CASE("solver outputs satisfy their own tolerances on random programs") {
  testing::Rng rng(1234);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 3 + rep;
    ConicProgram prog;
    prog.cone.psd_dims = {n};
    prog.objective = BlockMatrix::zero(prog.cone);
    prog.objective.blocks[0] = testing::random_psd(n, rng, 0.5);
    const SymmetricMatrix interior = testing::random_psd(n, rng, 1.0);
    const int m = 1 + rep % 4;
    for (int i = 0; i < m; ++i) {
      prog.constraints.push_back(BlockMatrix::zero(prog.cone));
      prog.constraints.back().blocks[0] = testing::random_symmetric(n, rng);
      prog.rhs.push_back(inner(prog.constraints.back().blocks[0], interior));
    }
    const SolverOptions opts = tight_options();
    const Solution sol = solve(prog, opts);
    REQUIRE(sol.status == SolveStatus::optimal);
    const Residuals res = kkt_residuals(prog, sol);
    CHECK(res.primal <= opts.eps_primal);
    CHECK(res.dual <= opts.eps_dual);
    CHECK(res.gap <= opts.eps_gap);
  }
}

TEST_CASE("inconsistent equality systems are flagged") {
  ConicProgram prog = scalar_program(1.0, 1.0, 1.0);
  prog.constraints.push_back(prog.constraints[0]);
  prog.rhs.push_back(2.0);  // x = 1 and x = 2
  const Solution sol = solve(prog);
  CHECK(sol.status == SolveStatus::infeasible_suspected);
  CHECK(!sol.diagnostic.empty());
}

TEST_CASE("determinism: identical options give identical iterates") {
  SolverOptions opts = tight_options();
  opts.record_merit = true;
  const ConicProgram prog = load_sdpa("all_pairs_3.dat-s");
  const Solution a = solve(prog, opts);
  const Solution b = solve(prog, opts);
  REQUIRE(a.merit_history.size() == b.merit_history.size());
  for (size_t k = 0; k < a.merit_history.size(); ++k)
    CHECK(a.merit_history[k] == b.merit_history[k]);
  CHECK(a.objective == b.objective);
  CHECK(max_abs_diff(a.blocks[0], b.blocks[0]) == 0.0);
}

TEST_CASE("fixed-point residual is non-increasing with fixed penalty") {
  SolverOptions opts;
  opts.adaptive_rho = false;
  opts.record_merit = true;
  opts.eps_primal = opts.eps_dual = opts.eps_gap = 1e-10;
  opts.max_iterations = 3000;
  for (const char* name : {"trace_min_2x2.dat-s", "all_pairs_3.dat-s"}) {
    const Solution sol = solve(load_sdpa(name), opts);
    const auto& merit = sol.merit_history;
    for (size_t k = 101; k < merit.size(); ++k)
      CHECK(merit[k] <= merit[k - 1] + 1e-12 * (1.0 + merit[k - 1]));
  }
}

TEST_CASE("scaling the data scales the objective") {
  SolverOptions opts = tight_options();
  const ConicProgram prog = load_sdpa("trace_min_2x2.dat-s");
  ConicProgram scaled = prog;
  scaled.objective.blocks[0] *= 10.0;
  for (double& b : scaled.rhs) b *= 10.0;
  const Solution base = solve(prog, opts);
  const Solution big = solve(scaled, opts);
  CHECK(big.objective == doctest::Approx(100.0 * base.objective).epsilon(1e-4));
  // optimizer scales linearly with b
  CHECK(max_abs_diff(big.blocks[0], 10.0 * base.blocks[0]) <= 1e-3 * big.blocks[0].max_abs());
}

TEST_CASE("cone projection step matches the matrix kernel") {
  testing::Rng rng(77);
  ConeLayout cone;
  cone.psd_dims = {3, 1, 5};
  cone.free_dim = 4;
  std::vector<SymmetricMatrix> blocks = {testing::random_symmetric(3, rng),
                                         testing::random_symmetric(1, rng),
                                         testing::random_symmetric(5, rng)};
  std::vector<double> free_values = {1.0, -2.0, 0.5, 3.25};

  std::vector<double> v = detail::svec_point(cone, blocks, free_values);
  // the vectorization preserves trace inner products
  const std::vector<double> w = detail::svec_point(cone, blocks, free_values);
  double dot = 0.0;
  for (size_t k = 0; k < v.size(); ++k) dot += v[k] * w[k];
  double expected = 0.0;
  for (const SymmetricMatrix& blk : blocks) expected += inner(blk, blk);
  for (double f : free_values) expected += f * f;
  CHECK(dot == doctest::Approx(expected).epsilon(1e-12));

  detail::project_svec_point(cone, v);
  std::vector<SymmetricMatrix> projected;
  std::vector<double> free_out;
  detail::unsvec_point(cone, v, projected, free_out);
  for (size_t k = 0; k < blocks.size(); ++k)
    CHECK(max_abs_diff(projected[k], psd_project(blocks[k])) <= 1e-12);
  CHECK(free_out == free_values);
}

TEST_CASE("options are validated") {
  SolverOptions opts;
  opts.max_iterations = 0;
  CHECK_THROWS_AS(opts.validate(), Error);
  opts = SolverOptions{};
  opts.eps_primal = 0.0;
  CHECK_THROWS_AS(opts.validate(), Error);
  opts = SolverOptions{};
  opts.rho = -1.0;
  CHECK_THROWS_AS(opts.validate(), Error);
}

TEST_SUITE_END();
