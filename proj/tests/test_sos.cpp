#include <doctest.h>

#include <cmath>

#include "fwsdp/errors.hpp"
#include "fwsdp/io.hpp"
#include "fwsdp/sos.hpp"
#include "support/fixtures.hpp"
#include "support/random_inputs.hpp"

using namespace fwsdp;

namespace {

SolverOptions quick_options() {
  SolverOptions opts;
  opts.eps_primal = opts.eps_dual = opts.eps_gap = 1e-8;
  opts.max_iterations = 200000;
  return opts;
}

Polynomial poly_from_terms(int n_vars,
                           std::initializer_list<std::pair<std::vector<int>, double>> terms) {
  Polynomial p(n_vars);
  for (const auto& [exps, coeff] : terms) p.add_term(exps, coeff);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("sos");

TEST_CASE("monomial basis ordering and counts") {
  const MonomialBasis b21 = monomial_basis(2, 1);
  REQUIRE(b21.size() == 3);
  CHECK(b21.exponents[0] == std::vector<int>{0, 0});
  CHECK(b21.exponents[1] == std::vector<int>{1, 0});
  CHECK(b21.exponents[2] == std::vector<int>{0, 1});

  CHECK(monomial_basis(3, 2).size() == 10);
  CHECK(monomial_basis(1, 0).size() == 1);

  const MonomialBasis b22 = monomial_basis(2, 2);
  REQUIRE(b22.size() == 6);
  CHECK(b22.exponents[3] == std::vector<int>{2, 0});
  CHECK(b22.exponents[4] == std::vector<int>{1, 1});
  CHECK(b22.exponents[5] == std::vector<int>{0, 2});
}

TEST_CASE("polynomial arithmetic and text form") {
  const Polynomial p = poly_from_terms(2, {{{2, 0}, 1.0}, {{0, 0}, -1.0}});
  CHECK(p.degree() == 2);
  CHECK(p.evaluate({2.0, 5.0}) == doctest::Approx(3.0));
  const Polynomial q = p * p;
  CHECK(q.coefficient({4, 0}) == 1.0);
  CHECK(q.coefficient({2, 0}) == -2.0);
  CHECK(q.coefficient({0, 0}) == 1.0);

  const Polynomial back = Polynomial::from_text(p.to_text());
  CHECK(back.terms() == p.terms());
  CHECK_THROWS_AS(Polynomial::from_text(""), ParseError);
  CHECK_THROWS_AS(Polynomial::from_text("1.0 1 2\n"), ParseError);
  CHECK_THROWS_AS(Polynomial::from_text("1.0 : 1 2\n2.0 : 1\n"), ParseError);
}

TEST_CASE("gram_reconstruct on fixed matrices") {
  const MonomialBasis basis = monomial_basis(1, 1);  // [1, x]
  const Polynomial sq = gram_reconstruct(SymmetricMatrix::diagonal({0, 1}), basis);
  CHECK(sq.terms().size() == 1);
  CHECK(sq.coefficient({2}) == 1.0);

  const Polynomial shifted =
      gram_reconstruct(SymmetricMatrix::from_rows(2, {1, -1, -1, 1}), basis);
  CHECK(shifted.coefficient({0}) == 1.0);
  CHECK(shifted.coefficient({1}) == -2.0);
  CHECK(shifted.coefficient({2}) == 1.0);
}

TEST_CASE("gram_reconstruct matches direct evaluation") {
  testing::Rng rng(9001);
  const MonomialBasis basis = monomial_basis(2, 2);
  const SymmetricMatrix q = testing::random_symmetric(basis.size(), rng);
  const Polynomial p = gram_reconstruct(q, basis);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<double> point = {dist(rng), dist(rng)};
    // v^T Q v at the point
    std::vector<double> v;
    for (const auto& exps : basis.exponents) {
      double m = 1.0;
      for (size_t k = 0; k < exps.size(); ++k)
        for (int e = 0; e < exps[k]; ++e) m *= point[k];
      v.push_back(m);
    }
    double expected = 0.0;
    for (int a = 0; a < q.dim(); ++a)
      for (int b = 0; b < q.dim(); ++b) expected += v[(size_t)a] * q(a, b) * v[(size_t)b];
    CHECK(std::abs(p.evaluate(point) - expected) <= 1e-10 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("sos bound of a perfect square is zero") {
  // (x-1)^2 - gamma is SOS iff gamma <= 0
  const Polynomial f = poly_from_terms(1, {{{2}, 1.0}, {{1}, -2.0}, {{0}, 1.0}});
  const SosBound full = sos_bound(f, SosCone::full(), quick_options());
  REQUIRE(full.solution.status == SolveStatus::optimal);
  CHECK(std::abs(full.gamma) <= 1e-5);

  const SosBound fw2 = sos_bound(f, SosCone::fw2(), quick_options());
  REQUIRE(fw2.solution.status == SolveStatus::optimal);
  CHECK(std::abs(fw2.gamma) <= 1e-5);  // 2x2 Gram: the pairwise cone is everything
}

TEST_CASE("benchmark polynomial structure") {
  CHECK_THROWS_AS(benchmark_q(2), Error);
  for (int n = 3; n <= 6; ++n) {
    const Polynomial q = benchmark_q(n);
    CHECK(q.n_vars() == n);
    CHECK(q.degree() == 4);
    // every coupling bracket is 1 at the origin, the last term vanishes
    CHECK(q.evaluate(std::vector<double>(static_cast<size_t>(n), 0.0)) ==
          doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("benchmark Gram dimension at n = 10") {
  const SosProgram sp =
      sos_program(benchmark_q(10), {Polynomial::constant(10, 1.0)}, {1.0}, SosCone::full());
  CHECK(sp.gram_dim == 66);
  CHECK(sp.program.cone.psd_dims == std::vector<int>{66});
}

TEST_CASE("sos bound is a lower bound on sampled values") {
  const Polynomial q = benchmark_q(4);
  const SosBound bound = sos_bound(q, SosCone::full(), quick_options());
  REQUIRE(bound.solution.status == SolveStatus::optimal);
  testing::Rng rng(31337);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  double min_sample = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 10000; ++rep) {
    std::vector<double> point(4);
    for (double& v : point) v = dist(rng);
    min_sample = std::min(min_sample, q.evaluate(point));
  }
  CHECK(bound.gamma <= min_sample + 1e-6);
}

TEST_CASE("coefficient matching holds at the returned Gram matrix") {
  const Polynomial q = benchmark_q(3);
  const SosBound bound = sos_bound(q, SosCone::full(), quick_options());
  REQUIRE(bound.solution.status == SolveStatus::optimal);
  const Polynomial reconstructed =
      gram_reconstruct(bound.solution.blocks[0], bound.prog.basis);
  Polynomial target = q;
  target += bound.solution.free_values[0] * Polynomial::constant(3, 1.0);
  Polynomial diff = reconstructed - target;
  double worst = 0.0;
  for (const auto& [exps, coeff] : diff.terms()) worst = std::max(worst, std::abs(coeff));
  CHECK(worst <= 1e-6);
}

TEST_CASE("mode ordering on the benchmark bound") {
  const Polynomial q = benchmark_q(3);  // Gram dimension C(5,2) = 10
  const SosBound full = sos_bound(q, SosCone::full(), quick_options());
  const SosBound block2 = sos_bound(q, SosCone::block_uniform(2), quick_options());
  const SosBound block3 = sos_bound(q, SosCone::block_uniform(3), quick_options());
  REQUIRE(full.solution.status == SolveStatus::optimal);
  REQUIRE(block2.solution.status == SolveStatus::optimal);
  REQUIRE(block3.solution.status == SolveStatus::optimal);
  // min -gamma grows as the cone shrinks
  CHECK(-block2.gamma >= -full.gamma - 1e-5);
  CHECK(-block3.gamma >= -block2.gamma - 1e-5);
  // two blocks span the full cone
  CHECK(std::abs(block2.gamma - full.gamma) <= 1e-4 * (1.0 + std::abs(full.gamma)));
}

TEST_CASE("restricted Gram solutions assemble to PSD matrices") {
  const Polynomial q = benchmark_q(3);
  const SosBound block3 = sos_bound(q, SosCone::block_uniform(3), quick_options());
  REQUIRE(block3.solution.status == SolveStatus::optimal);
  const SymmetricMatrix gram = recover_X(block3.solution, block3.prog.gram_partition);
  CHECK(min_eigenvalue(gram) >= -1e-6 * (1.0 + gram.max_abs()));
  // the certified polynomial is nonnegative at random points
  const Polynomial certified = gram_reconstruct(gram, block3.prog.basis);
  testing::Rng rng(5150);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> point(3);
    for (double& v : point) v = dist(rng);
    CHECK(certified.evaluate(point) >= -1e-5 * (1.0 + std::abs(certified.evaluate(point))));
  }
}

TEST_CASE("constant matrix SOS reduces to the matrix cone") {
  // P = I_2: P - gamma I is PSD iff gamma <= 1, in every mode (p = 2)
  PolynomialMatrix p(2, 1);
  p.set(0, 0, Polynomial::constant(1, 1.0));
  p.set(1, 1, Polynomial::constant(1, 1.0));
  for (const SosCone& mode : {SosCone::full(), SosCone::fw2()}) {
    const SosProgram sp = matrix_sos_program(p, true, mode);
    CHECK(sp.gram_dim == 2);
    const Solution sol = solve(sp.program, quick_options());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(-sol.objective == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("constant matrix feasibility agrees with cone membership") {
  // constant P with degree 0 basis: the Gram matrix IS the matrix
  PolynomialMatrix members(3, 1);
  const SymmetricMatrix x = testing::fw4_matrix();
  // embed the leading 3x3 principal submatrix, a pairwise member
  const SymmetricMatrix lead = extract_pair(x, Partition({1, 2, 1}), 1, 2);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      members.set(a, b, Polynomial::constant(1, lead(a, b)));
  const SosFeasibility feas = matrix_sos_feasible(members, SosCone::fw2(), quick_options());
  const MembershipReport direct = membership(lead, Partition({1, 1, 1}));
  CHECK(feas.feasible == (direct.status == MembershipStatus::member));
  CHECK(std::abs(feas.margin - direct.margin) <= 1e-4 * (1.0 + direct.margin));

  PolynomialMatrix all_ones(3, 1);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) all_ones.set(a, b, Polynomial::constant(1, 1.0));
  const SosFeasibility infeasible =
      matrix_sos_feasible(all_ones, SosCone::fw2(), quick_options());
  CHECK_FALSE(infeasible.feasible);
  CHECK(infeasible.margin == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("polynomial matrix json round trip") {
  const PolynomialMatrix p = testing::shifted_pmatrix();
  const PolynomialMatrix back = polynomial_matrix_from_json(polynomial_matrix_to_json(p));
  CHECK(back.size() == p.size());
  CHECK(back.n_vars() == p.n_vars());
  for (int a = 0; a < p.size(); ++a)
    for (int b = a; b < p.size(); ++b) CHECK(back.at(a, b).terms() == p.at(a, b).terms());
}

TEST_CASE("matrix gram reconstruction inverts the coefficient map") {
  testing::Rng rng(24601);
  const MonomialBasis basis = monomial_basis(2, 1);
  const SymmetricMatrix q = testing::random_psd(3 * basis.size(), rng);
  const PolynomialMatrix p = matrix_gram_reconstruct(q, 3, basis);
  // solving the coefficient-matching margin program at this P is feasible
  const SosFeasibility feas = matrix_sos_feasible(p, SosCone::full(), quick_options());
  CHECK(feas.feasible);
}

TEST_SUITE_END();
