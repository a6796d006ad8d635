// Command line front end: batch tools over matrix / certificate / program
// files. Exit codes separate mathematical outcomes from failures:
//   0  success, member, feasible
//   1  non-member or infeasible (a result; report still printed)
//   2  usage or input errors
//   3  numerical failure

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fwsdp/certificate.hpp"
#include "fwsdp/conic_program.hpp"
#include "fwsdp/errors.hpp"
#include "fwsdp/io.hpp"
#include "fwsdp/solver.hpp"
#include "fwsdp/sos.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string partition_spec;
  double tol = -1.0;
  long max_iter = -1;
  unsigned long seed = 0;
  std::string mode = "full";
  std::string out_path;
  int verbosity = 0;
};

// "1,1,2" or "uniform:p"; the dimension resolves "uniform:p".
fwsdp::Partition resolve_partition(const std::string& spec, int dimension) {
  if (spec.rfind("uniform:", 0) == 0) {
    const int p = std::stoi(spec.substr(8));
    return fwsdp::uniform_partition(dimension, p);
  }
  fwsdp::Partition alpha = fwsdp::Partition::from_text(spec);
  if (alpha.dimension() != dimension)
    throw fwsdp::Error("partition covers dimension " +
                       std::to_string(alpha.dimension()) + ", input has dimension " +
                       std::to_string(dimension));
  return alpha;
}

fwsdp::SolverOptions solver_options(const CommonOptions& common) {
  fwsdp::SolverOptions opts = fwsdp::membership_solver_options();
  if (common.tol > 0.0)
    opts.eps_primal = opts.eps_dual = opts.eps_gap = common.tol;
  if (common.max_iter > 0) opts.max_iterations = common.max_iter;
  opts.seed = common.seed;
  opts.verbosity = common.verbosity;
  return opts;
}

fwsdp::SosCone resolve_mode(const std::string& mode, const std::string& partition_spec,
                            std::optional<int> uniform_p) {
  if (mode == "full") return fwsdp::SosCone::full();
  if (mode == "fw2") return fwsdp::SosCone::fw2();
  if (mode == "block") {
    if (!partition_spec.empty() && partition_spec.rfind("uniform:", 0) == 0)
      return fwsdp::SosCone::block_uniform(std::stoi(partition_spec.substr(8)));
    if (!partition_spec.empty())
      return fwsdp::SosCone::block(fwsdp::Partition::from_text(partition_spec));
    if (uniform_p) return fwsdp::SosCone::block_uniform(*uniform_p);
    return fwsdp::SosCone{fwsdp::SosCone::Kind::block, std::nullopt, std::nullopt};
  }
  throw fwsdp::Error("unknown mode '" + mode + "', expected full|fw2|block");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::endl;
  } else {
    fwsdp::write_text_file(out_path, text);
  }
}

int run_check(const std::string& matrix_path, const CommonOptions& common,
              bool write_certificate) {
  const fwsdp::SymmetricMatrix x =
      fwsdp::matrix_from_json(fwsdp::read_text_file(matrix_path));
  const fwsdp::Partition alpha = resolve_partition(common.partition_spec, x.dim());
  const fwsdp::MembershipReport report =
      fwsdp::membership(x, alpha, solver_options(common),
                        common.tol > 0.0 ? common.tol : -1.0);

  std::cout << fwsdp::membership_report_to_json(report, alpha) << std::endl;
  if (report.status == fwsdp::MembershipStatus::numerical_failure) return kExitNumerical;

  if (write_certificate) {
    if (report.status != fwsdp::MembershipStatus::member) return kExitNegative;
    if (!report.certificate)
      throw fwsdp::Error("member without a certificate (single-block partition)");
    // decompositions are re-verified before they are written
    const fwsdp::VerifyReport check = fwsdp::verify_certificate(
        *report.certificate, x, 1e-4 * (1.0 + x.max_abs()), 1e-8 * (1.0 + x.max_abs()));
    if (!check.valid)
      throw fwsdp::NumericalError("recovered certificate failed re-verification: sum error " +
                                  std::to_string(check.sum_error));
    fwsdp::write_text_file(common.out_path,
                           fwsdp::certificate_to_json(*report.certificate));
  }
  return report.status == fwsdp::MembershipStatus::member ? kExitOk : kExitNegative;
}

int run_coarsen(const std::string& cert_path, const CommonOptions& common) {
  const fwsdp::FW2Certificate cert =
      fwsdp::certificate_from_json(fwsdp::read_text_file(cert_path));
  const fwsdp::Partition alpha =
      resolve_partition(common.partition_spec, cert.alpha.dimension());
  const fwsdp::FW2Certificate coarse = fwsdp::coarsen_certificate(cert, alpha);
  emit(fwsdp::certificate_to_json(coarse), common.out_path);
  return kExitOk;
}

int run_transform(const std::string& sdp_path, const CommonOptions& common, bool relax) {
  const fwsdp::ConicProgram prog =
      fwsdp::parse_sdpa(fwsdp::read_text_file(sdp_path));
  if (prog.cone.block_count() != 1)
    throw fwsdp::Error("the input program must have exactly one PSD block");
  const fwsdp::Partition alpha =
      resolve_partition(common.partition_spec, prog.cone.psd_dims[0]);
  const fwsdp::ConicProgram out =
      relax ? fwsdp::relax_dual_fw(prog, alpha) : fwsdp::restrict_fw(prog, alpha);

  const bool want_sdpa = common.out_path.size() > 6 &&
                         common.out_path.substr(common.out_path.size() - 6) == ".dat-s";
  if (want_sdpa) {
    emit(fwsdp::emit_sdpa(out), common.out_path);
  } else {
    emit(fwsdp::program_to_json(out), common.out_path);
  }
  return kExitOk;
}

int run_solve(const std::string& path, const CommonOptions& common,
              const std::string& log_path) {
  const std::string text = fwsdp::read_text_file(path);
  const bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  fwsdp::ConicProgram prog =
      is_json ? fwsdp::program_from_json(text) : fwsdp::parse_sdpa(text);
  if (!common.partition_spec.empty()) {
    const fwsdp::Partition alpha =
        resolve_partition(common.partition_spec, prog.cone.psd_dims.at(0));
    prog = fwsdp::restrict_fw(prog, alpha);
  }
  fwsdp::SolverOptions opts = solver_options(common);
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw fwsdp::Error("cannot write log file: " + log_path);
    opts.log = &log;
    opts.verbosity = std::max(opts.verbosity, 1);
  }
  const fwsdp::Solution sol = fwsdp::solve(prog, opts);
  emit(fwsdp::solution_to_json(sol), common.out_path);
  if (sol.status == fwsdp::SolveStatus::optimal) return kExitOk;
  if (sol.status == fwsdp::SolveStatus::infeasible_suspected) return kExitNegative;
  return kExitNumerical;
}

int run_sos_bound(const std::string& poly_path, int benchmark_n,
                  const CommonOptions& common, std::optional<int> uniform_p) {
  fwsdp::Polynomial f0 = benchmark_n > 0
                             ? fwsdp::benchmark_q(benchmark_n)
                             : fwsdp::Polynomial::from_text(fwsdp::read_text_file(poly_path));
  const fwsdp::SosCone mode = resolve_mode(common.mode, common.partition_spec, uniform_p);
  const fwsdp::SosBound bound = fwsdp::sos_bound(f0, mode, solver_options(common));

  json j;
  j["gamma"] = bound.gamma;
  j["objective"] = bound.solution.objective;
  j["mode"] = common.mode;
  j["gram_dim"] = bound.prog.gram_dim;
  j["gram_partition"] = bound.prog.gram_partition.sizes();
  j["status"] = bound.solution.status == fwsdp::SolveStatus::optimal ? "optimal"
                : bound.solution.status == fwsdp::SolveStatus::infeasible_suspected
                    ? "infeasible-suspected"
                    : "max-iterations";
  j["residuals"] = {{"primal", bound.solution.residuals.primal},
                    {"dual", bound.solution.residuals.dual},
                    {"gap", bound.solution.residuals.gap}};
  j["iterations"] = bound.solution.iterations;
  j["tolerances"] = {{"eps_primal", solver_options(common).eps_primal},
                     {"eps_dual", solver_options(common).eps_dual},
                     {"eps_gap", solver_options(common).eps_gap}};
  emit(j.dump(2), common.out_path);
  if (bound.solution.status == fwsdp::SolveStatus::optimal) return kExitOk;
  if (bound.solution.status == fwsdp::SolveStatus::infeasible_suspected)
    return kExitNegative;
  return kExitNumerical;
}

int run_matrix_sos(const std::string& pmatrix_path, bool gamma_objective,
                   const CommonOptions& common, std::optional<int> uniform_p) {
  const fwsdp::PolynomialMatrix p =
      fwsdp::polynomial_matrix_from_json(fwsdp::read_text_file(pmatrix_path));
  const fwsdp::SosCone mode = resolve_mode(common.mode, common.partition_spec, uniform_p);

  json j;
  j["mode"] = common.mode;
  int exit_code = kExitOk;
  if (gamma_objective) {
    const fwsdp::SosProgram sp = fwsdp::matrix_sos_program(p, true, mode);
    const fwsdp::Solution sol = fwsdp::solve(sp.program, solver_options(common));
    j["gamma"] = -sol.objective;
    j["gram_dim"] = sp.gram_dim;
    j["gram_partition"] = sp.gram_partition.sizes();
    j["residuals"] = {{"primal", sol.residuals.primal},
                      {"dual", sol.residuals.dual},
                      {"gap", sol.residuals.gap}};
    j["iterations"] = sol.iterations;
    if (sol.status != fwsdp::SolveStatus::optimal) exit_code = kExitNumerical;
  } else {
    const fwsdp::SosFeasibility feas =
        fwsdp::matrix_sos_feasible(p, mode, solver_options(common),
                                   common.tol > 0.0 ? common.tol : -1.0);
    j["feasible"] = feas.feasible;
    j["margin"] = feas.margin;
    j["tolerances"] = {{"margin", feas.tol_margin}};
    j["residuals"] = {{"primal", feas.solution.residuals.primal},
                      {"dual", feas.solution.residuals.dual},
                      {"gap", feas.solution.residuals.gap}};
    j["iterations"] = feas.solution.iterations;
    if (!feas.feasible) exit_code = kExitNegative;
  }
  emit(j.dump(2), common.out_path);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block factor-width-two matrix cones: membership, decomposition, "
               "and conic program transforms"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string matrix_path, cert_path, sdp_path, poly_path, pmatrix_path, log_path;
  int benchmark_n = 0;
  bool gamma_objective = false;
  std::optional<int> uniform_p;

  auto add_common = [&](CLI::App* cmd, bool needs_partition) {
    auto* popt = cmd->add_option("--partition", common.partition_spec,
                                 "block sizes '1,1,2' or 'uniform:p'");
    if (needs_partition) popt->required();
    cmd->add_option("--tol", common.tol, "solver / decision tolerance");
    cmd->add_option("--max-iter", common.max_iter, "iteration cap");
    cmd->add_option("--seed", common.seed, "seed for randomized restarts");
    cmd->add_option("--out", common.out_path, "output path (default: stdout)");
    cmd->add_flag("-v,--verbose", common.verbosity, "verbose solver output");
  };

  auto* check = app.add_subcommand("check", "test membership of a matrix in the pairwise cone");
  check->add_option("--matrix", matrix_path, "symmetric matrix JSON")->required();
  add_common(check, true);

  auto* decompose = app.add_subcommand("decompose", "compute and write a pairwise certificate");
  decompose->add_option("--matrix", matrix_path, "symmetric matrix JSON")->required();
  add_common(decompose, true);

  auto* coarsen = app.add_subcommand("coarsen", "rewrite a certificate under a coarser partition");
  coarsen->add_option("--cert", cert_path, "certificate JSON")->required();
  add_common(coarsen, true);

  auto* restrict_cmd = app.add_subcommand("restrict", "split one PSD block into pairwise blocks");
  restrict_cmd->add_option("--sdp", sdp_path, "SDPA sparse input")->required();
  add_common(restrict_cmd, true);

  auto* relax = app.add_subcommand("relax", "outer approximation through the dual cone");
  relax->add_option("--sdp", sdp_path, "SDPA sparse input")->required();
  add_common(relax, true);

  auto* solve_cmd = app.add_subcommand("solve", "run the splitting solver on a program");
  solve_cmd->add_option("--sdp", sdp_path, "SDPA sparse or program JSON input")->required();
  solve_cmd->add_option("--log", log_path, "CSV iteration log path");
  add_common(solve_cmd, false);

  auto* sos_bound_cmd = app.add_subcommand("sos-bound", "largest gamma with f - gamma SOS");
  sos_bound_cmd->add_option("--poly", poly_path, "polynomial text file");
  sos_bound_cmd->add_option("--benchmark-q", benchmark_n,
                            "use the built-in chained benchmark with n variables");
  sos_bound_cmd->add_option("--mode", common.mode, "full|fw2|block")->required();
  sos_bound_cmd->add_option("--p", uniform_p, "uniform block count for block mode");
  add_common(sos_bound_cmd, false);

  auto* matrix_sos = app.add_subcommand("matrix-sos", "pairwise SOS feasibility of a polynomial matrix");
  matrix_sos->add_option("--pmatrix", pmatrix_path, "polynomial matrix JSON")->required();
  matrix_sos->add_option("--mode", common.mode, "full|fw2|block")->required();
  matrix_sos->add_option("--p", uniform_p, "uniform block count for block mode");
  matrix_sos->add_flag("--gamma", gamma_objective, "maximize gamma with P - gamma I in the cone");
  add_common(matrix_sos, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(matrix_path, common, false);
    if (decompose->parsed()) {
      if (common.out_path.empty())
        throw fwsdp::Error("decompose requires --out for the certificate");
      return run_check(matrix_path, common, true);
    }
    if (coarsen->parsed()) return run_coarsen(cert_path, common);
    if (restrict_cmd->parsed()) return run_transform(sdp_path, common, false);
    if (relax->parsed()) return run_transform(sdp_path, common, true);
    if (solve_cmd->parsed()) return run_solve(sdp_path, common, log_path);
    if (sos_bound_cmd->parsed()) {
      if (poly_path.empty() && benchmark_n == 0)
        throw fwsdp::Error("sos-bound needs --poly or --benchmark-q");
      return run_sos_bound(poly_path, benchmark_n, common, uniform_p);
    }
    if (matrix_sos->parsed())
      return run_matrix_sos(pmatrix_path, gamma_objective, common, uniform_p);
    throw fwsdp::Error("no subcommand");
  } catch (const fwsdp::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << std::endl;
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return kExitUsage;
  }
}
