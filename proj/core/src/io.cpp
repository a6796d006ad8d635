#include "fwsdp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fwsdp/errors.hpp"

namespace fwsdp {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

json rows_of(const SymmetricMatrix& m) {
  json rows = json::array();
  for (int a = 0; a < m.dim(); ++a) {
    json row = json::array();
    for (int b = 0; b < m.dim(); ++b) row.push_back(m(a, b));
    rows.push_back(std::move(row));
  }
  return rows;
}

SymmetricMatrix matrix_of(const json& j, int expect_n = -1) {
  if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
    throw ParseError("matrix JSON needs fields \"n\" and \"rows\"");
  const int n = j.at("n").get<int>();
  if (expect_n > 0 && n != expect_n)
    throw ParseError("matrix dimension " + std::to_string(n) + ", expected " +
                     std::to_string(expect_n));
  std::vector<double> data;
  data.reserve(static_cast<size_t>(n) * n);
  const json& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ParseError("matrix JSON: expected " + std::to_string(n) + " rows");
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("matrix JSON: row length does not match n");
    for (const json& v : row) data.push_back(v.get<double>());
  }
  return SymmetricMatrix::from_rows(n, data, 1e-12);
}

json rows_only(const SymmetricMatrix& m) { return rows_of(m); }

SymmetricMatrix matrix_of_rows(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ParseError("expected a row array");
  const int n = static_cast<int>(rows.size());
  std::vector<double> data;
  data.reserve(static_cast<size_t>(n) * n);
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("row length does not match the row count");
    for (const json& v : row) data.push_back(v.get<double>());
  }
  return SymmetricMatrix::from_rows(n, data, 1e-12);
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible_suspected: return "infeasible-suspected";
    case SolveStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

json residuals_json(const Residuals& r) {
  return json{{"primal", r.primal}, {"dual", r.dual}, {"gap", r.gap}};
}

json block_matrix_json(const BlockMatrix& m) {
  json out;
  out["blocks"] = json::array();
  for (const SymmetricMatrix& blk : m.blocks) out["blocks"].push_back(rows_only(blk));
  out["free"] = m.free_coeffs;
  return out;
}

BlockMatrix block_matrix_of(const json& j, const ConeLayout& cone) {
  BlockMatrix m;
  const json& blocks = j.at("blocks");
  if (static_cast<int>(blocks.size()) != cone.block_count())
    throw ParseError("block count does not match the cone");
  for (size_t k = 0; k < blocks.size(); ++k) {
    SymmetricMatrix blk = matrix_of_rows(blocks[k]);
    if (blk.dim() != cone.psd_dims[k])
      throw ParseError("block " + std::to_string(k + 1) + " dimension mismatch");
    m.blocks.push_back(std::move(blk));
  }
  m.free_coeffs = j.at("free").get<std::vector<double>>();
  if (static_cast<int>(m.free_coeffs.size()) != cone.free_dim)
    throw ParseError("free segment length does not match the cone");
  return m;
}

}  // namespace

std::string matrix_to_json(const SymmetricMatrix& m) {
  json j{{"n", m.dim()}, {"rows", rows_of(m)}};
  return j.dump(2);
}

SymmetricMatrix matrix_from_json(const std::string& text) {
  return matrix_of(parse(text));
}

std::string partition_to_json(const Partition& p) { return json(p.sizes()).dump(); }

Partition partition_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_array()) throw ParseError("partition JSON is an array of sizes");
  return Partition(j.get<std::vector<int>>());
}

std::string certificate_to_json(const FW2Certificate& cert) {
  json j;
  j["partition"] = cert.alpha.sizes();
  j["blocks"] = json::array();
  for (const auto& [key, value] : cert.blocks) {
    json blk;
    blk["i"] = key.first;
    blk["j"] = key.second;
    blk["rows"] = rows_of(value);
    j["blocks"].push_back(std::move(blk));
  }
  return j.dump(2);
}

FW2Certificate certificate_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("partition") || !j.contains("blocks"))
    throw ParseError("certificate JSON needs \"partition\" and \"blocks\"");
  FW2Certificate cert{Partition(j.at("partition").get<std::vector<int>>())};
  for (const json& blk : j.at("blocks")) {
    const int i = blk.at("i").get<int>();
    const int jj = blk.at("j").get<int>();
    if (i >= jj) throw ParseError("certificate blocks require i < j");
    cert.set_block(i, jj, matrix_of_rows(blk.at("rows")));
  }
  return cert;
}

std::string program_to_json(const ConicProgram& prog) {
  json j;
  j["cone"] = {{"psd_dims", prog.cone.psd_dims}, {"free_dim", prog.cone.free_dim}};
  j["objective"] = block_matrix_json(prog.objective);
  j["constraints"] = json::array();
  for (const BlockMatrix& a : prog.constraints)
    j["constraints"].push_back(block_matrix_json(a));
  j["rhs"] = prog.rhs;
  switch (prog.provenance) {
    case Provenance::original: j["provenance"] = "original"; break;
    case Provenance::restricted: j["provenance"] = "restricted"; break;
    case Provenance::relaxed: j["provenance"] = "relaxed"; break;
  }
  if (prog.partition) j["partition"] = prog.partition->sizes();
  if (!prog.pair_labels.empty()) {
    json labels = json::array();
    for (const auto& [i, jj] : prog.pair_labels) labels.push_back(json::array({i, jj}));
    j["pair_labels"] = std::move(labels);
  }
  if (prog.margin_block >= 0) j["margin_block"] = prog.margin_block;
  if (prog.free_x_offset >= 0) j["free_x_offset"] = prog.free_x_offset;
  return j.dump(2);
}

ConicProgram program_from_json(const std::string& text) {
  const json j = parse(text);
  ConicProgram prog;
  prog.cone.psd_dims = j.at("cone").at("psd_dims").get<std::vector<int>>();
  prog.cone.free_dim = j.at("cone").at("free_dim").get<int>();
  prog.objective = block_matrix_of(j.at("objective"), prog.cone);
  for (const json& a : j.at("constraints"))
    prog.constraints.push_back(block_matrix_of(a, prog.cone));
  prog.rhs = j.at("rhs").get<std::vector<double>>();
  if (j.contains("provenance")) {
    const std::string p = j.at("provenance").get<std::string>();
    if (p == "restricted") prog.provenance = Provenance::restricted;
    else if (p == "relaxed") prog.provenance = Provenance::relaxed;
    else prog.provenance = Provenance::original;
  }
  if (j.contains("partition"))
    prog.partition = Partition(j.at("partition").get<std::vector<int>>());
  if (j.contains("pair_labels"))
    for (const json& label : j.at("pair_labels"))
      prog.pair_labels.emplace_back(label.at(0).get<int>(), label.at(1).get<int>());
  if (j.contains("margin_block")) prog.margin_block = j.at("margin_block").get<int>();
  if (j.contains("free_x_offset")) prog.free_x_offset = j.at("free_x_offset").get<int>();
  prog.validate();
  return prog;
}

std::string solution_to_json(const Solution& sol) {
  json j;
  j["status"] = status_name(sol.status);
  j["objective"] = sol.objective;
  j["blocks"] = json::array();
  for (const SymmetricMatrix& blk : sol.blocks) j["blocks"].push_back(rows_of(blk));
  j["free"] = sol.free_values;
  j["dual"] = sol.dual;
  j["residuals"] = residuals_json(sol.residuals);
  j["iterations"] = sol.iterations;
  j["rho_final"] = sol.rho_final;
  if (!sol.diagnostic.empty()) j["diagnostic"] = sol.diagnostic;
  return j.dump(2);
}

std::string membership_report_to_json(const MembershipReport& report,
                                      const Partition& alpha) {
  json j;
  switch (report.status) {
    case MembershipStatus::member: j["status"] = "member"; break;
    case MembershipStatus::non_member: j["status"] = "non_member"; break;
    case MembershipStatus::numerical_failure: j["status"] = "numerical_failure"; break;
  }
  j["margin"] = report.margin;
  j["tolerances"] = {{"margin", report.tol_margin}};
  j["partition"] = alpha.sizes();
  j["residuals"] = residuals_json(report.solver_residuals);
  j["iterations"] = report.iterations;
  if (report.certificate) {
    j["certificate"] = parse(certificate_to_json(*report.certificate));
  }
  if (report.witness) {
    json w;
    w["z"] = {{"n", report.witness->z.dim()}, {"rows", rows_of(report.witness->z)}};
    w["pair_min_eigs"] = json::array();
    for (const auto& [i, jj, eig] : report.witness->pair_eigs)
      w["pair_min_eigs"].push_back(json::array({i, jj, eig}));
    w["min_pair_eig"] = report.witness->min_pair_eig;
    w["tol_psd"] = report.witness->tol_psd;
    j["witness"] = std::move(w);
  }
  if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
  return j.dump(2);
}

std::string polynomial_matrix_to_json(const PolynomialMatrix& p) {
  json j;
  j["n"] = p.size();
  j["vars"] = p.n_vars();
  j["entries"] = json::array();
  for (int a = 0; a < p.size(); ++a) {
    for (int b = a; b < p.size(); ++b) {
      const Polynomial& entry = p.at(a, b);
      if (entry.is_zero()) continue;
      json e;
      e["a"] = a + 1;
      e["b"] = b + 1;
      e["terms"] = json::array();
      for (const auto& [exps, coeff] : entry.terms())
        e["terms"].push_back(json{{"coeff", coeff}, {"exps", exps}});
      j["entries"].push_back(std::move(e));
    }
  }
  return j.dump(2);
}

PolynomialMatrix polynomial_matrix_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("n") || !j.contains("vars") || !j.contains("entries"))
    throw ParseError("polynomial matrix JSON needs \"n\", \"vars\" and \"entries\"");
  PolynomialMatrix p(j.at("n").get<int>(), j.at("vars").get<int>());
  for (const json& e : j.at("entries")) {
    const int a = e.at("a").get<int>();
    const int b = e.at("b").get<int>();
    if (a < 1 || b < a || b > p.size())
      throw ParseError("entry indices must satisfy 1 <= a <= b <= n");
    Polynomial entry(p.n_vars());
    for (const json& t : e.at("terms"))
      entry.add_term(t.at("exps").get<std::vector<int>>(), t.at("coeff").get<double>());
    p.set(a - 1, b - 1, std::move(entry));
  }
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace fwsdp
