#pragma once

#include <string>

#include "fwsdp/certificate.hpp"
#include "fwsdp/conic_program.hpp"
#include "fwsdp/polynomial.hpp"

namespace fwsdp {

/// JSON text bridges for the on-disk formats. Floating-point values are
/// emitted with shortest round-trip precision.

std::string matrix_to_json(const SymmetricMatrix& m);
SymmetricMatrix matrix_from_json(const std::string& text);

std::string partition_to_json(const Partition& p);
Partition partition_from_json(const std::string& text);

std::string certificate_to_json(const FW2Certificate& cert);
FW2Certificate certificate_from_json(const std::string& text);

std::string program_to_json(const ConicProgram& prog);
ConicProgram program_from_json(const std::string& text);

std::string solution_to_json(const Solution& sol);

std::string membership_report_to_json(const MembershipReport& report,
                                      const Partition& alpha);

std::string polynomial_matrix_to_json(const PolynomialMatrix& p);
PolynomialMatrix polynomial_matrix_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fwsdp
