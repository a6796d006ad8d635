#include "fwsdp/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "fwsdp/errors.hpp"

namespace fwsdp {

Polynomial::Polynomial(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 1) throw Error("polynomials need at least one variable");
}

Polynomial Polynomial::constant(int n_vars, double value) {
  Polynomial p(n_vars);
  p.add_term(Exponents(static_cast<size_t>(n_vars), 0), value);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars)
    throw Error("variable index " + std::to_string(index) + " out of range");
  Polynomial p(n_vars);
  Exponents e(static_cast<size_t>(n_vars), 0);
  e[static_cast<size_t>(index)] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [exps, coeff] : terms_)
    d = std::max(d, std::accumulate(exps.begin(), exps.end(), 0));
  return d;
}

double Polynomial::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponents& exps, double coeff) {
  if (static_cast<int>(exps.size()) != n_vars_)
    throw Error("exponent vector length " + std::to_string(exps.size()) +
                " does not match variable count " + std::to_string(n_vars_));
  for (int e : exps)
    if (e < 0) throw Error("exponents must be nonnegative");
  if (!std::isfinite(coeff)) throw NumericalError("non-finite polynomial coefficient");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::evaluate(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != n_vars_)
    throw Error("evaluation point length does not match variable count");
  double total = 0.0;
  for (const auto& [exps, coeff] : terms_) {
    double term = coeff;
    for (size_t v = 0; v < exps.size(); ++v)
      for (int e = 0; e < exps[v]; ++e) term *= point[v];
    total += term;
  }
  return total;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (n_vars_ != other.n_vars_) throw Error("variable count mismatch in polynomial sum");
  for (const auto& [exps, coeff] : other.terms_) add_term(exps, coeff);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (n_vars_ != other.n_vars_) throw Error("variable count mismatch in polynomial sum");
  for (const auto& [exps, coeff] : other.terms_) add_term(exps, -coeff);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [exps, coeff] : terms_) coeff *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.n_vars() != b.n_vars()) throw Error("variable count mismatch in polynomial product");
  Polynomial out(a.n_vars());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      Polynomial::Exponents e(ea);
      for (size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::to_text() const {
  std::ostringstream out;
  char buf[64];
  for (const auto& [exps, coeff] : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g", coeff);
    out << buf << " :";
    for (int e : exps) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

Polynomial Polynomial::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  Polynomial out(1);
  bool initialized = false;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("term lines have the form 'coeff : e1 e2 ... en'", line_no);
    char* end = nullptr;
    const double coeff = std::strtod(line.c_str() + first, &end);
    if (end == line.c_str() + first)
      throw ParseError("could not read coefficient", line_no);
    std::istringstream rest(line.substr(colon + 1));
    Exponents exps;
    int e;
    while (rest >> e) exps.push_back(e);
    if (!rest.eof())
      throw ParseError("could not read exponent list", line_no);
    if (exps.empty()) throw ParseError("empty exponent list", line_no);
    if (!initialized) {
      out = Polynomial(static_cast<int>(exps.size()));
      initialized = true;
    }
    if (exps.size() != static_cast<size_t>(out.n_vars()))
      throw ParseError("exponent list length changed from " +
                       std::to_string(out.n_vars()) + " to " +
                       std::to_string(exps.size()), line_no);
    out.add_term(exps, coeff);
  }
  if (!initialized) throw ParseError("polynomial file has no terms");
  return out;
}

PolynomialMatrix::PolynomialMatrix(int size, int n_vars)
    : size_(size), n_vars_(n_vars) {
  if (size < 1) throw Error("polynomial matrix dimension must be positive");
  if (n_vars < 1) throw Error("polynomials need at least one variable");
  upper_.assign(static_cast<size_t>(size) * (size + 1) / 2, Polynomial(n_vars));
}

size_t PolynomialMatrix::tri_index(int a, int b) const {
  if (a < 0 || b < 0 || a >= size_ || b >= size_)
    throw Error("polynomial matrix index out of range");
  if (a > b) std::swap(a, b);
  return static_cast<size_t>(a) * size_ - static_cast<size_t>(a) * (a - 1) / 2 +
         static_cast<size_t>(b - a);
}

int PolynomialMatrix::degree() const {
  int d = 0;
  for (const Polynomial& p : upper_) d = std::max(d, p.degree());
  return d;
}

const Polynomial& PolynomialMatrix::at(int a, int b) const {
  return upper_[tri_index(a, b)];
}

void PolynomialMatrix::set(int a, int b, Polynomial value) {
  if (value.n_vars() != n_vars_)
    throw Error("entry variable count does not match the matrix");
  upper_[tri_index(a, b)] = std::move(value);
}

std::vector<double> PolynomialMatrix::evaluate(const std::vector<double>& point) const {
  std::vector<double> values(static_cast<size_t>(size_) * size_, 0.0);
  for (int a = 0; a < size_; ++a) {
    for (int b = a; b < size_; ++b) {
      const double v = at(a, b).evaluate(point);
      values[static_cast<size_t>(a) * size_ + b] = v;
      values[static_cast<size_t>(b) * size_ + a] = v;
    }
  }
  return values;
}

namespace {

// Exponent vectors of total degree exactly `degree`, x1 ranked highest.
void exact_degree_monomials(int n_vars, int degree, Polynomial::Exponents& prefix,
                            std::vector<Polynomial::Exponents>& out) {
  if (static_cast<int>(prefix.size()) == n_vars - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    prefix.push_back(e);
    exact_degree_monomials(n_vars, degree - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonomialBasis monomial_basis(int n_vars, int degree) {
  if (n_vars < 1) throw Error("monomial basis needs at least one variable");
  if (degree < 0) throw Error("monomial basis degree must be nonnegative");
  MonomialBasis basis;
  basis.n_vars = n_vars;
  basis.degree = degree;
  Polynomial::Exponents prefix;
  for (int d = 0; d <= degree; ++d)
    exact_degree_monomials(n_vars, d, prefix, basis.exponents);
  return basis;
}

}  // namespace fwsdp
