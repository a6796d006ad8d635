#pragma once

#include <map>
#include <string>
#include <vector>

namespace fwsdp {

/// Multivariate polynomial as a map from exponent vectors to coefficients.
/// Zero coefficients are never stored; the exponent vectors all have length
/// n_vars. Value type, safe to share.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int n_vars);
  static Polynomial constant(int n_vars, double value);
  /// x_index, 0-based.
  static Polynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, double>& terms() const { return terms_; }

  double coefficient(const Exponents& exps) const;
  /// Accumulates; entries cancelling to zero are removed.
  void add_term(const Exponents& exps, double coeff);

  double evaluate(const std::vector<double>& point) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }
  friend Polynomial operator*(double s, Polynomial a) { a *= s; return a; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// One term per line: "coeff : e1 e2 ... en". Blank lines and lines
  /// starting with '#' are ignored on input.
  std::string to_text() const;
  static Polynomial from_text(const std::string& text);

 private:
  int n_vars_;
  std::map<Exponents, double> terms_;
};

/// Symmetric matrix of polynomials over a shared variable set.
class PolynomialMatrix {
 public:
  PolynomialMatrix(int size, int n_vars);

  int size() const { return size_; }
  int n_vars() const { return n_vars_; }
  int degree() const;

  const Polynomial& at(int a, int b) const;
  /// Writes both (a, b) and (b, a).
  void set(int a, int b, Polynomial value);

  /// Pointwise value at a given variable assignment.
  std::vector<double> evaluate(const std::vector<double>& point) const;

 private:
  size_t tri_index(int a, int b) const;
  int size_;
  int n_vars_;
  std::vector<Polynomial> upper_;  // row-major upper triangle
};

/// All monomials of degree <= degree in graded lexicographic order: by
/// total degree, then lexicographically with x1 ranked highest.
struct MonomialBasis {
  int n_vars = 0;
  int degree = 0;
  std::vector<Polynomial::Exponents> exponents;

  int size() const { return static_cast<int>(exponents.size()); }
};

MonomialBasis monomial_basis(int n_vars, int degree);

}  // namespace fwsdp
