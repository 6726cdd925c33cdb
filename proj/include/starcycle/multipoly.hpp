#ifndef STARCYCLE_MULTIPOLY_HPP
#define STARCYCLE_MULTIPOLY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace starcycle {

using Rational = mpq_class;

using Expvec = std::vector<int32_t>;

// Graded lexicographic order on exponent vectors of equal length.  The
// variable at index 0 is the most significant one.
struct GrlexLess {
  bool operator()(const Expvec& a, const Expvec& b) const;
};

// Sparse exact multivariate polynomial over the rationals.  Variables are
// identified by name; the fixed names f, g, u, v, x, y, r come first in the
// canonical order and every other identifier (parameters) after them, in
// order of first appearance.  Immutable in spirit: all operations return new
// values, so instances are safe to share across threads.
class MultiPoly {
public:
  using TermMap = std::map<Expvec, Rational, GrlexLess>;

  MultiPoly() = default;  // zero polynomial, empty variable table

  static MultiPoly constant(const Rational& c);
  static MultiPoly integer(long n) { return constant(Rational(n)); }
  static MultiPoly var(const std::string& name);

  // Raw constructor; drops zero coefficients.
  MultiPoly(std::vector<std::string> vars, TermMap terms);

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value of a constant polynomial (zero polynomial gives 0).
  Rational constant_value() const;

  std::size_t term_count() const { return terms_.size(); }

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const Rational& c) const;
  MultiPoly pow(unsigned e) const;

  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  // Formal partial derivative; unknown names differentiate to zero only if
  // truly absent from the table, otherwise behave as ordinary variables.
  MultiPoly diff(const std::string& name) const;

  // Simultaneous exact substitution, fully expanded.
  MultiPoly subst(const std::map<std::string, MultiPoly>& bindings) const;

  // Exact evaluation; every variable of the polynomial must be bound.
  Rational eval(const std::map<std::string, Rational>& point) const;

  // Degree in one variable (-1 for the zero polynomial, 0 if absent).
  int degree(const std::string& name) const;
  int total_degree() const;  // -1 for zero

  bool depends_on(const std::string& name) const;

  // Coefficients viewed as univariate in `name`, ascending degree.  The zero
  // polynomial gives an empty list.
  std::vector<MultiPoly> coeffs_wrt(const std::string& name) const;

  // True when every exponent of `name` is even.
  bool is_even_in(const std::string& name) const;

  // Substitute name -> -name.
  MultiPoly negate_var(const std::string& name) const;

  std::string str() const;  // human-readable, deterministic

  // --- ring helpers used across the library ---

  // Exact quotient p/d, or nullopt when division leaves a remainder.
  friend std::optional<MultiPoly> exact_div(const MultiPoly& p,
                                            const MultiPoly& d);

  // Split off content: content = (rational gcd of coefficients, signed so the
  // primitive part has positive leading coefficient) times the largest
  // monomial dividing every term.  Returns (primitive, content).
  friend std::pair<MultiPoly, MultiPoly> strip_content(const MultiPoly& p);

  // Rewrite powers of v through v^2 = 1-u^2; returns (p0, p1) with
  // p == p0 + v*p1 and both parts v-free.
  friend std::pair<MultiPoly, MultiPoly> v_split(const MultiPoly& p);

  // Align two polynomials onto a merged variable table.
  static void align(MultiPoly& a, MultiPoly& b);

private:
  std::vector<std::string> vars_;
  TermMap terms_;

  int var_index(const std::string& name) const;  // -1 when absent
  MultiPoly remapped(const std::vector<std::string>& new_vars) const;
  void prune_zeros();
};

std::optional<MultiPoly> exact_div(const MultiPoly& p, const MultiPoly& d);
std::pair<MultiPoly, MultiPoly> strip_content(const MultiPoly& p);
std::pair<MultiPoly, MultiPoly> v_split(const MultiPoly& p);

// Determinant of the Sylvester matrix of p and q in `var`, first argument's
// coefficient rows on top.  Exact; see resultant.cpp for the evaluation
// strategy on large many-variable inputs.
MultiPoly sylvester_resultant(const MultiPoly& p, const MultiPoly& q,
                              const std::string& var);

// Not-necessarily-reduced quotient of polynomials.  Common monomial content
// of num and den is stripped on construction; den must be nonzero.
struct RationalFunction {
  MultiPoly num;
  MultiPoly den;

  RationalFunction() : num(), den(MultiPoly::integer(1)) {}
  RationalFunction(MultiPoly n, MultiPoly d);
};

double to_double(const Rational& q);

// Double-precision evaluator over a fixed argument order.  Every variable the
// polynomial actually uses must appear in the order list.
class CompiledPoly {
public:
  CompiledPoly() = default;
  CompiledPoly(const MultiPoly& p, const std::vector<std::string>& arg_order);

  double operator()(const double* args) const;
  double operator()(const std::vector<double>& args) const {
    return (*this)(args.data());
  }

private:
  struct Term {
    double coeff;
    std::vector<std::pair<std::size_t, int32_t>> powers;  // (arg index, exp)
  };
  std::vector<Term> terms_;
};

}  // namespace starcycle

#endif
