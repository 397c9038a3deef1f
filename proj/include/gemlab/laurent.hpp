#pragma once

// Exact sparse multivariate Laurent polynomials over the Gaussian rationals,
// with the quotient-ring normal form modulo (prod x_i y_i - 1), exact
// division, substitution and divided differences.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gemlab {

class TableMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NonDivisible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonInvertibleBinding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicatePoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// a + b*i with a, b exact rationals (always kept canonical by GMP).
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(mpq_class re, mpq_class im = 0);
  static GaussRational fraction(long num, long den);
  static GaussRational imag_unit() { return GaussRational(0, 1); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussRational conj() const { return {re_, -im_}; }
  GaussRational inverse() const;

  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);
  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  GaussRational operator-() const { return {-re_, -im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// "a/b+c/d*i", denominators always printed.
  std::string to_string() const;
  static GaussRational parse(std::string_view text);

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

enum class VarRole {
  kPairX,  // x_p: takes part in the quotient relation
  kPairY,  // y_p: takes part in the quotient relation
  kUnit,   // z_j = e^{i theta_j}; conjugates to its inverse
  kPlain,  // anything else; conjugates to its partner if it has one, else to itself
};

struct Variable {
  std::string name;
  VarRole role = VarRole::kPlain;
  int partner = -1;  // index of the conjugate variable, -1 if self-conjugate
};

class VarTable;
using VarTablePtr = std::shared_ptr<const VarTable>;

/// Ordered variable list. Pair variables are laid out first as
/// x1, y1, ..., xk, yk when created through make().
class VarTable {
 public:
  explicit VarTable(std::vector<Variable> vars);

  /// k pairs (x1,y1,...,xk,yk), K unit symbols z1..zK, then plain variables.
  static VarTablePtr make(int pairs, int units, const std::vector<std::string>& plain = {});
  /// A single plain variable; the usual home of univariate polynomials.
  static VarTablePtr univariate(const std::string& name);

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }

  /// Index of a variable; throws std::out_of_range when absent.
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  int pair_count() const { return pair_count_; }
  const std::vector<std::size_t>& pair_slots() const { return pair_slots_; }
  std::size_t x_slot(int p) const;  // p in [1, k]
  std::size_t y_slot(int p) const;
  std::size_t z_slot(int j) const;  // j in [1, K]

  bool same_as(const VarTable& other) const;

 private:
  std::vector<Variable> vars_;
  std::vector<std::size_t> pair_slots_;
  int pair_count_ = 0;
};

using Exponents = std::vector<int>;

class LaurentPoly {
 public:
  using TermMap = std::map<Exponents, GaussRational>;

  explicit LaurentPoly(VarTablePtr table);
  static LaurentPoly constant(VarTablePtr table, const GaussRational& c);
  static LaurentPoly variable(VarTablePtr table, std::string_view name, int power = 1);
  static LaurentPoly monomial(VarTablePtr table, Exponents exps, const GaussRational& c = 1);

  const VarTablePtr& table() const { return table_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const;
  /// Coefficient of the constant monomial.
  GaussRational constant_term() const;
  GaussRational coefficient(const Exponents& e) const;

  /// Adds c * monomial(e) in place.
  void add_term(const Exponents& e, const GaussRational& c);

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const GaussRational& c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const GaussRational& c) { return a *= c; }
  friend LaurentPoly operator*(const GaussRational& c, LaurentPoly a) { return a *= c; }
  LaurentPoly operator-() const;
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);

  /// Negative powers are only defined for monomials.
  LaurentPoly pow(int n) const;
  /// i -> -i, z_j -> 1/z_j, partners swapped (x_p <-> y_p).
  LaurentPoly conjugate() const;

  /// Minimum and maximum total degree over all terms (0, 0 for the zero polynomial).
  std::pair<int, int> degree_range() const;
  /// Terms whose total degree (all variables) equals deg.
  LaurentPoly homogeneous_part(int deg) const;
  /// Drops terms of total degree above max_deg.
  LaurentPoly truncated(int max_deg) const;

  /// Reinterprets the polynomial in another table, matching variables by name.
  /// Variables with a nonzero exponent must exist in the target.
  LaurentPoly rebased(const VarTablePtr& target) const;

  /// Canonical text form, see laurent serialization in the README.
  std::string to_string() const;

 private:
  void check_table(const LaurentPoly& o) const;
  VarTablePtr table_;
  TermMap terms_;
};

/// Canonical representative modulo (prod_{i<=k} x_i y_i - 1): every monomial's
/// pair-exponent block is shifted by a multiple of (1,...,1) until its minimum is 0.
LaurentPoly normal_form(const LaurentPoly& p, int k);

/// True iff p and q have the same image in the quotient ring.
bool same_class(const LaurentPoly& p, const LaurentPoly& q, int k);

/// r with p == q * r. Throws NonDivisible when q does not divide p.
LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q);

/// Maps variable name -> replacement polynomial. All replacements share one table.
using Bindings = std::map<std::string, LaurentPoly, std::less<>>;

/// Composition. Unbound variables of p are looked up by name in the
/// bindings' table. Throws NonInvertibleBinding if a variable with a negative
/// exponent is bound to a non-monomial.
LaurentPoly substitute(const LaurentPoly& p, const Bindings& bindings);

/// D(x_1,...,x_n)(f) = sum_i f(x_i) / prod_{j != i} (x_j - x_i), where f is
/// viewed as a Laurent polynomial in `var` (its other variables are carried
/// along by name into the points' table). Evaluated by the pairwise recursion
///   D(S+{a,b}) = (D(S+{a}) - D(S+{b})) / (b - a)
/// with exact division at every step.
LaurentPoly divided_diff(std::span<const LaurentPoly> points, const LaurentPoly& f,
                         std::string_view var);
/// Univariate convenience: f must live in a one-variable table.
LaurentPoly divided_diff(std::span<const LaurentPoly> points, const LaurentPoly& f);

/// Floating-point evaluation; `values` holds one number per table slot.
std::complex<double> evaluate(const LaurentPoly& p, std::span<const std::complex<double>> values);
std::complex<double> to_complex(const GaussRational& c);

/// Inverse of LaurentPoly::to_string for the given table.
LaurentPoly parse_poly(const VarTablePtr& table, std::string_view text);

}  // namespace gemlab
