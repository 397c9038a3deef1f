#pragma once

// The algebra model: index tuples D_{2k,l}, the Hall-Littlewood basis
// monomials, phi_{2k}, the symbolic trace expansion, G'_{2k} by the trace and
// Hall-Littlewood routes, the corollary polynomial and the L_{2k} degree.

#include <climits>
#include <compare>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gemlab/laurent.hpp"
#include "gemlab/opuc.hpp"
#include "gemlab/trig.hpp"

namespace gemlab {

class RouteMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Outcome of an identity check; `detail` carries a diff on failure.
struct CheckResult {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------- enumeration

/// (i_1, j_1, ..., i_k, j_k); stored as two vectors of length k.
struct IndexTuple {
  std::vector<int> i;
  std::vector<int> j;
  auto operator<=>(const IndexTuple&) const = default;
  std::string to_string() const;
};

/// All v in Z^k with sum l and entries >= 0 (positive = false) or >= 1.
std::vector<std::vector<int>> compositions(int k, int l, bool positive);

/// D_{2k,l} as the image of E_{k,l} x E~_{k,l}; sorted.
std::vector<IndexTuple> enum_D(int k, int l);
/// D_{2k,l} by filtering the integer box [-l, 2l]^{2k}; sorted.
std::vector<IndexTuple> enum_D_direct(int k, int l);

/// C(l+k-1, k-1) * C(l-1, k-1).
long expected_D_size(int k, int l);

// ---------------------------------------------------------------- basis

/// Monomials a_{k,p}, b_{k,p}, c_{k,p}, d_{k,p} (p = 1..k) and e_{k,p}
/// (p = 1..k+1, e_{k,k+1} = e_{k,1}) over a table with k pairs.
struct HLBasis {
  HLBasis(const VarTablePtr& table, int k);

  int k;
  VarTablePtr table;
  std::vector<LaurentPoly> a, b, c, d, e;  // index 0 unused

  /// prod_i x_i y_i.
  LaurentPoly pair_product() const;
};

/// d_{k,p} e_{k,q+1} a_{k,p} b_{k,q} == (prod x y)^2 for all p, q, and the
/// matching identity between the two denominator products.
CheckResult hl_relation_check(int k);

/// h_m of the given polynomials (0 for m < 0).
LaurentPoly complete_homogeneous(std::span<const LaurentPoly> vars, int m);

// ---------------------------------------------------------------- phi

/// [phi_{2k}(p)]_n. p must have nonnegative pair exponents; unit symbols are
/// replaced by `units` (one value per z_j in table order).
std::complex<double> phi_eval(const LaurentPoly& p, const VerblunskySeq& alpha, long n,
                              std::span<const std::complex<double>> units = {});

// ---------------------------------------------------------------- trace

/// Table with symbols a_m, c_m (c_m the conjugate of a_m) for m = -1..n_sym-1.
/// Index -1 is written "m1".
VarTablePtr alpha_table(int n_sym);
std::string alpha_name(int m, bool conj);

/// Upper bound on k*l accepted by the symbolic trace.
inline constexpr int kTraceGuard = 24;

/// Degree-2k part of Tr(U~^l) for the n_sym x n_sym reduced GGT matrix,
/// with alpha_m and conj(alpha_m) as independent symbols (alpha_{-1} kept symbolic).
LaurentPoly g2k_trace_symbolic(int k, int l, int n_sym);

struct Lemma5Report {
  int k = 0;
  int l = 0;
  int n_sym = 0;
  int window_lo = 0;
  int window_hi = 0;
  std::size_t interior_monomials = 0;
  int max_multiplicity = 0;  // most (n, tuple) pairs landing on one monomial
  bool pass = false;
  std::vector<std::string> mismatches;
};

/// Compares the interior coefficients of the symbolic trace with
/// (-1)^k (l/k) sum_n sum_{D_{2k,l}} prod alpha_{n+i_p} conj(alpha_{n+j_p}).
/// Uses d = max(l, 1), n_sym = l + 6d and the window [2d, n_sym - 2d].
Lemma5Report lemma5_check(int k, int l);

// ---------------------------------------------------------------- G'_{2k}

/// num / den with den free of pair variables.
struct ScaledPoly {
  LaurentPoly num;
  LaurentPoly den;
};

/// Equality of num1/den1 and num2/den2 in the quotient ring.
bool same_scaled(const ScaledPoly& a, const ScaledPoly& b, int k);

/// Table x1,y1,...,xk,yk,z1..zK used for G'_{2k} with K unit symbols.
VarTablePtr g2k_table(int k, int K);

/// sum_D prod x_p^{i_p} y_p^{j_p} (negative = false) or prod y_{p-1}^{i_p} x_p^{j_p}.
LaurentPoly d_sum(const VarTablePtr& table, int k, int l, bool negative);

/// Hall-Littlewood double sum sum_{p,q} H(a_p b_q) / (prod(1 - a_s/a_p) prod(b_q/b_t - 1)),
/// exactly, through nested divided differences.
LaurentPoly hl_sum_route_a(int k, const ExactTrigPoly& H);
/// The same double sum through complete homogeneous sums; equal to route A
/// only in the quotient ring (negative powers use the e/d basis).
LaurentPoly hl_sum_route_b(int k, const ExactTrigPoly& H);

/// G'_{2k} = ((-1)^{k+1} HL / k - Z_H / k) / Z_H, normal form. Throws
/// RouteMismatch if the two routes disagree.
ScaledPoly build_G2k_hl(int k, const ExactTrigPoly& H);
/// ((-1)^{k+1}/k) [sum_l h_l D-sum(l) + h_{-l} D-sum(-l)] / Z_H, normal form.
ScaledPoly build_G2k_trace(int k, const ExactTrigPoly& H);

CheckResult theorem3_check(int k, const ExactTrigPoly& H);
CheckResult route_check(int k, const ExactTrigPoly& H);

struct ConstantSum {
  GaussRational a_part;  // sum_p 1/prod(1 - a_s/a_p)
  GaussRational b_part;  // sum_q 1/prod(b_q/b_t - 1)
  GaussRational value;   // product of both
};
ConstantSum constant_sum_check(int k);

/// normal_form(H(x1 y1^2)) == normal_form(2^{-d} prod_j (y1 - z_j)^{m_j} (x1 - 1/z_j)^{m_j}).
CheckResult gz_check(const CriticalPoints& points);

// ---------------------------------------------------------------- corollary

/// HL double sum times (prod x_i y_i)^s, s the smallest power >= 2k that
/// clears every negative pair exponent.
LaurentPoly corollary_poly(int k, const ExactTrigPoly& H);

/// Numeric form of the corollary summand; one instance serves many sequences.
class CorollaryEvaluator {
 public:
  explicit CorollaryEvaluator(const ExactTrigPoly& H);

  int degree() const { return d_; }
  /// Value at one site n: sum_k phi_{2k}(c_k poly_k)_n - log(1-|a_n|^2) - sum_k |a_n|^{2k}/k.
  double site(const VerblunskySeq& alpha, long n) const;
  /// Partial sum over n in [0, N).
  double operator()(const VerblunskySeq& alpha, std::size_t N) const;

 private:
  struct Term {
    std::vector<int> beta;
    std::vector<int> gamma;
    std::complex<double> coef;
  };
  int d_ = 0;
  std::vector<std::vector<Term>> terms_;  // per k, prefactor folded in
};

double corollary_eval(const VerblunskySeq& alpha, std::size_t N, const ExactTrigPoly& H);

// ---------------------------------------------------------------- L_{2k}

inline constexpr int kInfiniteDegree = INT_MAX;

/// min over Taylor terms at (1/z_u, z_u, ...) of sum_p min(beta_p, d) + min(gamma_p, d).
/// kInfiniteDegree for the zero polynomial. `unit` selects z_u.
int L_degree(const LaurentPoly& p, int d, int unit = 1);

struct SearchResult {
  LaurentPoly representative;
  int achieved = 0;
  int input = 0;
  bool changed = false;
};

/// Best representative of the quotient class of p, over shifts t in [0, budget]
/// of each normal-form monomial, found by an exact linear solve for the
/// largest L_{2k} target that admits a solution.
SearchResult representative_search(const LaurentPoly& p, int k, int d, int budget, int unit = 1);

}  // namespace gemlab
