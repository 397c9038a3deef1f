#pragma once

// Numeric OPUC machinery: Verblunsky sequences, truncated GGT matrices, the
// trace functional Tr V(U_N) and the Bernstein-Szego weight quadrature.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gemlab/trig.hpp"

namespace gemlab {

using cplx = std::complex<double>;

class OutsideDisk : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// alpha_0, alpha_1, ... with alpha_{-1} = -1 and alpha_n = 0 for n < -1.
/// Backed either by a finite buffer (zero afterwards) or by a generator.
class VerblunskySeq {
 public:
  using Generator = std::function<cplx(std::size_t)>;

  VerblunskySeq() = default;
  explicit VerblunskySeq(std::vector<cplx> values);
  explicit VerblunskySeq(Generator gen);

  cplx operator()(long n) const;
  /// Length of the finite buffer; nullopt for generator-backed sequences.
  std::optional<std::size_t> support() const;
  /// Throws OutsideDisk unless |alpha_n| < 1 for all 0 <= n < count.
  void check_disk(std::size_t count) const;

 private:
  std::vector<cplx> values_;
  Generator gen_;
};

using GGTMatrix = Eigen::MatrixXcd;

/// N x N top-left corner of the GGT matrix.
GGTMatrix ggt_matrix(const VerblunskySeq& alpha, std::size_t N);

/// Tr(U^l) for l = 1..max_power (index 0 unused).
std::vector<cplx> power_traces(const GGTMatrix& U, int max_power);

/// -(2/Z_H) Re sum_{l=1}^{d} (h_l / l) Tr(U^l); negative powers are read as
/// powers of the adjoint. Needs d < N.
double trace_V(const GGTMatrix& U, const NumericTrigPoly& H);

/// trace_V(U_N, H) - sum_{n<N} log(1 - |alpha_n|^2).
double sum_rule_functional(const VerblunskySeq& alpha, std::size_t N, const NumericTrigPoly& H);

/// sum_{n<N} log(1 - |alpha_n|^2).
double log_sum(const VerblunskySeq& alpha, std::size_t N);

/// Coefficients of phi*_n (reversed Szego polynomial), lowest power first.
std::vector<cplx> szego_reversed(const VerblunskySeq& alpha, std::size_t n);

struct QuadratureResult {
  double value = 0.0;
  std::size_t grid = 0;     // final grid size
  double last_change = 0.0;  // |I(grid) - I(grid/2)|
};

/// (1/2pi) integral of H(e^{i theta}) log w(theta) for the Bernstein-Szego
/// weight of a finitely supported alpha, trapezoid rule with grid doubling
/// until successive values differ by less than `tol`.
QuadratureResult bs_weight_quadrature(const VerblunskySeq& alpha, const NumericTrigPoly& H,
                                      std::size_t grid = 1024, double tol = 1e-10);

/// Same with H == 1 (the classical Szego integral).
QuadratureResult bs_weight_quadrature(const VerblunskySeq& alpha, std::size_t grid = 1024,
                                      double tol = 1e-10);

}  // namespace gemlab
