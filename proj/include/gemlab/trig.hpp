#pragma once

// The weight H(e^{i theta}) = prod_j (1 - cos(theta - theta_j))^{m_j}, its
// Fourier coefficients h_l, the normalisation Z_H = h_0 and the potential V.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gemlab/laurent.hpp"

namespace gemlab {

struct CriticalPoint {
  /// theta / pi as an exact fraction when known.
  std::optional<mpq_class> theta_over_pi;
  double theta = 0.0;  // radians, always filled
  int multiplicity = 1;
};

class CriticalPoints {
 public:
  CriticalPoints() = default;
  explicit CriticalPoints(std::vector<CriticalPoint> points);

  /// Single critical point theta = (num/den)*pi with multiplicity m.
  static CriticalPoints single(long num, long den, int m);
  /// Parses [{"thetaOverPi": "p/q" | number, "m": int}, ...].
  static CriticalPoints from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<CriticalPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  int degree() const { return degree_; }

 private:
  std::vector<CriticalPoint> points_;
  int degree_ = 0;
};

enum class AngleMode {
  kSymbolic,  // e^{i theta_j} enters as the unit symbol z_j
  kFixed,     // e^{i theta_j} substituted; needs theta_j in {0, pi/2, pi, 3pi/2}
};

/// H with exact coefficients h_l, l in [-d, d], each a Laurent polynomial in
/// the unit symbols z1..zK (constants in fixed-angle mode).
class ExactTrigPoly {
 public:
  ExactTrigPoly(CriticalPoints points, AngleMode mode, VarTablePtr units, std::vector<LaurentPoly> h);

  const CriticalPoints& points() const { return points_; }
  AngleMode mode() const { return mode_; }
  int degree() const { return points_.degree(); }
  int unit_count() const { return static_cast<int>(points_.size()); }
  /// Table holding z1..zK.
  const VarTablePtr& unit_table() const { return units_; }
  const LaurentPoly& h(int l) const;
  /// Z_H, equal to h_0.
  const LaurentPoly& z_h() const { return h(0); }

  /// sum_l h_l * arg^l in the table of `arg`, which must be a monomial and
  /// whose table must contain the unit symbols.
  LaurentPoly at(const LaurentPoly& arg) const;

 private:
  CriticalPoints points_;
  AngleMode mode_;
  VarTablePtr units_;
  std::vector<LaurentPoly> h_;
};

class NumericTrigPoly {
 public:
  NumericTrigPoly(CriticalPoints points, std::vector<std::complex<double>> h);

  const CriticalPoints& points() const { return points_; }
  int degree() const { return points_.degree(); }
  std::complex<double> h(int l) const { return h_[static_cast<std::size_t>(l + degree())]; }
  double z_h() const { return h(0).real(); }
  /// sum_l h_l e^{i l theta}.
  std::complex<double> operator()(double theta) const;

 private:
  CriticalPoints points_;
  std::vector<std::complex<double>> h_;
};

ExactTrigPoly build_H_exact(const CriticalPoints& points, AngleMode mode = AngleMode::kSymbolic);
NumericTrigPoly build_H_numeric(const CriticalPoints& points);

/// h_l with every z_j replaced by e^{i theta_j}.
NumericTrigPoly specialize(const ExactTrigPoly& H);

/// Values e^{i theta_j}, one per unit symbol.
std::vector<std::complex<double>> unit_values(const CriticalPoints& points);

/// v_l = -h_l / (Z_H |l|), v_0 = 0, indexed by l + d. Exact version needs a scalar Z_H.
std::vector<GaussRational> build_V(const ExactTrigPoly& H);
std::vector<std::complex<double>> build_V(const NumericTrigPoly& H);

/// Trapezoid rule for (1/2pi) * integral of H over the circle.
double z_h_quadrature(const NumericTrigPoly& H, int grid);

}  // namespace gemlab
