#include "gemlab/trig.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gemlab {

namespace {

mpq_class reduce_turn(mpq_class t) {
  // bring theta/pi into [0, 2)
  mpq_class two(2);
  while (t < 0) t += two;
  while (t >= two) t -= two;
  return t;
}

bool same_angle(const CriticalPoint& a, const CriticalPoint& b) {
  if (a.theta_over_pi && b.theta_over_pi) return *a.theta_over_pi == *b.theta_over_pi;
  return std::abs(a.theta - b.theta) < 1e-12;
}

// e^{i theta} for theta/pi in {0, 1/2, 1, 3/2}
std::optional<GaussRational> gaussian_unit(const CriticalPoint& p) {
  if (!p.theta_over_pi) return std::nullopt;
  const mpq_class& t = *p.theta_over_pi;
  if (t == 0) return GaussRational(1);
  if (t == mpq_class(1, 2)) return GaussRational(0, 1);
  if (t == 1) return GaussRational(-1);
  if (t == mpq_class(3, 2)) return GaussRational(0, -1);
  return std::nullopt;
}

}  // namespace

CriticalPoints::CriticalPoints(std::vector<CriticalPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("at least one critical point is required");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& p = points_[i];
    if (p.multiplicity < 1) throw std::invalid_argument("multiplicities must be positive");
    if (p.theta_over_pi) {
      p.theta_over_pi = reduce_turn(*p.theta_over_pi);
      p.theta = p.theta_over_pi->get_d() * std::numbers::pi;
    } else {
      p.theta = std::fmod(p.theta, 2 * std::numbers::pi);
      if (p.theta < 0) p.theta += 2 * std::numbers::pi;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (same_angle(points_[i], points_[j])) throw std::invalid_argument("critical angles must be distinct");
    }
    degree_ += p.multiplicity;
  }
}

CriticalPoints CriticalPoints::single(long num, long den, int m) {
  CriticalPoint p;
  p.theta_over_pi = mpq_class(num, den);
  p.theta_over_pi->canonicalize();
  p.multiplicity = m;
  return CriticalPoints({p});
}

CriticalPoints CriticalPoints::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("critical points must be a JSON array");
  std::vector<CriticalPoint> pts;
  for (const auto& item : j) {
    CriticalPoint p;
    const auto& t = item.at("thetaOverPi");
    if (t.is_string()) {
      mpq_class q;
      if (q.set_str(t.get<std::string>(), 10) != 0 || q.get_den() == 0) {
        throw std::invalid_argument("bad thetaOverPi: " + t.get<std::string>());
      }
      q.canonicalize();
      p.theta_over_pi = q;
    } else if (t.is_number_integer()) {
      p.theta_over_pi = mpq_class(t.get<long>());
    } else if (t.is_number()) {
      p.theta = t.get<double>() * std::numbers::pi;
    } else {
      throw std::invalid_argument("thetaOverPi must be a string fraction or a number");
    }
    p.multiplicity = item.at("m").get<int>();
    pts.push_back(std::move(p));
  }
  return CriticalPoints(std::move(pts));
}

nlohmann::json CriticalPoints::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : points_) {
    nlohmann::json item;
    if (p.theta_over_pi) {
      item["thetaOverPi"] = p.theta_over_pi->get_str();
    } else {
      item["thetaOverPi"] = p.theta / std::numbers::pi;
    }
    item["m"] = p.multiplicity;
    out.push_back(std::move(item));
  }
  return out;
}

// ---------------------------------------------------------------- exact

ExactTrigPoly::ExactTrigPoly(CriticalPoints points, AngleMode mode, VarTablePtr units, std::vector<LaurentPoly> h)
    : points_(std::move(points)), mode_(mode), units_(std::move(units)), h_(std::move(h)) {
  if (h_.size() != static_cast<std::size_t>(2 * degree() + 1)) throw std::invalid_argument("coefficient count");
}

const LaurentPoly& ExactTrigPoly::h(int l) const {
  if (l < -degree() || l > degree()) throw std::out_of_range("h_l index");
  return h_[static_cast<std::size_t>(l + degree())];
}

LaurentPoly ExactTrigPoly::at(const LaurentPoly& arg) const {
  if (!arg.is_monomial()) throw NonInvertibleBinding("H evaluated at a non-monomial argument");
  const VarTablePtr& table = arg.table();
  LaurentPoly out(table);
  const LaurentPoly inv = arg.pow(-1);
  LaurentPoly up = LaurentPoly::constant(table, 1);
  LaurentPoly down = up;
  out += h(0).rebased(table);
  for (int l = 1; l <= degree(); ++l) {
    up *= arg;
    down *= inv;
    out += h(l).rebased(table) * up;
    out += h(-l).rebased(table) * down;
  }
  return out;
}

ExactTrigPoly build_H_exact(const CriticalPoints& points, AngleMode mode) {
  const int K = static_cast<int>(points.size());
  const int d = points.degree();
  VarTablePtr units = VarTable::make(0, K);
  VarTablePtr work = VarTable::make(0, K, {"w"});

  // (1/2^d) prod_j (w - z_j)^{m_j} (1/w - 1/z_j)^{m_j}
  LaurentPoly w = LaurentPoly::variable(work, "w");
  LaurentPoly w_inv = LaurentPoly::variable(work, "w", -1);
  LaurentPoly H = LaurentPoly::constant(work, GaussRational::fraction(1, 1L << d));
  for (int j = 0; j < K; ++j) {
    const auto& cp = points.points()[static_cast<std::size_t>(j)];
    LaurentPoly z(work);
    LaurentPoly z_inv(work);
    if (mode == AngleMode::kSymbolic) {
      z = LaurentPoly::variable(work, "z" + std::to_string(j + 1));
      z_inv = LaurentPoly::variable(work, "z" + std::to_string(j + 1), -1);
    } else {
      auto u = gaussian_unit(cp);
      if (!u) throw std::invalid_argument("fixed-angle exact mode needs theta/pi in {0, 1/2, 1, 3/2}");
      z = LaurentPoly::constant(work, *u);
      z_inv = LaurentPoly::constant(work, u->conj());
    }
    const LaurentPoly factor = (w - z) * (w_inv - z_inv);
    H *= factor.pow(cp.multiplicity);
  }

  std::vector<LaurentPoly> h(static_cast<std::size_t>(2 * d + 1), LaurentPoly(units));
  const std::size_t w_slot = work->index_of("w");
  for (const auto& [e, c] : H.terms()) {
    const int l = e[w_slot];
    if (l < -d || l > d) throw std::logic_error("H degree out of range");
    Exponents ez(e.begin(), e.begin() + K);
    h[static_cast<std::size_t>(l + d)].add_term(ez, c);
  }
  return ExactTrigPoly(points, mode, units, std::move(h));
}

// ---------------------------------------------------------------- numeric

NumericTrigPoly::NumericTrigPoly(CriticalPoints points, std::vector<std::complex<double>> h)
    : points_(std::move(points)), h_(std::move(h)) {
  if (h_.size() != static_cast<std::size_t>(2 * degree() + 1)) throw std::invalid_argument("coefficient count");
}

std::complex<double> NumericTrigPoly::operator()(double theta) const {
  std::complex<double> sum = 0;
  for (int l = -degree(); l <= degree(); ++l) sum += h(l) * std::polar(1.0, l * theta);
  return sum;
}

std::vector<std::complex<double>> unit_values(const CriticalPoints& points) {
  std::vector<std::complex<double>> out;
  for (const auto& p : points.points()) out.push_back(std::polar(1.0, p.theta));
  return out;
}

NumericTrigPoly build_H_numeric(const CriticalPoints& points) {
  const int d = points.degree();
  // coefficients of w^l for l in [-d, d], grown one linear factor at a time
  std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * d + 1), 0.0);
  c[static_cast<std::size_t>(d)] = std::ldexp(1.0, -d);
  auto times_w_minus = [&](std::complex<double> r) {  // (w - r)
    std::vector<std::complex<double>> n(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      n[i + 1] += c[i];
      n[i] -= r * c[i];
    }
    c = std::move(n);
  };
  auto times_winv_minus = [&](std::complex<double> r) {  // (1/w - r)
    std::vector<std::complex<double>> n(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      n[i - 1] += c[i];
      n[i] -= r * c[i];
    }
    c = std::move(n);
  };
  for (const auto& p : points.points()) {
    const std::complex<double> z = std::polar(1.0, p.theta);
    for (int i = 0; i < p.multiplicity; ++i) {
      times_w_minus(z);
      times_winv_minus(std::conj(z));
    }
  }
  return NumericTrigPoly(points, std::move(c));
}

NumericTrigPoly specialize(const ExactTrigPoly& H) {
  const auto z = unit_values(H.points());
  std::vector<std::complex<double>> h;
  for (int l = -H.degree(); l <= H.degree(); ++l) h.push_back(evaluate(H.h(l), z));
  return NumericTrigPoly(H.points(), std::move(h));
}

std::vector<GaussRational> build_V(const ExactTrigPoly& H) {
  const LaurentPoly& zh = H.z_h();
  if (!zh.is_constant()) throw std::domain_error("build_V: Z_H is not a scalar in this mode");
  const GaussRational z = zh.constant_term();
  if (z.is_zero()) throw std::domain_error("build_V: Z_H vanishes");
  const int d = H.degree();
  std::vector<GaussRational> v(static_cast<std::size_t>(2 * d + 1));
  for (int l = -d; l <= d; ++l) {
    if (l == 0) continue;
    const LaurentPoly& hl = H.h(l);
    if (!hl.is_constant()) throw std::domain_error("build_V: h_l is not a scalar in this mode");
    v[static_cast<std::size_t>(l + d)] = -hl.constant_term() / (z * GaussRational(std::abs(l)));
  }
  return v;
}

std::vector<std::complex<double>> build_V(const NumericTrigPoly& H) {
  const double z = H.z_h();
  if (z == 0.0) throw std::domain_error("build_V: Z_H vanishes");
  const int d = H.degree();
  std::vector<std::complex<double>> v(static_cast<std::size_t>(2 * d + 1), 0.0);
  for (int l = -d; l <= d; ++l) {
    if (l != 0) v[static_cast<std::size_t>(l + d)] = -H.h(l) / (z * std::abs(l));
  }
  return v;
}

double z_h_quadrature(const NumericTrigPoly& H, int grid) {
  double sum = 0.0;
  for (int i = 0; i < grid; ++i) sum += H(2 * std::numbers::pi * i / grid).real();
  return sum / grid;
}

}  // namespace gemlab
