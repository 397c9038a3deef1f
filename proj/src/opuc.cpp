#include "gemlab/opuc.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gemlab {

VerblunskySeq::VerblunskySeq(std::vector<cplx> values) : values_(std::move(values)) {}

VerblunskySeq::VerblunskySeq(Generator gen) : gen_(std::move(gen)) {
  if (!gen_) throw std::invalid_argument("empty generator");
}

cplx VerblunskySeq::operator()(long n) const {
  if (n == -1) return -1.0;
  if (n < -1) return 0.0;
  const auto i = static_cast<std::size_t>(n);
  if (gen_) return gen_(i);
  return i < values_.size() ? values_[i] : cplx(0.0);
}

std::optional<std::size_t> VerblunskySeq::support() const {
  if (gen_) return std::nullopt;
  return values_.size();
}

void VerblunskySeq::check_disk(std::size_t count) const {
  for (std::size_t n = 0; n < count; ++n) {
    if (std::abs((*this)(static_cast<long>(n))) >= 1.0) {
      throw OutsideDisk("|alpha_" + std::to_string(n) + "| >= 1");
    }
  }
}

GGTMatrix ggt_matrix(const VerblunskySeq& alpha, std::size_t N) {
  if (N == 0) throw std::invalid_argument("ggt_matrix: N >= 1 required");
  const auto n = static_cast<Eigen::Index>(N);
  std::vector<cplx> a(N);
  std::vector<double> rho(N);
  for (std::size_t j = 0; j < N; ++j) {
    a[j] = alpha(static_cast<long>(j));
    rho[j] = std::sqrt(std::max(0.0, 1.0 - std::norm(a[j])));
  }
  GGTMatrix U = GGTMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx lead = -alpha(static_cast<long>(k) - 1);
    double prod = 1.0;  // prod_{j=k}^{l-1} rho_j
    for (Eigen::Index l = k; l < n; ++l) {
      U(k, l) = lead * std::conj(a[static_cast<std::size_t>(l)]) * prod;
      prod *= rho[static_cast<std::size_t>(l)];
    }
    if (k + 1 < n) U(k + 1, k) = rho[static_cast<std::size_t>(k)];
  }
  return U;
}

std::vector<cplx> power_traces(const GGTMatrix& U, int max_power) {
  std::vector<cplx> tr(static_cast<std::size_t>(max_power + 1), 0.0);
  if (max_power < 1) return tr;
  tr[1] = U.trace();
  GGTMatrix P = U;  // U^{l-1}
  for (int l = 2; l <= max_power; ++l) {
    // Tr(P U) without forming the product
    tr[static_cast<std::size_t>(l)] = P.cwiseProduct(U.transpose()).sum();
    if (l < max_power) P = P * U;
  }
  return tr;
}

double trace_V(const GGTMatrix& U, const NumericTrigPoly& H) {
  const int d = H.degree();
  if (d >= U.rows()) throw std::invalid_argument("trace_V: degree must be smaller than N");
  const auto tr = power_traces(U, d);
  cplx sum = 0;
  for (int l = 1; l <= d; ++l) sum += H.h(l) / static_cast<double>(l) * tr[static_cast<std::size_t>(l)];
  return -2.0 / H.z_h() * sum.real();
}

double log_sum(const VerblunskySeq& alpha, std::size_t N) {
  double s = 0.0;
  for (std::size_t n = 0; n < N; ++n) s += std::log1p(-std::norm(alpha(static_cast<long>(n))));
  return s;
}

double sum_rule_functional(const VerblunskySeq& alpha, std::size_t N, const NumericTrigPoly& H) {
  alpha.check_disk(N);
  return trace_V(ggt_matrix(alpha, N), H) - log_sum(alpha, N);
}

std::vector<cplx> szego_reversed(const VerblunskySeq& alpha, std::size_t n) {
  // phi_{k+1}(z)  = z phi_k(z) - conj(a_k) phi*_k(z)
  // phi*_{k+1}(z) = phi*_k(z) - a_k z phi_k(z)
  std::vector<cplx> phi{1.0};
  std::vector<cplx> rev{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = alpha(static_cast<long>(k));
    std::vector<cplx> nphi(k + 2, 0.0);
    std::vector<cplx> nrev(k + 2, 0.0);
    for (std::size_t i = 0; i <= k; ++i) {
      nphi[i + 1] += phi[i];
      nphi[i] -= std::conj(a) * rev[i];
      nrev[i] += rev[i];
      nrev[i + 1] -= a * phi[i];
    }
    phi = std::move(nphi);
    rev = std::move(nrev);
  }
  return rev;
}

namespace {

double trapezoid(const std::vector<cplx>& rev, double log_norm, const NumericTrigPoly* H, std::size_t grid) {
  double sum = 0.0;
  for (std::size_t g = 0; g < grid; ++g) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid);
    const cplx z = std::polar(1.0, theta);
    cplx v = 0.0;
    for (std::size_t i = rev.size(); i-- > 0;) v = v * z + rev[i];
    const double log_w = log_norm - std::log(std::norm(v));
    const double weight = H != nullptr ? (*H)(theta).real() : 1.0;
    sum += weight * log_w;
  }
  return sum / static_cast<double>(grid);
}

QuadratureResult quadrature(const VerblunskySeq& alpha, const NumericTrigPoly* H, std::size_t grid, double tol) {
  const auto support = alpha.support();
  if (!support) throw std::invalid_argument("bs_weight_quadrature needs a finitely supported sequence");
  if (grid < 1024) throw std::invalid_argument("bs_weight_quadrature: grid must be at least 1024");
  alpha.check_disk(*support);
  const auto rev = szego_reversed(alpha, *support);
  const double log_norm = log_sum(alpha, *support);
  constexpr std::size_t kMaxGrid = std::size_t{1} << 22;

  QuadratureResult r;
  r.grid = grid;
  r.value = trapezoid(rev, log_norm, H, grid);
  r.last_change = std::numeric_limits<double>::infinity();
  while (r.grid < kMaxGrid) {
    const double next = trapezoid(rev, log_norm, H, r.grid * 2);
    r.last_change = std::abs(next - r.value);
    r.value = next;
    r.grid *= 2;
    if (r.last_change < tol) break;
  }
  return r;
}

}  // namespace

QuadratureResult bs_weight_quadrature(const VerblunskySeq& alpha, const NumericTrigPoly& H, std::size_t grid,
                                      double tol) {
  return quadrature(alpha, &H, grid, tol);
}

QuadratureResult bs_weight_quadrature(const VerblunskySeq& alpha, std::size_t grid, double tol) {
  return quadrature(alpha, nullptr, grid, tol);
}

}  // namespace gemlab
