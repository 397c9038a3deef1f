#pragma once

// Shared helpers for the test suites: a small deterministic RNG and random
// generators for exact polynomials and Verblunsky data.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gemlab/laurent.hpp"

namespace testing {

/// SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform integer in [lo, hi].
  int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::complex<double> in_disk(double radius) {
    const double r = radius * std::sqrt(unit());
    return std::polar(r, 2 * std::numbers::pi * unit());
  }
  std::complex<double> on_circle() { return std::polar(1.0, 2 * std::numbers::pi * unit()); }

 private:
  std::uint64_t s_;
};

inline gemlab::GaussRational random_coef(Rng& rng) {
  gemlab::GaussRational c(mpq_class(rng.range(-5, 5), rng.range(1, 4)), mpq_class(rng.range(-3, 3), rng.range(1, 3)));
  if (c.is_zero()) c = 1;
  return c;
}

/// Up to `terms` random terms with exponents in [lo, hi] in every slot.
inline gemlab::LaurentPoly random_poly(Rng& rng, const gemlab::VarTablePtr& t, int terms, int lo, int hi) {
  gemlab::LaurentPoly p(t);
  const int n = rng.range(1, terms);
  for (int i = 0; i < n; ++i) {
    gemlab::Exponents e(t->size());
    for (auto& x : e) x = rng.range(lo, hi);
    p.add_term(e, random_coef(rng));
  }
  return p;
}

inline std::vector<std::complex<double>> random_values(Rng& rng, std::size_t n) {
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = std::polar(rng.uniform(0.6, 1.4), 2 * std::numbers::pi * rng.unit());
  return v;
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace testing
