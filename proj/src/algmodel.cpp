#include "gemlab/algmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace gemlab {

namespace {

GaussRational sign_over(int sign, long den) { return GaussRational::fraction(sign, den); }

int alt_sign(int k) { return k % 2 == 0 ? 1 : -1; }  // (-1)^k

LaurentPoly monomial_of(const VarTablePtr& t, const Exponents& e) { return LaurentPoly::monomial(t, e); }

bool pair_nonnegative(const LaurentPoly& p) {
  const auto& slots = p.table()->pair_slots();
  for (const auto& [e, c] : p.terms()) {
    for (auto s : slots) {
      if (e[s] < 0) return false;
    }
  }
  return true;
}

mpz_class binomial(int n, int r) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- enumeration

std::string IndexTuple::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t p = 0; p < i.size(); ++p) {
    if (p > 0) os << ',';
    os << i[p] << ',' << j[p];
  }
  os << ')';
  return os.str();
}

std::vector<std::vector<int>> compositions(int k, int l, bool positive) {
  std::vector<std::vector<int>> out;
  if (k < 1) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  const int lo = positive ? 1 : 0;
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      if (left >= lo) {
        cur[static_cast<std::size_t>(pos)] = left;
        out.push_back(cur);
      }
      return;
    }
    for (int v = lo; v <= left - lo * (k - 1 - pos); ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (l >= lo * k) rec(0, l);
  return out;
}

std::vector<IndexTuple> enum_D(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("enum_D: k >= 1 and l >= 1 required");
  std::vector<IndexTuple> out;
  const auto E = compositions(k, l, false);
  const auto Et = compositions(k, l, true);
  for (const auto& v : E) {
    for (const auto& vt : Et) {
      IndexTuple t;
      t.i.resize(static_cast<std::size_t>(k));
      t.j.resize(static_cast<std::size_t>(k));
      int acc = 0;
      for (std::size_t p = 0; p < static_cast<std::size_t>(k); ++p) {
        t.i[p] = acc;
        t.j[p] = acc + v[p];
        acc += v[p] - vt[p];
      }
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexTuple> enum_D_direct(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("enum_D_direct: k >= 1 and l >= 1 required");
  std::vector<IndexTuple> out;
  IndexTuple cur;
  cur.i.assign(static_cast<std::size_t>(k), 0);
  cur.j.assign(static_cast<std::size_t>(k), 0);
  const int lo = -l;
  const int hi = 2 * l;
  // position p chooses i_p (i_1 = 0) and j_p; j_{p-1} > i_p links neighbours
  std::function<void(int, int)> rec = [&](int p, int weight) {
    if (p == k) {
      if (weight == l && cur.j[static_cast<std::size_t>(k - 1)] > cur.i[0]) out.push_back(cur);
      return;
    }
    const auto sp = static_cast<std::size_t>(p);
    const int i_hi = p == 0 ? 0 : cur.j[sp - 1] - 1;
    const int i_lo = p == 0 ? 0 : lo;
    for (int i = i_lo; i <= i_hi; ++i) {
      cur.i[sp] = i;
      for (int j = i; j <= hi && weight + (j - i) <= l; ++j) {
        cur.j[sp] = j;
        rec(p + 1, weight + (j - i));
      }
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

long expected_D_size(int k, int l) {
  if (l < k) return 0;
  return binomial(l + k - 1, k - 1).get_si() * binomial(l - 1, k - 1).get_si();
}

// ---------------------------------------------------------------- basis

HLBasis::HLBasis(const VarTablePtr& tab, int k_) : k(k_), table(tab) {
  if (tab->pair_count() != k) throw std::invalid_argument("HLBasis: table pair count differs from k");
  const std::size_t n = tab->size();
  auto x = [&](int s) { return tab->x_slot(s); };
  auto y = [&](int s) { return tab->y_slot(s == 0 ? k : s); };
  const LaurentPoly zero(tab);
  a.assign(static_cast<std::size_t>(k + 1), zero);
  b = c = d = a;
  e.assign(static_cast<std::size_t>(k + 2), zero);
  for (int p = 1; p <= k; ++p) {
    Exponents ea(n, 0), eb(n, 0), ec(n, 0), ed(n, 0);
    for (int s = p; s <= k; ++s) ++ea[y(s)];
    for (int s = p + 1; s <= k; ++s) ++ea[x(s)];
    for (int s = 1; s <= p; ++s) {
      ++eb[x(s)];
      ++eb[y(s)];
    }
    for (int s = p; s <= k; ++s) ++ec[x(s)];
    for (int s = p; s <= k - 1; ++s) ++ec[y(s)];
    for (int s = 1; s <= p; ++s) {
      ++ed[y(s - 1)];
      ++ed[x(s)];
    }
    const auto sp = static_cast<std::size_t>(p);
    a[sp] = monomial_of(tab, ea);
    b[sp] = monomial_of(tab, eb);
    c[sp] = monomial_of(tab, ec);
    d[sp] = monomial_of(tab, ed);
  }
  for (int p = 2; p <= k; ++p) e[static_cast<std::size_t>(p)] = c[static_cast<std::size_t>(p)];
  e[1] = c[1] * pair_product().pow(-1);
  e[static_cast<std::size_t>(k + 1)] = e[1];
}

LaurentPoly HLBasis::pair_product() const {
  Exponents ep(table->size(), 0);
  for (auto s : table->pair_slots()) ep[s] = 1;
  return monomial_of(table, ep);
}

CheckResult hl_relation_check(int k) {
  const VarTablePtr t = VarTable::make(k, 0);
  const HLBasis B(t, k);
  const LaurentPoly target = B.pair_product().pow(2);
  const LaurentPoly one = LaurentPoly::constant(t, 1);
  for (int p = 1; p <= k; ++p) {
    for (int q = 1; q <= k; ++q) {
      const auto sp = static_cast<std::size_t>(p);
      const auto sq = static_cast<std::size_t>(q);
      if (!(B.d[sp] * B.e[sq + 1] * B.a[sp] * B.b[sq] == target)) {
        return {false, "d*e*a*b != (prod xy)^2 at p=" + std::to_string(p) + ", q=" + std::to_string(q)};
      }
      LaurentPoly lhs = one;
      LaurentPoly rhs = one;
      for (int s = 1; s <= k; ++s) {
        const auto ss = static_cast<std::size_t>(s);
        if (s != p) lhs *= one - B.a[ss] * B.a[sp].pow(-1);
        if (s != q) lhs *= B.b[sq] * B.b[ss].pow(-1) - one;
        if (s != q) rhs *= one - B.e[ss + 1] * B.e[sq + 1].pow(-1);
        if (s != p) rhs *= B.d[sp] * B.d[ss].pow(-1) - one;
      }
      if (!(lhs == rhs)) {
        return {false, "denominator products differ at p=" + std::to_string(p) + ", q=" + std::to_string(q)};
      }
    }
  }
  return {true, ""};
}

LaurentPoly complete_homogeneous(std::span<const LaurentPoly> vars, int m) {
  if (vars.empty()) throw std::invalid_argument("complete_homogeneous: no variables");
  const VarTablePtr& t = vars.front().table();
  if (m < 0) return LaurentPoly(t);
  std::vector<LaurentPoly> h(static_cast<std::size_t>(m + 1), LaurentPoly(t));
  h[0] = LaurentPoly::constant(t, 1);
  for (const auto& x : vars) {
    for (std::size_t j = 1; j <= static_cast<std::size_t>(m); ++j) h[j] += x * h[j - 1];
  }
  return h.back();
}

// ---------------------------------------------------------------- phi

std::complex<double> phi_eval(const LaurentPoly& p, const VerblunskySeq& alpha, long n,
                              std::span<const std::complex<double>> units) {
  const VarTable& t = *p.table();
  const int k = t.pair_count();
  std::vector<std::size_t> xs, ys;
  for (int q = 1; q <= k; ++q) {
    xs.push_back(t.x_slot(q));
    ys.push_back(t.y_slot(q));
  }
  std::vector<int> is_unit(t.size(), -1);
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (t[s].role == VarRole::kUnit) {
      const int j = static_cast<int>(t.index_of(t[s].name) - t.z_slot(1));
      is_unit[s] = j;
    }
  }
  std::complex<double> sum = 0;
  for (const auto& [e, c] : p.terms()) {
    std::complex<double> term = to_complex(c);
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      const auto role = t[s].role;
      if (role == VarRole::kPairX || role == VarRole::kPairY) {
        if (e[s] < 0) throw std::invalid_argument("phi_eval: negative exponent on " + t[s].name);
      } else if (role == VarRole::kUnit) {
        const auto j = static_cast<std::size_t>(is_unit[s]);
        if (j >= units.size()) throw std::invalid_argument("phi_eval: missing value for " + t[s].name);
        term *= std::pow(units[j], e[s]);
      } else {
        throw std::invalid_argument("phi_eval: unexpected variable " + t[s].name);
      }
    }
    for (std::size_t q = 0; q < xs.size(); ++q) {
      term *= alpha(n + e[xs[q]]) * std::conj(alpha(n + e[ys[q]]));
    }
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------- trace

std::string alpha_name(int m, bool conj) {
  std::string s = conj ? "c" : "a";
  return m < 0 ? s + "m" + std::to_string(-m) : s + std::to_string(m);
}

VarTablePtr alpha_table(int n_sym) {
  std::vector<Variable> vars;
  for (int m = -1; m < n_sym; ++m) {
    const int slot = 2 * (m + 1);
    vars.push_back({alpha_name(m, false), VarRole::kPlain, slot + 1});
    vars.push_back({alpha_name(m, true), VarRole::kPlain, slot});
  }
  return std::make_shared<const VarTable>(std::move(vars));
}

namespace {

// Monomials in alpha/conj(alpha) as sorted symbol codes; code 2(m+1) is
// alpha_m and 2(m+1)+1 its conjugate, matching alpha_table slots.
using Codes = std::vector<std::int16_t>;
using IntPoly = std::map<Codes, std::int64_t>;

std::int16_t code_of(int m, bool conj) { return static_cast<std::int16_t>(2 * (m + 1) + (conj ? 1 : 0)); }

void add_product(IntPoly& out, const IntPoly& p, const IntPoly& q, std::size_t max_deg) {
  for (const auto& [a, ca] : p) {
    for (const auto& [b, cb] : q) {
      if (a.size() + b.size() > max_deg) continue;
      Codes m;
      m.reserve(a.size() + b.size());
      std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
      auto [it, inserted] = out.try_emplace(std::move(m), ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
}

// degree-2k part of Tr(U~^l) for the reduced GGT matrix of size n
IntPoly trace_codes(int k, int l, int n) {
  if (k * l > kTraceGuard) {
    throw std::length_error("symbolic trace: k*l = " + std::to_string(k * l) + " exceeds the configured bound");
  }
  const std::size_t max_deg = static_cast<std::size_t>(2 * k);
  // entry (r, c), c >= r - 1
  auto entry = [&](int r, int c) {
    IntPoly e;
    if (r <= c) {
      Codes m{code_of(r - 1, false), code_of(c, true)};
      std::sort(m.begin(), m.end());
      e.emplace(std::move(m), -1);
    } else {  // r == c + 1: rho_c^2
      e.emplace(Codes{}, 1);
      e.emplace(Codes{code_of(c, false), code_of(c, true)}, -1);
    }
    return e;
  };
  std::vector<std::vector<IntPoly>> U(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      U[static_cast<std::size_t>(r)].push_back(c >= r - 1 ? entry(r, c) : IntPoly{});
    }
  }
  IntPoly total;
  for (int i = 0; i < n; ++i) {
    std::vector<IntPoly> row(static_cast<std::size_t>(n));
    row[static_cast<std::size_t>(i)].emplace(Codes{}, 1);
    for (int step = 0; step < l; ++step) {
      std::vector<IntPoly> next(static_cast<std::size_t>(n));
      for (int r = 0; r < n; ++r) {
        const auto& v = row[static_cast<std::size_t>(r)];
        if (v.empty()) continue;
        for (int c = std::max(0, r - 1); c < n; ++c) {
          add_product(next[static_cast<std::size_t>(c)], v, U[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                      max_deg);
        }
      }
      row = std::move(next);
    }
    for (const auto& [m, c] : row[static_cast<std::size_t>(i)]) {
      if (m.size() != max_deg) continue;
      auto [it, inserted] = total.try_emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) total.erase(it);
      }
    }
  }
  return total;
}

}  // namespace

LaurentPoly g2k_trace_symbolic(int k, int l, int n_sym) {
  if (k < 1 || l < 1 || n_sym < 1) throw std::invalid_argument("g2k_trace_symbolic: positive arguments required");
  const IntPoly codes = trace_codes(k, l, n_sym);
  const VarTablePtr t = alpha_table(n_sym);
  LaurentPoly out(t);
  for (const auto& [m, c] : codes) {
    Exponents e(t->size(), 0);
    for (auto s : m) ++e[static_cast<std::size_t>(s)];
    out.add_term(e, GaussRational(static_cast<long>(c)));
  }
  return out;
}

Lemma5Report lemma5_check(int k, int l) {
  Lemma5Report rep;
  rep.k = k;
  rep.l = l;
  const int d = std::max(l, 1);
  rep.n_sym = l + 6 * d;
  rep.window_lo = 2 * d;
  rep.window_hi = rep.n_sym - 2 * d;
  const IntPoly trace = trace_codes(k, l, rep.n_sym);

  auto interior = [&](const Codes& m) {
    return std::all_of(m.begin(), m.end(), [&](std::int16_t s) {
      const int idx = s / 2 - 1;
      return idx >= rep.window_lo && idx <= rep.window_hi;
    });
  };

  std::map<Codes, long> predicted;
  if (l >= k) {
    for (const auto& tup : enum_D(k, l)) {
      const int lo = *std::min_element(tup.i.begin(), tup.i.end());
      const int hi = *std::max_element(tup.j.begin(), tup.j.end());
      for (int n = rep.window_lo - lo; n + hi <= rep.window_hi; ++n) {
        Codes m;
        for (std::size_t p = 0; p < tup.i.size(); ++p) {
          m.push_back(code_of(n + tup.i[p], false));
          m.push_back(code_of(n + tup.j[p], true));
        }
        std::sort(m.begin(), m.end());
        ++predicted[m];
      }
    }
  }

  std::set<Codes> keys;
  for (const auto& [m, c] : trace) {
    if (interior(m)) keys.insert(m);
  }
  for (const auto& [m, c] : predicted) keys.insert(m);
  rep.interior_monomials = keys.size();

  const VarTablePtr names = alpha_table(rep.n_sym);
  auto show = [&](const Codes& m) {
    std::string s;
    for (auto c : m) s += (s.empty() ? "" : "*") + (*names)[static_cast<std::size_t>(c)].name;
    return s;
  };
  for (const auto& m : keys) {
    auto it = trace.find(m);
    const std::int64_t got = it == trace.end() ? 0 : it->second;
    auto pt = predicted.find(m);
    const long count = pt == predicted.end() ? 0 : pt->second;
    rep.max_multiplicity = std::max(rep.max_multiplicity, static_cast<int>(count));
    // got == (-1)^k (l/k) count, cleared of the denominator
    if (got * k != static_cast<std::int64_t>(alt_sign(k)) * l * count) {
      if (rep.mismatches.size() < 10) {
        rep.mismatches.push_back(show(m) + ": trace " + std::to_string(got) + ", predicted " +
                                 std::to_string(alt_sign(k) * l * count) + "/" + std::to_string(k));
      } else {
        rep.mismatches.back() = "...";
      }
    }
  }
  rep.pass = rep.mismatches.empty();
  return rep;
}

// ---------------------------------------------------------------- G'_{2k}

bool same_scaled(const ScaledPoly& a, const ScaledPoly& b, int k) {
  return normal_form(a.num * b.den - b.num * a.den, k).is_zero();
}

VarTablePtr g2k_table(int k, int K) { return VarTable::make(k, K); }

LaurentPoly d_sum(const VarTablePtr& table, int k, int l, bool negative) {
  LaurentPoly out(table);
  if (l < k) return out;
  for (const auto& tup : enum_D(k, l)) {
    Exponents e(table->size(), 0);
    for (int p = 1; p <= k; ++p) {
      const auto sp = static_cast<std::size_t>(p - 1);
      if (negative) {
        e[table->y_slot(p == 1 ? k : p - 1)] += tup.i[sp];
        e[table->x_slot(p)] += tup.j[sp];
      } else {
        e[table->x_slot(p)] += tup.i[sp];
        e[table->y_slot(p)] += tup.j[sp];
      }
    }
    out.add_term(e, 1);
  }
  return out;
}

LaurentPoly hl_sum_route_a(int k, const ExactTrigPoly& H) {
  const int K = H.unit_count();
  const VarTablePtr T = g2k_table(k, K);
  const VarTablePtr Tt = VarTable::make(k, K, {"t"});
  const VarTablePtr Tst = VarTable::make(k, K, {"s", "t"});
  const HLBasis inner_basis(Tt, k);
  const HLBasis outer_basis(T, k);

  // sum_{p,q} H(a_p b_q)/(...) = (prod b) D(b)( t^{-1} D(a)( s^{k-1} H(s t) ) )
  const LaurentPoly s = LaurentPoly::variable(Tst, "s");
  const LaurentPoly t = LaurentPoly::variable(Tst, "t");
  const LaurentPoly f = s.pow(k - 1) * t.pow(-1) * H.at(s * t);
  const std::vector<LaurentPoly> a_pts(inner_basis.a.begin() + 1, inner_basis.a.end());
  const std::vector<LaurentPoly> b_pts(outer_basis.b.begin() + 1, outer_basis.b.end());
  const LaurentPoly inner = divided_diff(a_pts, f, "s");
  const LaurentPoly outer = divided_diff(b_pts, inner, "t");
  LaurentPoly prod_b = LaurentPoly::constant(T, 1);
  for (const auto& b : b_pts) prod_b *= b;
  return outer * prod_b;
}

LaurentPoly hl_sum_route_b(int k, const ExactTrigPoly& H) {
  const VarTablePtr T = g2k_table(k, H.unit_count());
  const HLBasis B(T, k);
  const std::vector<LaurentPoly> a(B.a.begin() + 1, B.a.end());
  const std::vector<LaurentPoly> b(B.b.begin() + 1, B.b.end());
  const std::vector<LaurentPoly> d(B.d.begin() + 1, B.d.end());
  const std::vector<LaurentPoly> e(B.e.begin() + 1, B.e.begin() + 1 + k);
  LaurentPoly prod_b = LaurentPoly::constant(T, 1);
  LaurentPoly prod_d = prod_b;
  for (int p = 0; p < k; ++p) {
    prod_b *= b[static_cast<std::size_t>(p)];
    prod_d *= d[static_cast<std::size_t>(p)];
  }
  LaurentPoly out = H.h(0).rebased(T) * GaussRational(-alt_sign(k));
  for (int l = 1; l <= H.degree(); ++l) {
    if (l < k) continue;  // h_{l-k} vanishes
    out += H.h(l).rebased(T) * complete_homogeneous(a, l) * prod_b * complete_homogeneous(b, l - k);
    out += H.h(-l).rebased(T) * complete_homogeneous(e, l) * prod_d * complete_homogeneous(d, l - k);
  }
  return out;
}

namespace {

ScaledPoly scaled_from_hl(int k, const ExactTrigPoly& H, const LaurentPoly& hl) {
  const VarTablePtr& T = hl.table();
  const LaurentPoly zh = H.z_h().rebased(T);
  LaurentPoly num = hl * sign_over(-alt_sign(k), k) - zh * GaussRational::fraction(1, k);
  return {normal_form(num, k), zh};
}

void check_k(int k, const ExactTrigPoly& H) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (H.degree() < 1) throw std::invalid_argument("H must have degree at least 1");
}

}  // namespace

ScaledPoly build_G2k_hl(int k, const ExactTrigPoly& H) {
  check_k(k, H);
  const LaurentPoly A = hl_sum_route_a(k, H);
  const LaurentPoly B = hl_sum_route_b(k, H);
  if (!same_class(A, B, k)) {
    throw RouteMismatch("Hall-Littlewood routes disagree at k=" + std::to_string(k) + ": " +
                        normal_form(A - B, k).to_string());
  }
  return scaled_from_hl(k, H, A);
}

ScaledPoly build_G2k_trace(int k, const ExactTrigPoly& H) {
  check_k(k, H);
  const VarTablePtr T = g2k_table(k, H.unit_count());
  LaurentPoly sum(T);
  for (int l = 1; l <= H.degree(); ++l) {
    sum += H.h(l).rebased(T) * d_sum(T, k, l, false);
    sum += H.h(-l).rebased(T) * d_sum(T, k, l, true);
  }
  LaurentPoly num = sum * sign_over(-alt_sign(k), k);
  return {normal_form(num, k), H.z_h().rebased(T)};
}

CheckResult theorem3_check(int k, const ExactTrigPoly& H) {
  try {
    const ScaledPoly tr = build_G2k_trace(k, H);
    const ScaledPoly hl = build_G2k_hl(k, H);
    const LaurentPoly diff = normal_form(tr.num * hl.den - hl.num * tr.den, k);
    if (diff.is_zero()) return {true, ""};
    return {false, "difference: " + diff.to_string()};
  } catch (const RouteMismatch& e) {
    return {false, e.what()};
  } catch (const NonDivisible& e) {
    return {false, std::string("non-divisible step: ") + e.what()};
  }
}

CheckResult route_check(int k, const ExactTrigPoly& H) {
  try {
    const LaurentPoly A = hl_sum_route_a(k, H);
    const LaurentPoly B = hl_sum_route_b(k, H);
    const LaurentPoly diff = normal_form(A - B, k);
    if (diff.is_zero()) return {true, ""};
    return {false, "difference: " + diff.to_string()};
  } catch (const NonDivisible& e) {
    return {false, std::string("non-divisible step: ") + e.what()};
  }
}

ConstantSum constant_sum_check(int k) {
  if (k < 1) throw std::invalid_argument("constant_sum_check: k >= 1 required");
  std::vector<std::string> names;
  for (int p = 1; p <= k; ++p) names.push_back("a" + std::to_string(p));
  const VarTablePtr T = VarTable::make(0, 0, names);
  const VarTablePtr U = VarTable::univariate("s");
  std::vector<LaurentPoly> pts;
  LaurentPoly prod = LaurentPoly::constant(T, 1);
  for (const auto& n : names) {
    pts.push_back(LaurentPoly::variable(T, n));
    prod *= pts.back();
  }
  const GaussRational sgn(alt_sign(k - 1));
  // sum_p 1/prod(1 - a_s/a_p) = (-1)^{k-1} D(a)(s^{k-1})
  const LaurentPoly a_sum = divided_diff(pts, LaurentPoly::variable(U, "s", k - 1)) * sgn;
  // sum_q 1/prod(b_q/b_t - 1) = (prod b)(-1)^{k-1} D(b)(s^{-1})
  const LaurentPoly b_sum = prod * divided_diff(pts, LaurentPoly::variable(U, "s", -1)) * sgn;
  if (!a_sum.is_constant() || !b_sum.is_constant()) {
    throw std::logic_error("constant_sum_check: sums are not scalars");
  }
  ConstantSum out;
  out.a_part = a_sum.constant_term();
  out.b_part = b_sum.constant_term();
  out.value = out.a_part * out.b_part;
  return out;
}

CheckResult gz_check(const CriticalPoints& points) {
  const ExactTrigPoly H = build_H_exact(points, AngleMode::kSymbolic);
  const VarTablePtr T = g2k_table(1, H.unit_count());
  const LaurentPoly x = LaurentPoly::variable(T, "x1");
  const LaurentPoly y = LaurentPoly::variable(T, "y1");
  const LaurentPoly lhs = H.at(x * y.pow(2));
  LaurentPoly rhs = LaurentPoly::constant(T, GaussRational(mpq_class(1, mpz_class(1) << H.degree())));
  for (std::size_t j = 0; j < points.size(); ++j) {
    const std::string zn = "z" + std::to_string(j + 1);
    const LaurentPoly f = (y - LaurentPoly::variable(T, zn)) * (x - LaurentPoly::variable(T, zn, -1));
    rhs *= f.pow(points.points()[j].multiplicity);
  }
  const LaurentPoly diff = normal_form(lhs - rhs, 1);
  if (diff.is_zero()) return {true, ""};
  return {false, "difference: " + diff.to_string()};
}

// ---------------------------------------------------------------- corollary

LaurentPoly corollary_poly(int k, const ExactTrigPoly& H) {
  check_k(k, H);
  const LaurentPoly hl = hl_sum_route_a(k, H);
  const HLBasis B(hl.table(), k);
  int lowest = 0;
  for (const auto& [e, c] : hl.terms()) {
    for (auto s : hl.table()->pair_slots()) lowest = std::min(lowest, e[s]);
  }
  LaurentPoly out = hl * B.pair_product().pow(std::max(2 * k, -lowest));
  if (!pair_nonnegative(out)) throw std::logic_error("corollary_poly: negative exponent after clearing");
  return out;
}

CorollaryEvaluator::CorollaryEvaluator(const ExactTrigPoly& H) : d_(H.degree()) {
  const auto units = unit_values(H.points());
  const double zh = evaluate(H.z_h(), units).real();
  for (int k = 1; k <= d_; ++k) {
    const LaurentPoly poly = corollary_poly(k, H);
    const VarTable& t = *poly.table();
    const std::complex<double> pre = static_cast<double>(-alt_sign(k)) / (k * zh);
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::complex<double>> merged;
    for (const auto& [e, c] : poly.terms()) {
      std::vector<int> beta, gamma;
      for (int p = 1; p <= k; ++p) {
        beta.push_back(e[t.x_slot(p)]);
        gamma.push_back(e[t.y_slot(p)]);
      }
      std::complex<double> coef = to_complex(c) * pre;
      for (int j = 1; j <= H.unit_count(); ++j) {
        const int ez = e[t.z_slot(j)];
        if (ez != 0) coef *= std::pow(units[static_cast<std::size_t>(j - 1)], ez);
      }
      merged[{beta, gamma}] += coef;
    }
    std::vector<Term> terms;
    for (auto& [key, coef] : merged) terms.push_back({key.first, key.second, coef});
    terms_.push_back(std::move(terms));
  }
}

double CorollaryEvaluator::site(const VerblunskySeq& alpha, long n) const {
  std::complex<double> sum = 0;
  for (const auto& terms : terms_) {
    for (const auto& term : terms) {
      std::complex<double> v = term.coef;
      for (std::size_t p = 0; p < term.beta.size(); ++p) {
        v *= alpha(n + term.beta[p]) * std::conj(alpha(n + term.gamma[p]));
      }
      sum += v;
    }
  }
  const double r2 = std::norm(alpha(n));
  double power_sum = 0.0;
  double pw = 1.0;
  for (int k = 1; k <= d_; ++k) {
    pw *= r2;
    power_sum += pw / k;
  }
  return sum.real() - std::log1p(-r2) - power_sum;
}

double CorollaryEvaluator::operator()(const VerblunskySeq& alpha, std::size_t N) const {
  if (static_cast<std::size_t>(d_) >= N) throw std::invalid_argument("corollary_eval: degree must be smaller than N");
  alpha.check_disk(N + static_cast<std::size_t>(4 * d_ * d_));
  double s = 0.0;
  for (std::size_t n = 0; n < N; ++n) s += site(alpha, static_cast<long>(n));
  return s;
}

double corollary_eval(const VerblunskySeq& alpha, std::size_t N, const ExactTrigPoly& H) {
  return CorollaryEvaluator(H)(alpha, N);
}

// ---------------------------------------------------------------- L_{2k}

int L_degree(const LaurentPoly& p, int d, int unit) {
  const VarTablePtr& T = p.table();
  if (!pair_nonnegative(p)) throw std::invalid_argument("L_degree: polynomial has negative pair exponents");
  if (p.is_zero()) return kInfiniteDegree;
  const int k = T->pair_count();
  const std::string zn = "z" + std::to_string(unit);
  const LaurentPoly z = LaurentPoly::variable(T, zn);
  const LaurentPoly zi = LaurentPoly::variable(T, zn, -1);
  Bindings shift;
  for (int q = 1; q <= k; ++q) {
    const std::string xn = "x" + std::to_string(q);
    const std::string yn = "y" + std::to_string(q);
    shift.emplace(xn, LaurentPoly::variable(T, xn) + zi);
    shift.emplace(yn, LaurentPoly::variable(T, yn) + z);
  }
  const LaurentPoly taylor = substitute(p, shift);
  int best = kInfiniteDegree;
  for (const auto& [e, c] : taylor.terms()) {
    int deg = 0;
    for (auto s : T->pair_slots()) deg += std::min(e[s], d);
    best = std::min(best, deg);
  }
  return best;
}

namespace {

// Sparse rows over GaussRational with a right-hand side; incremental echelon form.
struct Row {
  std::map<int, GaussRational> cols;
  GaussRational rhs;
};

class Echelon {
 public:
  /// False if the row makes the system inconsistent.
  bool add(Row row) {
    while (!row.cols.empty()) {
      const int c = row.cols.begin()->first;
      auto piv = pivots_.find(c);
      if (piv == pivots_.end()) {
        const GaussRational inv = row.cols.begin()->second.inverse();
        for (auto& [j, v] : row.cols) v *= inv;
        row.rhs *= inv;
        pivots_.emplace(c, std::move(row));
        return true;
      }
      const GaussRational f = row.cols.begin()->second;
      for (const auto& [j, v] : piv->second.cols) {
        auto [it, inserted] = row.cols.try_emplace(j, -(f * v));
        if (!inserted) {
          it->second -= f * v;
          if (it->second.is_zero()) row.cols.erase(it);
        }
      }
      row.rhs -= f * piv->second.rhs;
    }
    return row.rhs.is_zero();
  }

  /// A solution with every free variable set to zero.
  std::vector<GaussRational> solve(std::size_t n) const {
    std::vector<GaussRational> x(n);
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      GaussRational v = it->second.rhs;
      for (const auto& [j, c] : it->second.cols) {
        if (j != it->first) v -= c * x[static_cast<std::size_t>(j)];
      }
      x[static_cast<std::size_t>(it->first)] = v;
    }
    return x;
  }

 private:
  std::map<int, Row> pivots_;
};

struct Candidate {
  Exponents base;  // normal-form monomial
  int t = 0;       // shift along (1, ..., 1) on the pair slots
};

std::optional<LaurentPoly> solve_for_target(const LaurentPoly& q, const std::vector<Candidate>& cands, int d,
                                            int target, std::size_t zslot) {
  const VarTablePtr& T = q.table();
  const auto& slots = T->pair_slots();
  const std::size_t ns = slots.size();
  std::vector<bool> is_x(ns);
  for (std::size_t i = 0; i < ns; ++i) is_x[i] = (*T)[slots[i]].role == VarRole::kPairX;

  std::map<Exponents, Row> vanish;
  Echelon ech;
  // sum_t r_{m,t} = coefficient of m
  std::map<Exponents, Row> totals;
  for (std::size_t u = 0; u < cands.size(); ++u) {
    totals[cands[u].base].cols.emplace(static_cast<int>(u), GaussRational(1));
  }
  for (auto& [base, row] : totals) {
    row.rhs = q.coefficient(base);
    if (!ech.add(row)) return std::nullopt;
  }

  std::vector<int> top(ns);
  std::vector<int> pick(ns);
  for (std::size_t u = 0; u < cands.size(); ++u) {
    const auto& cand = cands[u];
    int zshift = 0;
    for (std::size_t i = 0; i < ns; ++i) {
      top[i] = cand.base[slots[i]] + cand.t;
      zshift += is_x[i] ? -cand.base[slots[i]] : cand.base[slots[i]];
    }
    // enumerate Taylor exponents with capped degree below the target
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int capped) {
      if (i == ns) {
        Exponents key = cand.base;
        mpz_class coef = 1;
        int zexp = cand.base[zslot] + zshift;
        for (std::size_t s = 0; s < ns; ++s) {
          key[slots[s]] = pick[s];
          coef *= binomial(top[s], pick[s]);
          zexp += is_x[s] ? pick[s] : -pick[s];
        }
        key[zslot] = zexp;
        auto& row = vanish[key].cols;
        auto [it, inserted] = row.try_emplace(static_cast<int>(u), GaussRational(mpq_class(coef)));
        if (!inserted) it->second += GaussRational(mpq_class(coef));
        return;
      }
      for (int b = 0; b <= top[i]; ++b) {
        const int c = capped + std::min(b, d);
        if (c >= target) break;
        pick[i] = b;
        rec(i + 1, c);
      }
    };
    rec(0, 0);
  }
  for (auto& [key, row] : vanish) {
    if (!ech.add(std::move(row))) return std::nullopt;
  }

  const auto x = ech.solve(cands.size());
  LaurentPoly rep(T);
  for (std::size_t u = 0; u < cands.size(); ++u) {
    if (x[u].is_zero()) continue;
    Exponents e = cands[u].base;
    for (auto s : slots) e[s] += cands[u].t;
    rep.add_term(e, x[u]);
  }
  return rep;
}

}  // namespace

SearchResult representative_search(const LaurentPoly& p, int k, int d, int budget, int unit) {
  if (budget < 0) throw std::invalid_argument("representative_search: budget must be nonnegative");
  const VarTablePtr& T = p.table();
  if (T->pair_count() != k) throw std::invalid_argument("representative_search: table pair count differs from k");
  const std::size_t zslot = T->z_slot(unit);
  const LaurentPoly q = normal_form(p, k);

  SearchResult res{pair_nonnegative(p) ? p : q};
  res.input = L_degree(res.representative, d, unit);
  res.achieved = res.input;
  if (q.is_zero() || res.input == kInfiniteDegree) return res;

  std::vector<Candidate> cands;
  for (const auto& [e, c] : q.terms()) {
    for (int t = 0; t <= budget; ++t) cands.push_back({e, t});
  }
  const int ceiling = 2 * k * d;
  for (int target = res.achieved + 1; target <= ceiling; ++target) {
    auto rep = solve_for_target(q, cands, d, target, zslot);
    if (!rep) break;
    if (!same_class(*rep, q, k)) throw std::logic_error("representative_search: class changed");
    const int L = L_degree(*rep, d, unit);
    if (L < target) throw std::logic_error("representative_search: solved target not reached");
    res.representative = std::move(*rep);
    res.achieved = L;
    res.changed = true;
    target = L;
  }
  return res;
}

}  // namespace gemlab
