#include "gemlab/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace gemlab {

// ---------------------------------------------------------------- coefficients

GaussRational::GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussRational GaussRational::fraction(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return GaussRational(q);
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  mpq_class n = re_ * re_ + im_ * im_;
  return {re_ / n, -im_ / n};
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0) throw std::domain_error("division by zero");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

namespace {

std::string rational_text(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  std::string text(s);
  if (!text.empty() && text.front() == '+') text.erase(0, 1);
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + std::string(s));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
  q.canonicalize();
  return q;
}

}  // namespace

std::string GaussRational::to_string() const {
  std::string out = rational_text(re_);
  out += sgn(im_) < 0 ? "-" : "+";
  out += rational_text(abs(im_));
  out += "*i";
  return out;
}

GaussRational GaussRational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "*i") {
    std::string_view body = s.substr(0, s.size() - 2);
    // the sign separating the parts is the last +/- that is not leading
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
      if (body[i] == '+' || body[i] == '-') {
        cut = i;
        break;
      }
    }
    if (cut == std::string_view::npos) return {0, parse_rational(body)};
    mpq_class im = parse_rational(body.substr(cut + 1));
    if (body[cut] == '-') im = -im;
    return {parse_rational(body.substr(0, cut)), im};
  }
  return {parse_rational(s), 0};
}

// ---------------------------------------------------------------- variables

VarTable::VarTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (vars_[i].name == vars_[j].name) {
        throw std::invalid_argument("duplicate variable name: " + vars_[i].name);
      }
    }
    const int partner = vars_[i].partner;
    if (partner >= static_cast<int>(vars_.size())) throw std::invalid_argument("bad partner index");
    if (vars_[i].role == VarRole::kPairX || vars_[i].role == VarRole::kPairY) {
      pair_slots_.push_back(i);
    }
  }
  if (pair_slots_.size() % 2 != 0) throw std::invalid_argument("odd number of pair variables");
  pair_count_ = static_cast<int>(pair_slots_.size() / 2);
}

VarTablePtr VarTable::make(int pairs, int units, const std::vector<std::string>& plain) {
  std::vector<Variable> vars;
  for (int p = 1; p <= pairs; ++p) {
    const int xi = static_cast<int>(vars.size());
    vars.push_back({"x" + std::to_string(p), VarRole::kPairX, xi + 1});
    vars.push_back({"y" + std::to_string(p), VarRole::kPairY, xi});
  }
  for (int j = 1; j <= units; ++j) vars.push_back({"z" + std::to_string(j), VarRole::kUnit, -1});
  for (const auto& name : plain) vars.push_back({name, VarRole::kPlain, -1});
  return std::make_shared<const VarTable>(std::move(vars));
}

VarTablePtr VarTable::univariate(const std::string& name) {
  return std::make_shared<const VarTable>(std::vector<Variable>{{name, VarRole::kPlain, -1}});
}

std::size_t VarTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw std::out_of_range("unknown variable: " + std::string(name));
}

bool VarTable::contains(std::string_view name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

std::size_t VarTable::x_slot(int p) const { return index_of("x" + std::to_string(p)); }
std::size_t VarTable::y_slot(int p) const { return index_of("y" + std::to_string(p)); }
std::size_t VarTable::z_slot(int j) const { return index_of("z" + std::to_string(j)); }

bool VarTable::same_as(const VarTable& other) const {
  if (this == &other) return true;
  if (vars_.size() != other.vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& a = vars_[i];
    const auto& b = other.vars_[i];
    if (a.name != b.name || a.role != b.role || a.partner != b.partner) return false;
  }
  return true;
}

// ---------------------------------------------------------------- polynomials

LaurentPoly::LaurentPoly(VarTablePtr table) : table_(std::move(table)) {
  if (!table_) throw std::invalid_argument("null variable table");
}

LaurentPoly LaurentPoly::constant(VarTablePtr table, const GaussRational& c) {
  LaurentPoly p(std::move(table));
  p.add_term(Exponents(p.table_->size(), 0), c);
  return p;
}

LaurentPoly LaurentPoly::variable(VarTablePtr table, std::string_view name, int power) {
  Exponents e(table->size(), 0);
  e[table->index_of(name)] = power;
  return monomial(std::move(table), std::move(e));
}

LaurentPoly LaurentPoly::monomial(VarTablePtr table, Exponents exps, const GaussRational& c) {
  LaurentPoly p(std::move(table));
  if (exps.size() != p.table_->size()) throw std::invalid_argument("exponent arity mismatch");
  p.add_term(exps, c);
  return p;
}

bool LaurentPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

GaussRational LaurentPoly::constant_term() const { return coefficient(Exponents(table_->size(), 0)); }

GaussRational LaurentPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussRational() : it->second;
}

void LaurentPoly::add_term(const Exponents& e, const GaussRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void LaurentPoly::check_table(const LaurentPoly& o) const {
  if (!table_->same_as(*o.table_)) throw TableMismatch("polynomials over different variable tables");
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_table(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_table(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_table(b);
  LaurentPoly out(a.table_);
  const std::size_t n = a.table_->size();
  Exponents e(n);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = out.terms_.try_emplace(e, ca);
      if (inserted) {
        it->second *= cb;
      } else {
        it->second += ca * cb;
      }
    }
  }
  std::erase_if(out.terms_, [](const auto& t) { return t.second.is_zero(); });
  return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const GaussRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out(*this);
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_table(b);
  return a.terms_ == b.terms_;
}

LaurentPoly LaurentPoly::pow(int n) const {
  if (n < 0) {
    if (!is_monomial()) throw NonInvertibleBinding("negative power of a non-monomial");
    const auto& [e, c] = *terms_.begin();
    Exponents inv(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
    return monomial(table_, std::move(inv), c.inverse()).pow(-n);
  }
  if (is_monomial()) {
    const auto& [e, c] = *terms_.begin();
    Exponents out(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i] * n;
    GaussRational cn = 1;
    for (int i = 0; i < n; ++i) cn *= c;
    return monomial(table_, std::move(out), cn);
  }
  LaurentPoly result = constant(table_, 1);
  LaurentPoly base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

LaurentPoly LaurentPoly::conjugate() const {
  LaurentPoly out(table_);
  const std::size_t n = table_->size();
  for (const auto& [e, c] : terms_) {
    Exponents f(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const Variable& v = (*table_)[i];
      if (v.role == VarRole::kUnit) {
        f[i] += -e[i];
      } else if (v.partner >= 0) {
        f[static_cast<std::size_t>(v.partner)] += e[i];
      } else {
        f[i] += e[i];
      }
    }
    out.add_term(f, c.conj());
  }
  return out;
}

std::pair<int, int> LaurentPoly::degree_range() const {
  if (terms_.empty()) return {0, 0};
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

LaurentPoly LaurentPoly::homogeneous_part(int deg) const {
  LaurentPoly out(table_);
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    if (d == deg) out.terms_.emplace_hint(out.terms_.end(), e, c);
  }
  return out;
}

LaurentPoly LaurentPoly::truncated(int max_deg) const {
  LaurentPoly out(table_);
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    if (d <= max_deg) out.terms_.emplace_hint(out.terms_.end(), e, c);
  }
  return out;
}

LaurentPoly LaurentPoly::rebased(const VarTablePtr& target) const {
  if (table_->same_as(*target)) return *this;
  const std::size_t n = table_->size();
  std::vector<std::ptrdiff_t> map(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = (*table_)[i].name;
    if (target->contains(name)) map[i] = static_cast<std::ptrdiff_t>(target->index_of(name));
  }
  LaurentPoly out(target);
  for (const auto& [e, c] : terms_) {
    Exponents f(target->size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      if (map[i] < 0) {
        throw TableMismatch("variable " + (*table_)[i].name + " missing from target table");
      }
      f[static_cast<std::size_t>(map[i])] = e[i];
    }
    out.add_term(f, c);
  }
  return out;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += "(" + c.to_string() + ")";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      out += "*" + (*table_)[i].name + "^" + std::to_string(e[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- quotient ring

LaurentPoly normal_form(const LaurentPoly& p, int k) {
  const VarTable& t = *p.table();
  if (t.pair_count() != k) {
    throw std::invalid_argument("normal_form: table has " + std::to_string(t.pair_count()) +
                                " pairs, expected " + std::to_string(k));
  }
  const auto& slots = t.pair_slots();
  if (slots.empty()) return p;
  LaurentPoly out(p.table());
  for (const auto& [e, c] : p.terms()) {
    int lo = std::numeric_limits<int>::max();
    for (auto s : slots) lo = std::min(lo, e[s]);
    if (lo == 0) {
      out.add_term(e, c);
      continue;
    }
    Exponents f = e;
    for (auto s : slots) f[s] -= lo;
    out.add_term(f, c);
  }
  return out;
}

bool same_class(const LaurentPoly& p, const LaurentPoly& q, int k) {
  return normal_form(p - q, k).is_zero();
}

// ---------------------------------------------------------------- division

namespace {

Exponents min_exponents(const LaurentPoly& p) {
  Exponents lo(p.table()->size(), std::numeric_limits<int>::max());
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) lo[i] = std::min(lo[i], e[i]);
  }
  return lo;
}

LaurentPoly::TermMap shifted(const LaurentPoly& p, const Exponents& by, int sign) {
  LaurentPoly::TermMap out;
  for (const auto& [e, c] : p.terms()) {
    Exponents f(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) f[i] = e[i] + sign * by[i];
    out.emplace_hint(out.end(), std::move(f), c);
  }
  return out;
}

}  // namespace

LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q) {
  if (!p.table()->same_as(*q.table())) throw TableMismatch("exact_div: different tables");
  if (q.is_zero()) throw std::invalid_argument("exact_div: division by zero polynomial");
  LaurentPoly quotient(p.table());
  if (p.is_zero()) return quotient;

  // Clear denominators on both sides so the divisor is a polynomial that no
  // variable divides; then q | p in the Laurent ring iff the lex division of
  // the shifted polynomials leaves no remainder.
  const Exponents mq = min_exponents(q);
  const Exponents mp = min_exponents(p);
  const LaurentPoly::TermMap qs = shifted(q, mq, -1);
  LaurentPoly::TermMap rem = shifted(p, mp, -1);

  const auto& [lead_e, lead_c] = *qs.rbegin();
  const GaussRational lead_inv = lead_c.inverse();
  const std::size_t n = lead_e.size();
  Exponents delta(n);
  Exponents f(n);
  while (!rem.empty()) {
    const auto& [re, rc] = *rem.rbegin();
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = re[i] - lead_e[i];
      if (delta[i] < 0) throw NonDivisible("exact_div: divisor does not divide dividend");
    }
    const GaussRational factor = rc * lead_inv;
    Exponents qe(n);
    for (std::size_t i = 0; i < n; ++i) qe[i] = delta[i] + mp[i] - mq[i];
    quotient.add_term(qe, factor);
    for (const auto& [e, c] : qs) {
      for (std::size_t i = 0; i < n; ++i) f[i] = e[i] + delta[i];
      auto [it, inserted] = rem.try_emplace(f, -(factor * c));
      if (!inserted) {
        it->second -= factor * c;
        if (it->second.is_zero()) rem.erase(it);
      }
    }
  }
  return quotient;
}

// ---------------------------------------------------------------- substitution

LaurentPoly substitute(const LaurentPoly& p, const Bindings& bindings) {
  if (bindings.empty()) return p;
  const VarTablePtr& target = bindings.begin()->second.table();
  for (const auto& [name, poly] : bindings) {
    if (!poly.table()->same_as(*target)) throw TableMismatch("bindings over different tables");
  }
  const VarTable& src = *p.table();
  const std::size_t n = src.size();

  struct Slot {
    const LaurentPoly* binding = nullptr;
    std::ptrdiff_t target_index = -1;
    std::map<int, LaurentPoly> powers;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = bindings.find(src[i].name);
    if (it != bindings.end()) {
      slots[i].binding = &it->second;
    } else if (target->contains(src[i].name)) {
      slots[i].target_index = static_cast<std::ptrdiff_t>(target->index_of(src[i].name));
    }
  }

  LaurentPoly out(target);
  for (const auto& [e, c] : p.terms()) {
    Exponents free(target->size(), 0);
    LaurentPoly term = LaurentPoly::constant(target, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      Slot& s = slots[i];
      if (s.binding != nullptr) {
        auto pw = s.powers.find(e[i]);
        if (pw == s.powers.end()) {
          if (e[i] < 0 && !s.binding->is_monomial()) {
            throw NonInvertibleBinding("variable " + src[i].name +
                                       " occurs with a negative exponent and is bound to a non-monomial");
          }
          pw = s.powers.emplace(e[i], s.binding->pow(e[i])).first;
        }
        term *= pw->second;
      } else if (s.target_index >= 0) {
        free[static_cast<std::size_t>(s.target_index)] += e[i];
      } else {
        throw TableMismatch("unbound variable " + src[i].name + " missing from target table");
      }
    }
    term *= LaurentPoly::monomial(target, std::move(free));
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------- divided differences

LaurentPoly divided_diff(std::span<const LaurentPoly> points, const LaurentPoly& f, std::string_view var) {
  if (points.empty()) throw std::invalid_argument("divided_diff: no points");
  const VarTablePtr& table = points.front().table();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].table()->same_as(*table)) throw TableMismatch("divided_diff: points over different tables");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) throw DuplicatePoint("divided_diff: repeated point");
    }
  }
  if (table->contains(var)) throw std::invalid_argument("divided_diff: points must not involve the argument variable");

  std::vector<LaurentPoly> level;
  level.reserve(points.size());
  for (const auto& x : points) level.push_back(substitute(f, Bindings{{std::string(var), x}}));

  // level[i] holds D(x_i, ..., x_{i+len-1}) after pass len.
  for (std::size_t len = 2; len <= points.size(); ++len) {
    for (std::size_t i = 0; i + len <= points.size(); ++i) {
      level[i] = exact_div(level[i] - level[i + 1], points[i + len - 1] - points[i]);
    }
    level.pop_back();
  }
  return level.front();
}

LaurentPoly divided_diff(std::span<const LaurentPoly> points, const LaurentPoly& f) {
  if (f.table()->size() != 1) throw std::invalid_argument("divided_diff: f must be univariate");
  return divided_diff(points, f, (*f.table())[0].name);
}

// ---------------------------------------------------------------- evaluation

std::complex<double> to_complex(const GaussRational& c) { return {c.re().get_d(), c.im().get_d()}; }

std::complex<double> evaluate(const LaurentPoly& p, std::span<const std::complex<double>> values) {
  if (values.size() != p.table()->size()) throw std::invalid_argument("evaluate: wrong number of values");
  std::complex<double> sum = 0;
  for (const auto& [e, c] : p.terms()) {
    std::complex<double> term = to_complex(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term *= std::pow(values[i], e[i]);
    }
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------- parsing

LaurentPoly parse_poly(const VarTablePtr& table, std::string_view text) {
  LaurentPoly out(table);
  std::string s(text);
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t\n");
    if (b == std::string::npos) return std::string();
    const auto e = v.find_last_not_of(" \t\n");
    return v.substr(b, e - b + 1);
  };
  s = trim(s);
  if (s == "0" || s.empty()) return out;

  std::vector<std::string> terms;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s.compare(i, 3, " + ") == 0) {
      terms.push_back(s.substr(start, i - start));
      start = i + 3;
      i += 2;
    }
  }
  terms.push_back(s.substr(start));

  for (const auto& raw : terms) {
    std::string t = trim(raw);
    GaussRational c = 1;
    std::string rest = t;
    if (!t.empty() && t.front() == '(') {
      const auto close = t.find(')');
      if (close == std::string::npos) throw std::invalid_argument("unbalanced term: " + t);
      c = GaussRational::parse(t.substr(1, close - 1));
      rest = t.substr(close + 1);
      if (!rest.empty() && rest.front() == '*') rest.erase(0, 1);
    }
    Exponents e(table->size(), 0);
    std::stringstream ss(rest);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      factor = trim(factor);
      if (factor.empty()) continue;
      const auto caret = factor.find('^');
      const std::string name = factor.substr(0, caret);
      const int power = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
      e[table->index_of(name)] += power;
    }
    out.add_term(e, c);
  }
  return out;
}

}  // namespace gemlab
