#include "gemlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gemlab/algmodel.hpp"

namespace gemlab {

using nlohmann::json;

namespace {

double parse_theta(const json& j) {
  if (j.contains("thetaOverPi")) {
    const json& t = j.at("thetaOverPi");
    if (t.is_string()) {
      mpq_class q;
      if (q.set_str(t.get<std::string>(), 10) != 0) throw std::invalid_argument("bad thetaOverPi");
      q.canonicalize();
      return q.get_d() * std::numbers::pi;
    }
    if (t.is_number()) return t.get<double>() * std::numbers::pi;
    throw std::invalid_argument("thetaOverPi must be a string fraction or a number");
  }
  if (j.contains("theta")) return j.at("theta").get<double>();
  return 0.0;
}

json alpha_list_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& a : v) out.push_back({a.real(), a.imag()});
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<cplx> parse_alpha_list(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("alpha list must be a JSON array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw std::invalid_argument("alpha entries must be [re, im] number pairs");
    }
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

// ---------------------------------------------------------------- families

SequenceFamily SequenceFamily::power_decay(double c, double gamma, double theta) {
  SequenceFamily f;
  f.kind = FamilyKind::kPowerDecay;
  f.c = c;
  f.gamma = gamma;
  f.theta = theta;
  f.validate();
  return f;
}

SequenceFamily SequenceFamily::constant(double c, double theta) {
  SequenceFamily f;
  f.kind = FamilyKind::kConstant;
  f.c = c;
  f.theta = theta;
  f.validate();
  return f;
}

SequenceFamily SequenceFamily::finite_support(std::vector<cplx> values) {
  SequenceFamily f;
  f.kind = FamilyKind::kFiniteSupport;
  f.values = std::move(values);
  f.validate();
  return f;
}

SequenceFamily SequenceFamily::custom(const std::string& path, const std::filesystem::path& base) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base.empty()) p = base / p;
  std::ifstream in(p);
  if (!in) throw std::invalid_argument("cannot open sequence file " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("sequence file " + p.string() + ": " + e.what());
  }
  SequenceFamily f;
  f.kind = FamilyKind::kCustom;
  f.path = path;
  f.values = parse_alpha_list(j);
  f.validate();
  return f;
}

void SequenceFamily::validate() const {
  switch (kind) {
    case FamilyKind::kPowerDecay:
      if (!std::isfinite(c) || !std::isfinite(gamma) || !std::isfinite(theta)) {
        throw std::invalid_argument("powerDecay parameters must be finite");
      }
      if (gamma < 0) throw std::invalid_argument("powerDecay needs gamma >= 0");
      if (std::abs(c) >= 1) throw std::invalid_argument("powerDecay needs |c| < 1");
      break;
    case FamilyKind::kConstant:
      if (!std::isfinite(c) || !std::isfinite(theta)) throw std::invalid_argument("constant parameters must be finite");
      if (std::abs(c) >= 1) throw std::invalid_argument("constant needs |c| < 1");
      break;
    case FamilyKind::kFiniteSupport:
    case FamilyKind::kCustom:
      for (std::size_t n = 0; n < values.size(); ++n) {
        if (!(std::abs(values[n]) < 1)) throw std::invalid_argument("|alpha_" + std::to_string(n) + "| >= 1");
      }
      break;
  }
}

VerblunskySeq SequenceFamily::sequence() const {
  validate();
  switch (kind) {
    case FamilyKind::kPowerDecay: {
      const double cc = c, g = gamma, th = theta;
      return VerblunskySeq([cc, g, th](std::size_t n) {
        const double nd = static_cast<double>(n);
        return std::polar(cc / std::pow(nd + 1.0, g), -th * nd);
      });
    }
    case FamilyKind::kConstant: {
      const double cc = c, th = theta;
      return VerblunskySeq([cc, th](std::size_t n) { return std::polar(cc, -th * static_cast<double>(n)); });
    }
    case FamilyKind::kFiniteSupport:
    case FamilyKind::kCustom:
      return VerblunskySeq(values);
  }
  throw std::logic_error("unknown family");
}

std::string SequenceFamily::name() const {
  switch (kind) {
    case FamilyKind::kPowerDecay: return "powerDecay";
    case FamilyKind::kConstant: return "constant";
    case FamilyKind::kFiniteSupport: return "finiteSupport";
    case FamilyKind::kCustom: return "custom";
  }
  return "?";
}

json SequenceFamily::to_json() const {
  json j;
  j["name"] = name();
  switch (kind) {
    case FamilyKind::kPowerDecay:
      j["c"] = c;
      j["gamma"] = gamma;
      j["theta"] = theta;
      break;
    case FamilyKind::kConstant:
      j["c"] = c;
      j["theta"] = theta;
      break;
    case FamilyKind::kCustom:
      j["path"] = path;
      j["values"] = alpha_list_json(values);
      break;
    case FamilyKind::kFiniteSupport:
      j["values"] = alpha_list_json(values);
      break;
  }
  return j;
}

SequenceFamily SequenceFamily::from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || !j.contains("name")) throw std::invalid_argument("family must be an object with a name");
  const auto name = j.at("name").get<std::string>();
  try {
    if (name == "powerDecay") return power_decay(j.at("c").get<double>(), j.at("gamma").get<double>(), parse_theta(j));
    if (name == "constant") return constant(j.at("c").get<double>(), parse_theta(j));
    if (name == "finiteSupport") return finite_support(parse_alpha_list(j.at("values")));
    if (name == "custom") {
      if (j.contains("values")) {
        SequenceFamily f;
        f.kind = FamilyKind::kCustom;
        f.path = j.value("path", std::string());
        f.values = parse_alpha_list(j.at("values"));
        f.validate();
        return f;
      }
      return custom(j.at("path").get<std::string>(), base);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("family " + name + ": " + e.what());
  }
  throw std::invalid_argument("unknown family " + name);
}

// ---------------------------------------------------------------- diagnostics

std::vector<cplx> shift_operator(const CriticalPoints& points) {
  std::vector<cplx> poly{1.0};
  for (const auto& p : points.points()) {
    const cplx root = std::polar(1.0, -p.theta);
    for (int r = 0; r < p.multiplicity; ++r) {
      std::vector<cplx> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= root * poly[i];
      }
      poly = std::move(next);
    }
  }
  return poly;
}

ConditionNorms condition_diagnostics(const VerblunskySeq& alpha, const CriticalPoints& points, std::size_t N) {
  const int d = points.degree();
  if (N < static_cast<std::size_t>(d)) throw std::invalid_argument("condition_diagnostics: N >= d required");
  const auto op = shift_operator(points);
  ConditionNorms r;
  r.N = N;
  r.power.assign(static_cast<std::size_t>(d), 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const long ln = static_cast<long>(n);
    cplx v = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) v += op[i] * alpha(ln + static_cast<long>(i));
    r.gz += std::norm(v);
    const double a2 = std::norm(alpha(ln));
    r.l2 += a2;
    r.l4 += a2 * a2;
    double pw = a2 * a2;  // |a|^{2m+2} starting at m = 1
    for (int m = 1; m <= d; ++m) {
      r.power[static_cast<std::size_t>(m - 1)] += pw;
      pw *= a2;
    }
  }
  return r;
}

json ConditionNorms::to_json() const {
  return {{"N", N}, {"gz", gz}, {"power", power}, {"l2", l2}, {"l4", l4}};
}

ConditionNorms ConditionNorms::from_json(const json& j) {
  ConditionNorms r;
  r.N = j.at("N").get<std::size_t>();
  r.gz = j.at("gz").get<double>();
  r.power = j.at("power").get<std::vector<double>>();
  r.l2 = j.at("l2").get<double>();
  r.l4 = j.at("l4").get<double>();
  return r;
}

// ---------------------------------------------------------------- classifier

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kBounded: return "bounded";
    case Verdict::kDiverging: return "diverging";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "bounded") return Verdict::kBounded;
  if (s == "diverging") return Verdict::kDiverging;
  if (s == "inconclusive") return Verdict::kInconclusive;
  throw std::invalid_argument("unknown verdict " + s);
}

Classification classify(const std::vector<std::size_t>& schedule, const std::vector<double>& values) {
  if (schedule.size() != values.size()) throw std::invalid_argument("classify: size mismatch");
  Classification c;
  const std::size_t n = schedule.size();
  if (n < 2) return c;
  const std::size_t first = std::min(n / 2, n - 2);
  const auto cnt = static_cast<double>(n - first);
  double mx = 0, my = 0;
  for (std::size_t i = first; i < n; ++i) {
    mx += static_cast<double>(schedule[i]);
    my += values[i];
  }
  mx /= cnt;
  my /= cnt;
  double sxy = 0, sxx = 0;
  double lo = values[first], hi = values[first];
  for (std::size_t i = first; i < n; ++i) {
    const double dx = static_cast<double>(schedule[i]) - mx;
    sxy += dx * (values[i] - my);
    sxx += dx * dx;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  c.slope = sxy / sxx;
  c.range = hi - lo;
  if (std::abs(c.slope) < 1e-4 && c.range < 1) {
    c.verdict = Verdict::kBounded;
  } else if (c.slope > 1e-2) {
    c.verdict = Verdict::kDiverging;
  }
  return c;
}

// ---------------------------------------------------------------- studies

json GemReport::to_json() const {
  json rs = json::array();
  for (const auto& r : rows) {
    rs.push_back({{"N", r.N},
                  {"traceRoute", r.trace_route},
                  {"corollaryRoute", r.corollary_route},
                  {"logTermSum", r.log_term_sum},
                  {"diffNorm", r.diff_norm}});
  }
  return {{"family", family.to_json()},
          {"criticalPoints", points.to_json()},
          {"schedule", schedule},
          {"rows", rs},
          {"conditions", conditions.to_json()},
          {"verdict", to_string(classification.verdict)},
          {"slope", classification.slope},
          {"range", classification.range}};
}

GemReport GemReport::from_json(const json& j) {
  GemReport r;
  r.family = SequenceFamily::from_json(j.at("family"));
  r.points = CriticalPoints::from_json(j.at("criticalPoints"));
  r.schedule = j.at("schedule").get<std::vector<std::size_t>>();
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("N").get<std::size_t>(), row.at("traceRoute").get<double>(),
                      row.at("corollaryRoute").get<double>(), row.at("logTermSum").get<double>(),
                      row.at("diffNorm").get<double>()});
  }
  r.conditions = ConditionNorms::from_json(j.at("conditions"));
  r.classification.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.classification.slope = j.at("slope").get<double>();
  r.classification.range = j.at("range").get<double>();
  return r;
}

bool operator==(const GemReport& a, const GemReport& b) {
  return a.family == b.family && a.points.to_json() == b.points.to_json() && a.schedule == b.schedule &&
         a.rows == b.rows && a.conditions == b.conditions && a.classification.verdict == b.classification.verdict &&
         a.classification.slope == b.classification.slope && a.classification.range == b.classification.range;
}

StudyConfig StudyConfig::from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw std::invalid_argument("study config must be a JSON object");
  StudyConfig c;
  if (!j.contains("family")) throw std::invalid_argument("study config needs a family");
  if (!j.contains("criticalPoints")) throw std::invalid_argument("study config needs criticalPoints");
  c.family = SequenceFamily::from_json(j.at("family"), base);
  c.points = CriticalPoints::from_json(j.at("criticalPoints"));
  try {
    if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::vector<std::size_t>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<unsigned>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("study config: ") + e.what());
  }
  return c;
}

StudyConfig StudyConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open config " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + file.string() + ": " + e.what());
  }
  return from_json(j, file.parent_path());
}

GemReport convergence_study(const SequenceFamily& family, const CriticalPoints& points,
                            const std::vector<std::size_t>& schedule, bool with_corollary) {
  const int d = points.degree();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw std::invalid_argument("schedule must be strictly increasing");
    if (schedule[i] <= static_cast<std::size_t>(d)) throw std::invalid_argument("schedule entries must exceed deg H");
    if (schedule[i] > kMaxScheduleN) throw std::invalid_argument("schedule entry above " + std::to_string(kMaxScheduleN));
  }
  const VerblunskySeq alpha = family.sequence();
  const NumericTrigPoly Hn = build_H_numeric(points);
  std::optional<CorollaryEvaluator> cor;
  if (with_corollary) cor.emplace(build_H_exact(points));

  GemReport r;
  r.family = family;
  r.points = points;
  r.schedule = schedule;
  std::vector<double> values;
  for (const std::size_t N : schedule) {
    GemRow row;
    row.N = N;
    row.trace_route = sum_rule_functional(alpha, N, Hn);
    row.corollary_route = cor ? (*cor)(alpha, N) : 0.0;
    row.log_term_sum = log_sum(alpha, N);
    row.diff_norm = condition_diagnostics(alpha, points, N).gz;
    values.push_back(row.trace_route);
    r.rows.push_back(row);
  }
  if (!schedule.empty()) r.conditions = condition_diagnostics(alpha, points, schedule.back());
  r.classification = classify(schedule, values);
  return r;
}

GemReport convergence_study(const StudyConfig& config) {
  return convergence_study(config.family, config.points, config.schedule);
}

std::vector<GemReport> run_studies(const std::vector<StudyConfig>& configs, unsigned workers) {
  std::vector<std::optional<GemReport>> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = convergence_study(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<GemReport> reports;
  for (auto& r : out) reports.push_back(std::move(*r));
  return reports;
}

std::string export_report(const GemReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return report.to_json().dump();
  std::ostringstream os;
  os << "N,traceRoute,corollaryRoute,logTermSum,diffNorm,verdict\n";
  const std::string verdict = to_string(report.classification.verdict);
  for (const auto& r : report.rows) {
    os << r.N << ',' << fmt(r.trace_route) << ',' << fmt(r.corollary_route) << ',' << fmt(r.log_term_sum) << ','
       << fmt(r.diff_norm) << ',' << verdict << '\n';
  }
  return os.str();
}

}  // namespace gemlab
