#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "gemlab/lab.hpp"
#include "support.hpp"

using namespace gemlab;
using nlohmann::json;
using testing::Rng;

namespace {

std::filesystem::path scratch_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "gemlab_test_lab";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

double range_of(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
}

}  // namespace

TEST_CASE("families produce the documented sequences") {
  const auto pd = SequenceFamily::power_decay(0.3, 0.4, 0.5).sequence();
  for (long n = 0; n < 5; ++n) {
    const cplx expect = std::polar(0.3 / std::pow(n + 1.0, 0.4), -0.5 * static_cast<double>(n));
    CHECK(std::abs(pd(n) - expect) < 1e-15);
  }
  const auto c = SequenceFamily::constant(0.5, 1.0).sequence();
  CHECK(std::abs(c(3) - std::polar(0.5, -3.0)) < 1e-15);
  const auto f = SequenceFamily::finite_support({{0.1, 0.2}}).sequence();
  CHECK(f(0) == cplx(0.1, 0.2));
  CHECK(f(1) == cplx(0.0));
  CHECK(f(-1) == cplx(-1.0));
}

TEST_CASE("families reject coefficients outside the disk") {
  CHECK_THROWS_AS(SequenceFamily::power_decay(1.0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(SequenceFamily::power_decay(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(SequenceFamily::constant(-1.2), std::invalid_argument);
  CHECK_THROWS_AS(SequenceFamily::finite_support({{0.6, 0.8}}), std::invalid_argument);
  CHECK_THROWS_AS(SequenceFamily::from_json(json::parse(R"({"name":"nope"})")), std::invalid_argument);
  CHECK_THROWS_AS(SequenceFamily::from_json(json::parse(R"({"name":"constant"})")), std::invalid_argument);
}

TEST_CASE("family JSON round trip and custom files") {
  const std::vector<SequenceFamily> fams{SequenceFamily::power_decay(0.3, 0.4, 0.1), SequenceFamily::constant(0.5, 2.0),
                                         SequenceFamily::finite_support({{0.1, -0.2}, {0.0, 0.3}})};
  for (const auto& f : fams) CHECK(SequenceFamily::from_json(f.to_json()) == f);

  const auto fj = SequenceFamily::from_json(json::parse(R"({"name":"constant","c":0.5,"thetaOverPi":"1/3"})"));
  CHECK(fj.theta == doctest::Approx(std::numbers::pi / 3));

  const auto p = scratch_file("alphas.json", "[[0.1, 0.2], [-0.3, 0.0]]");
  const auto cf = SequenceFamily::custom(p.filename().string(), p.parent_path());
  CHECK(cf.values.size() == 2);
  CHECK(cf.sequence()(1) == cplx(-0.3, 0.0));
  CHECK(SequenceFamily::from_json(cf.to_json()) == cf);
  CHECK_THROWS_AS(SequenceFamily::custom("does-not-exist.json"), std::invalid_argument);
  const auto bad = scratch_file("bad.json", "[[1.5, 0.0]]");
  CHECK_THROWS_AS(SequenceFamily::custom(bad.string()), std::invalid_argument);
}

TEST_CASE("shift operator coefficients") {
  const auto op = shift_operator(CriticalPoints::single(0, 1, 2));
  REQUIRE(op.size() == 3);
  CHECK(std::abs(op[0] - 1.0) < 1e-15);
  CHECK(std::abs(op[1] + 2.0) < 1e-15);
  CHECK(std::abs(op[2] - 1.0) < 1e-15);
  // (S - e^{-i theta}) applied directly
  Rng rng(83);
  std::vector<cplx> v(10);
  for (auto& x : v) x = rng.in_disk(0.9);
  const VerblunskySeq a(v);
  const auto pts = CriticalPoints::single(1, 4, 1);
  const auto diag = condition_diagnostics(a, pts, 8);
  double gz = 0;
  const cplx w = std::polar(1.0, -std::numbers::pi / 4);
  for (long n = 0; n < 8; ++n) gz += std::norm(a(n + 1) - w * a(n));
  CHECK(diag.gz == doctest::Approx(gz).epsilon(1e-13));
}

TEST_CASE("condition diagnostics") {
  const auto pts = CriticalPoints::single(0, 1, 2);
  const auto z = condition_diagnostics(VerblunskySeq(std::vector<cplx>{}), pts, 50);
  CHECK(z.gz == 0.0);
  CHECK(z.l2 == 0.0);
  CHECK(z.l4 == 0.0);
  CHECK(z.power == std::vector<double>{0.0, 0.0});

  // rotating constant: the difference operator kills it, powers grow like N
  const double c = 0.5;
  const auto rot = CriticalPoints::single(1, 3, 2);
  const auto seq = SequenceFamily::constant(c, std::numbers::pi / 3).sequence();
  for (std::size_t N : {10u, 100u, 1000u}) {
    const auto r = condition_diagnostics(seq, rot, N);
    CHECK(r.gz < 1e-28 * static_cast<double>(N * N));
    for (int m = 1; m <= 2; ++m) {
      CHECK(r.power[static_cast<std::size_t>(m - 1)] == doctest::Approx(std::pow(c, 2 * m + 2) * static_cast<double>(N)));
    }
  }

  // power decay at theta = 0: difference and l4 settle, l2 keeps growing
  const auto pd = SequenceFamily::power_decay(0.3, 0.4, 0.0).sequence();
  const auto one = CriticalPoints::single(0, 1, 1);
  const auto r1 = condition_diagnostics(pd, one, 4000);
  const auto r2 = condition_diagnostics(pd, one, 8000);
  const auto r3 = condition_diagnostics(pd, one, 16000);
  CHECK(r3.gz - r2.gz < 0.7 * (r2.gz - r1.gz));
  CHECK(r3.l4 - r2.l4 < 0.7 * (r2.l4 - r1.l4));
  CHECK(r3.l2 - r2.l2 > 1.1 * (r2.l2 - r1.l2));
  // independent partial sums
  double l2 = 0, l4 = 0;
  for (int n = 0; n < 4000; ++n) {
    const double a2 = 0.09 / std::pow(n + 1.0, 0.8);
    l2 += a2;
    l4 += a2 * a2;
  }
  CHECK(r1.l2 == doctest::Approx(l2).epsilon(1e-12));
  CHECK(r1.l4 == doctest::Approx(l4).epsilon(1e-12));
  CHECK_THROWS_AS(condition_diagnostics(pd, pts, 1), std::invalid_argument);
}

TEST_CASE("classifier") {
  const std::vector<std::size_t> s{50, 100, 200, 400, 800, 1600};
  auto line = [&](double a, double b) {
    std::vector<double> v;
    for (auto N : s) v.push_back(a + b * static_cast<double>(N));
    return v;
  };
  auto c = classify(s, line(3.0, 0.05));
  CHECK(c.verdict == Verdict::kDiverging);
  CHECK(c.slope == doctest::Approx(0.05));
  c = classify(s, line(3.0, 0.0));
  CHECK(c.verdict == Verdict::kBounded);
  CHECK(c.range == 0.0);
  CHECK(classify(s, line(0.0, 1e-3)).verdict == Verdict::kInconclusive);
  CHECK(classify(s, line(0.0, -0.5)).verdict == Verdict::kInconclusive);
  // only the top half counts
  CHECK(classify(s, {0.0, 10.0, 20.0, 5.0, 5.0, 5.0}).verdict == Verdict::kBounded);
  // flat fit but large spread
  CHECK(classify(s, {0, 0, 0, 3.0, -3.0, 3.0}).verdict == Verdict::kInconclusive);
  CHECK(classify({}, {}).verdict == Verdict::kInconclusive);
  CHECK(to_string(Verdict::kBounded) == "bounded");
  CHECK(verdict_from_string("diverging") == Verdict::kDiverging);
}

TEST_CASE("convergence studies on the reference families") {
  const std::vector<std::size_t> sched{50, 100, 200, 400, 800, 1600};
  const auto H1 = CriticalPoints::single(0, 1, 1);

  const auto div = convergence_study(SequenceFamily::constant(0.5, 0.0), H1, sched);
  CHECK(div.classification.verdict == Verdict::kDiverging);
  // per-site growth: -log(1 - c^2) - c^2
  CHECK(div.classification.slope == doctest::Approx(-std::log(0.75) - 0.25).epsilon(1e-6));

  const auto bnd = convergence_study(SequenceFamily::power_decay(0.3, 0.4, 0.0), H1, sched);
  CHECK(bnd.classification.verdict == Verdict::kBounded);

  const auto fin = convergence_study(SequenceFamily::finite_support({{0.3, 0.1}, {-0.2, 0.4}, {0.5, 0.0}}),
                                     CriticalPoints::single(1, 3, 2), sched);
  CHECK(fin.classification.verdict == Verdict::kBounded);
  CHECK(fin.classification.range < 1e-12);
  for (const auto& r : fin.rows) CHECK(r.corollary_route == doctest::Approx(fin.rows.front().corollary_route).epsilon(1e-12));

  for (const auto* rep : {&div, &bnd, &fin}) {
    REQUIRE(rep->rows.size() == sched.size());
    std::vector<double> all, early;
    for (const auto& r : rep->rows) {
      const double d = r.trace_route - r.corollary_route;
      all.push_back(d);
      if (r.N <= 100) early.push_back(d);
    }
    CHECK(range_of(all) <= 10 * range_of(early) + 1e-9);
    CHECK(rep->conditions.N == 1600);
    CHECK(rep->rows.back().log_term_sum == doctest::Approx(log_sum(rep->family.sequence(), 1600)));
  }
}

TEST_CASE("schedule validation") {
  const auto H = CriticalPoints::single(0, 1, 2);
  const auto f = SequenceFamily::constant(0.2);
  CHECK_THROWS_AS(convergence_study(f, H, {100, 50}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(f, H, {50, 50}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(f, H, {2, 10}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(f, H, {kMaxScheduleN + 1}), std::invalid_argument);
}

TEST_CASE("report export") {
  const auto H = CriticalPoints::single(0, 1, 1);
  const auto f = SequenceFamily::power_decay(0.3, 0.4);
  const auto empty = convergence_study(f, H, {});
  CHECK(export_report(empty, ReportFormat::kCsv) == "N,traceRoute,corollaryRoute,logTermSum,diffNorm,verdict\n");

  const auto two = convergence_study(f, H, {50, 100});
  const auto csv = export_report(two, ReportFormat::kCsv);
  std::istringstream in(csv);
  std::string header, r1, r2, extra;
  std::getline(in, header);
  std::getline(in, r1);
  std::getline(in, r2);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(r1.rfind("50,", 0) == 0);
  CHECK(r2.rfind("100,", 0) == 0);

  const auto text = export_report(two, ReportFormat::kJson);
  const auto back = GemReport::from_json(json::parse(text));
  CHECK(back == two);
  CHECK(export_report(back, ReportFormat::kJson) == text);
}

TEST_CASE("study configs and concurrent runs") {
  const auto cfg = StudyConfig::from_json(json::parse(R"({
    "family": {"name": "constant", "c": 0.4, "thetaOverPi": "1/2"},
    "criticalPoints": [{"thetaOverPi": "1/2", "m": 1}],
    "schedule": [20, 40, 80]
  })"));
  CHECK(cfg.schedule == std::vector<std::size_t>{20, 40, 80});
  CHECK(cfg.seed == 0);
  CHECK(cfg.points.degree() == 1);
  CHECK_THROWS_AS(StudyConfig::from_json(json::parse(R"({"criticalPoints": []})")), std::invalid_argument);
  CHECK_THROWS_AS(StudyConfig::load("no/such/config.json"), std::invalid_argument);

  const auto file = scratch_file("study.json", R"({"family":{"name":"custom","path":"alphas2.json"},
    "criticalPoints":[{"thetaOverPi":"0","m":1}],"schedule":[10,20]})");
  scratch_file("alphas2.json", "[[0.2, 0.1]]");
  const auto loaded = StudyConfig::load(file);
  CHECK(loaded.family.kind == FamilyKind::kCustom);
  CHECK(loaded.schedule.size() == 2);

  std::vector<StudyConfig> configs;
  for (int i = 0; i < 5; ++i) {
    StudyConfig c = cfg;
    c.family = SequenceFamily::power_decay(0.1 + 0.1 * i, 0.5);
    configs.push_back(c);
  }
  const auto seq = run_studies(configs, 1);
  const auto par = run_studies(configs, 4);
  REQUIRE(seq.size() == configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    CHECK(seq[i] == par[i]);
    CHECK(seq[i].family == configs[i].family);
  }
}
