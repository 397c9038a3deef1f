#include "gemlab/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "gemlab/algmodel.hpp"
#include "gemlab/lab.hpp"

namespace gemlab::cli {

using nlohmann::json;

namespace {

class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CaseFn = std::function<json()>;

std::string label(int k, int d) { return "k=" + std::to_string(k) + ",d=" + std::to_string(d); }

json record(const std::string& name, const std::string& route, const CheckResult& r) {
  json j{{"case", name}, {"route", route}, {"status", r.pass ? "pass" : "fail"}};
  if (!r.pass) j["diff"] = r.detail;
  return j;
}

/// Runs the cases on the worker pool; results keep input order.
std::vector<json> run_cases(const std::vector<CaseFn>& cases, unsigned workers) {
  std::vector<json> out(cases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        out[i] = cases[i]();
      } catch (const std::exception& e) {
        out[i] = json{{"case", "#" + std::to_string(i)}, {"route", "error"}, {"status", "fail"}, {"diff", e.what()}};
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cases.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<CaseFn> verify_cases(int kmax, int dmax) {
  std::vector<CaseFn> cases;
  for (int d = 1; d <= dmax; ++d) {
    for (int k = 1; k <= std::min(kmax, d); ++k) {
      cases.emplace_back([k, d] {
        const auto H = build_H_exact(CriticalPoints::single(0, 1, d));
        return record("theorem3 " + label(k, d), "trace-vs-hl", theorem3_check(k, H));
      });
      cases.emplace_back([k, d] {
        const auto H = build_H_exact(CriticalPoints::single(0, 1, d));
        return record("routes " + label(k, d), "divided-diff-vs-homogeneous", route_check(k, H));
      });
    }
  }
  for (int k = 1; k <= kmax; ++k) {
    for (int l = 1; l <= dmax; ++l) {
      cases.emplace_back([k, l] {
        const auto rep = lemma5_check(k, l);
        CheckResult r{rep.pass, ""};
        for (const auto& m : rep.mismatches) r.detail += m + "; ";
        json j = record("lemma5 k=" + std::to_string(k) + ",l=" + std::to_string(l), "symbolic-trace", r);
        j["interiorMonomials"] = rep.interior_monomials;
        j["maxMultiplicity"] = rep.max_multiplicity;
        return j;
      });
      cases.emplace_back([k, l] {
        const auto a = enum_D(k, l);
        const auto b = enum_D_direct(k, l);
        const bool ok = a == b && static_cast<long>(a.size()) == expected_D_size(k, l);
        CheckResult r{ok, ok ? "" : "bijection " + std::to_string(a.size()) + ", direct " + std::to_string(b.size()) +
                                        ", formula " + std::to_string(expected_D_size(k, l))};
        json j = record("enum-d k=" + std::to_string(k) + ",l=" + std::to_string(l), "bijection-vs-direct", r);
        j["size"] = a.size();
        return j;
      });
    }
  }
  for (int k = 1; k <= kmax; ++k) {
    cases.emplace_back([k] {
      const auto cs = constant_sum_check(k);
      const GaussRational expected(k % 2 == 1 ? 1 : -1);
      CheckResult r{cs.value == expected, ""};
      if (!r.pass) r.detail = "got " + cs.value.to_string() + ", expected " + expected.to_string();
      json j = record("constant-sum k=" + std::to_string(k), "divided-diff", r);
      j["value"] = cs.value.to_string();
      j["note"] = "computed (-1)^(k+1); the displayed (-1)^k is a suspected typo";
      return j;
    });
    cases.emplace_back([k] { return record("hl-relation k=" + std::to_string(k), "monomial", hl_relation_check(k)); });
  }
  for (int d = 1; d <= dmax; ++d) {
    cases.emplace_back([d] {
      return record("gz m=" + std::to_string(d), "degree-2", gz_check(CriticalPoints::single(0, 1, d)));
    });
  }
  return cases;
}

int cmd_verify(int kmax, int dmax, std::ostream& out, std::ostream& err) {
  if (kmax < 1 || dmax < 1) throw BadInput("--kmax and --dmax must be positive");
  if (kmax > 5 || dmax > 5) throw BadInput("--kmax and --dmax are limited to 5");
  const auto results = run_cases(verify_cases(kmax, dmax), worker_count());
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << r.dump() << '\n';
    if (r.at("status") != "pass") {
      ++failed;
      err << "FAIL " << r.at("case").get<std::string>() << '\n';
    }
  }
  err << "verify: " << results.size() - failed << "/" << results.size() << " cases passed\n";
  return failed == 0 ? kExitPass : kExitFail;
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw BadInput("cannot open " + p.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw BadInput(p.string() + ": " + e.what());
  }
}

int cmd_gem(const std::string& config, const std::string& format, std::ostream& out, std::ostream& err) {
  ReportFormat fmt;
  if (format == "json") {
    fmt = ReportFormat::kJson;
  } else if (format == "csv") {
    fmt = ReportFormat::kCsv;
  } else {
    throw BadInput("--format must be json or csv");
  }
  const std::filesystem::path path(config);
  const json j = read_json_file(path);
  std::vector<StudyConfig> configs;
  try {
    if (j.is_array()) {
      for (const auto& c : j) configs.push_back(StudyConfig::from_json(c, path.parent_path()));
    } else {
      configs.push_back(StudyConfig::from_json(j, path.parent_path()));
    }
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
  std::vector<GemReport> reports;
  try {
    reports = run_studies(configs, worker_count());
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  } catch (const OutsideDisk& e) {
    throw BadInput(e.what());
  }
  for (const auto& r : reports) {
    if (fmt == ReportFormat::kJson) {
      out << export_report(r, fmt) << '\n';
    } else {
      out << export_report(r, fmt);
    }
    err << "gem " << r.family.name() << ": " << to_string(r.classification.verdict)
        << " (slope " << r.classification.slope << ", range " << r.classification.range << ")\n";
  }
  return kExitPass;
}

int cmd_dump(int k, int d, const std::string& theta, std::ostream& out, std::ostream& err) {
  if (k < 1 || d < 1) throw BadInput("--k and --d must be positive");
  if (k > d) throw BadInput("--k must not exceed --d");
  if (d > 6) throw BadInput("--d is limited to 6");
  CriticalPoints points;
  AngleMode mode = AngleMode::kSymbolic;
  if (theta.empty()) {
    points = CriticalPoints::single(0, 1, d);
  } else {
    mpq_class q;
    if (q.set_str(theta, 10) != 0) throw BadInput("--theta must be a fraction p/q");
    q.canonicalize();
    points = CriticalPoints::single(q.get_num().get_si(), q.get_den().get_si(), d);
    mode = AngleMode::kFixed;
  }
  std::optional<ExactTrigPoly> H;
  try {
    H.emplace(build_H_exact(points, mode));
  } catch (const std::invalid_argument&) {
    H.emplace(build_H_exact(points, AngleMode::kSymbolic));  // angle not expressible in Q(i)
  }
  const ScaledPoly g = build_G2k_hl(k, *H);
  json j{{"k", k},
         {"d", d},
         {"mode", H->mode() == AngleMode::kFixed ? "fixed" : "symbolic"},
         {"num", g.num.to_string()},
         {"den", g.den.to_string()}};
  if (!theta.empty()) j["thetaOverPi"] = theta;
  out << j.dump() << '\n';
  err << "G'_" << 2 * k << " = (" << g.num.to_string() << ") / (" << g.den.to_string() << ")\n";
  return kExitPass;
}

int cmd_szego(const std::string& alphas, std::size_t grid, std::ostream& out, std::ostream& err) {
  json j;
  const std::filesystem::path p(alphas);
  std::error_code ec;
  if (!alphas.empty() && alphas.front() != '[' && std::filesystem::is_regular_file(p, ec)) {
    j = read_json_file(p);
  } else {
    try {
      j = json::parse(alphas);
    } catch (const json::exception& e) {
      throw BadInput(std::string("--alphas: ") + e.what());
    }
  }
  std::vector<cplx> values;
  try {
    values = parse_alpha_list(j);
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
  for (const auto& a : values) {
    if (!(std::abs(a) < 1)) throw BadInput("--alphas: every |alpha| must be below 1");
  }
  if (grid < 1024) throw BadInput("--grid must be at least 1024");
  const VerblunskySeq seq(values);
  const auto q = bs_weight_quadrature(seq, grid);
  const double ls = log_sum(seq, values.size());
  const double diff = std::abs(q.value - ls);
  const bool pass = diff <= 1e-8;
  out << json{{"case", "szego"},
              {"quadrature", q.value},
              {"logSum", ls},
              {"diff", diff},
              {"grid", q.grid},
              {"status", pass ? "pass" : "fail"}}
             .dump()
      << '\n';
  err << "szego-check: |quadrature - log sum| = " << diff << (pass ? " (pass)" : " (FAIL)") << '\n';
  return pass ? kExitPass : kExitFail;
}

int cmd_enum(int k, int l, std::ostream& out, std::ostream& err) {
  if (k < 1 || l < 1) throw BadInput("--k and --l must be positive");
  if (k > 8 || l > 12) throw BadInput("enum-d is limited to k <= 8, l <= 12");
  const auto tuples = enum_D(k, l);
  for (const auto& t : tuples) out << json{{"i", t.i}, {"j", t.j}}.dump() << '\n';
  err << "|D_{" << 2 * k << "," << l << "}| = " << tuples.size() << " (formula " << expected_D_size(k, l) << ")\n";
  return kExitPass;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("GEMLAB_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end == '\0' && v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gemlab: higher-order OPUC sum rule laboratory"};
  app.require_subcommand(1);

  int kmax = 2, dmax = 2;
  auto* verify = app.add_subcommand("verify", "run the symbolic identity checks");
  verify->add_option("--kmax", kmax, "largest k")->required();
  verify->add_option("--dmax", dmax, "largest degree d")->required();

  std::string config, format = "json";
  auto* gem = app.add_subcommand("gem", "run a convergence study");
  gem->add_option("--config", config, "study config JSON (object or array)")->required();
  gem->add_option("--format", format, "json or csv");

  int k = 1, d = 1;
  std::string theta;
  auto* dump = app.add_subcommand("dump-g2k", "print the normal form of G'_2k");
  dump->add_option("--k", k)->required();
  dump->add_option("--d", d)->required();
  dump->add_option("--theta", theta, "critical angle as a fraction of pi, e.g. 1/2");

  std::string alphas;
  std::size_t grid = 1024;
  auto* szego = app.add_subcommand("szego-check", "compare the weight quadrature with the log sum");
  szego->add_option("--alphas", alphas, "JSON array of [re, im] pairs, or a file holding one")->required();
  szego->add_option("--grid", grid, "initial quadrature grid");

  int ek = 1, el = 1;
  auto* en = app.add_subcommand("enum-d", "list the index tuples D_{2k,l}");
  en->add_option("--k", ek)->required();
  en->add_option("--l", el)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    if (*verify) return cmd_verify(kmax, dmax, out, err);
    if (*gem) return cmd_gem(config, format, out, err);
    if (*dump) return cmd_dump(k, d, theta, out, err);
    if (*szego) return cmd_szego(alphas, grid, out, err);
    if (*en) return cmd_enum(ek, el, out, err);
  } catch (const BadInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const RouteMismatch& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitBadInput;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gemlab::cli
