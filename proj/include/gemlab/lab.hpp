#pragma once

// Sequence families, condition diagnostics and convergence studies of the
// sum-rule functional.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gemlab/opuc.hpp"
#include "gemlab/trig.hpp"

namespace gemlab {

enum class FamilyKind { kPowerDecay, kConstant, kFiniteSupport, kCustom };

/// Named Verblunsky families:
///   powerDecay(c, gamma, theta): c e^{-i theta n} / (n+1)^gamma
///   constant(c, theta):          c e^{-i theta n}
///   finiteSupport(values)
///   custom(file): JSON array of [re, im] pairs, zero afterwards
struct SequenceFamily {
  FamilyKind kind = FamilyKind::kConstant;
  double c = 0.0;
  double gamma = 0.0;
  double theta = 0.0;  // radians
  std::vector<cplx> values;  // finiteSupport, and custom after loading
  std::string path;          // custom only

  static SequenceFamily power_decay(double c, double gamma, double theta = 0.0);
  static SequenceFamily constant(double c, double theta = 0.0);
  static SequenceFamily finite_support(std::vector<cplx> values);
  /// Loads the file immediately; relative paths resolve against `base`.
  static SequenceFamily custom(const std::string& path, const std::filesystem::path& base = {});

  /// Throws std::invalid_argument if some |alpha_n| >= 1 can occur.
  void validate() const;
  VerblunskySeq sequence() const;
  std::string name() const;

  nlohmann::json to_json() const;
  static SequenceFamily from_json(const nlohmann::json& j, const std::filesystem::path& base = {});

  bool operator==(const SequenceFamily&) const = default;
};

/// JSON array of [re, im] pairs.
std::vector<cplx> parse_alpha_list(const nlohmann::json& j);

/// Coefficients of prod_j (S - e^{-i theta_j})^{m_j} as a polynomial in S.
std::vector<cplx> shift_operator(const CriticalPoints& points);

struct ConditionNorms {
  std::size_t N = 0;
  double gz = 0.0;               // sum_{n<N} |(prod (S - e^{-i theta_j})^{m_j} alpha)_n|^2
  std::vector<double> power;     // power[m-1] = sum_{n<N} |alpha_n|^{2m+2}, m = 1..d
  double l2 = 0.0;               // sum |alpha_n|^2
  double l4 = 0.0;               // sum |alpha_n|^4

  nlohmann::json to_json() const;
  static ConditionNorms from_json(const nlohmann::json& j);
  bool operator==(const ConditionNorms&) const = default;
};

ConditionNorms condition_diagnostics(const VerblunskySeq& alpha, const CriticalPoints& points, std::size_t N);

enum class Verdict { kBounded, kDiverging, kInconclusive };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Classification {
  Verdict verdict = Verdict::kInconclusive;
  double slope = 0.0;  // least squares over the top half of the schedule
  double range = 0.0;  // max - min over the same points
};

/// |slope| < 1e-4 and range < 1: bounded; slope > 1e-2: diverging; otherwise inconclusive.
Classification classify(const std::vector<std::size_t>& schedule, const std::vector<double>& values);

struct GemRow {
  std::size_t N = 0;
  double trace_route = 0.0;
  double corollary_route = 0.0;
  double log_term_sum = 0.0;
  double diff_norm = 0.0;
  bool operator==(const GemRow&) const = default;
};

struct GemReport {
  SequenceFamily family;
  CriticalPoints points;
  std::vector<std::size_t> schedule;
  std::vector<GemRow> rows;
  ConditionNorms conditions;  // at the largest N
  Classification classification;

  nlohmann::json to_json() const;
  static GemReport from_json(const nlohmann::json& j);
};

bool operator==(const GemReport& a, const GemReport& b);

struct StudyConfig {
  SequenceFamily family;
  CriticalPoints points;
  std::vector<std::size_t> schedule{50, 100, 200, 400, 800, 1600};
  unsigned seed = 0;

  /// {family: {...}, criticalPoints: [...], schedule: [...], seed?: int}
  static StudyConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static StudyConfig load(const std::filesystem::path& file);
};

inline constexpr std::size_t kMaxScheduleN = 20000;

/// Evaluates the trace route and the corollary route along the schedule.
/// `with_corollary = false` leaves corollary_route at 0.
GemReport convergence_study(const SequenceFamily& family, const CriticalPoints& points,
                            const std::vector<std::size_t>& schedule, bool with_corollary = true);
GemReport convergence_study(const StudyConfig& config);

/// Runs independent studies on up to `workers` threads; output order follows input.
std::vector<GemReport> run_studies(const std::vector<StudyConfig>& configs, unsigned workers);

enum class ReportFormat { kJson, kCsv };
std::string export_report(const GemReport& report, ReportFormat format);

}  // namespace gemlab
