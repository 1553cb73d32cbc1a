#ifndef TUBEVOL_HARNESS_HPP
#define TUBEVOL_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tubevol/bounds.hpp"
#include "tubevol/variety.hpp"

#include <json.hpp>

namespace tubevol {

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double level = 0.99;
  int restarts = 2;
};

struct QuerySpec {
  double eps = 0.1;
  double sigma = 1.0;
  Eigen::VectorXd center;
};

struct Scenario {
  std::string name;
  VarietySpec variety;
  std::vector<QuerySpec> queries;
  McConfig mc;
  std::string out_prefix;
  double budget_seconds = 300.0;

  void validate() const;
};

struct ReportRow {
  std::string scenario;
  std::string formula;
  int n = 0, m = 0, delta = 1;
  double eps = 0.0, sigma = 1.0;
  double bound_raw = 0.0, bound_clamped = 0.0;
  double p_hat = 0.0, ci_low = 0.0, ci_high = 1.0;
  bool verdict = true;  // pass iff ci_low <= bound_clamped
  std::uint64_t seed = 0;
};

struct ScenarioResult {
  std::vector<ReportRow> rows;
  nlohmann::json metadata;
  bool all_pass = true;
};

// Shipped desk-scale corpus.
std::vector<std::string> corpus_names();
VarietySpec corpus_variety(const std::string& name);
// A natural ball center for the corpus entry (a point of Z).
Eigen::VectorXd corpus_center(const std::string& name);
// Corpus scenario with the standard (eps, sigma) grid.
Scenario default_scenario(const std::string& corpus_name,
                          std::uint64_t trials = 100000,
                          std::uint64_t seed = 1);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);
VarietySpec variety_from_json(const nlohmann::json& j);

// The bound formulas checked for a variety: the general-case forms always,
// plus the complete-intersection forms when the spec declares smoothness.
std::vector<BoundEntry> applicable_bounds(const VarietySpec& v,
                                          const BoundQuery& q);

ScenarioResult run_scenario(const Scenario& s);

// Fixed column schema:
// scenario,formula,n,m,delta,eps,sigma,bound_raw,bound_clamped,p_hat,
// ci_low,ci_high,verdict,seed
std::string report_csv(const std::vector<ReportRow>& rows);
void emit_report(const ScenarioResult& result, const std::string& csv_path,
                 const std::string& json_path);

// Output directory: $TUBEVOL_OUT when set, "." otherwise.
std::string output_dir();

}  // namespace tubevol

#endif  // TUBEVOL_HARNESS_HPP
