#include "tubevol/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace tubevol {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

VarietySpec make_spec(std::vector<std::string> polys, AmbientSpace space,
                      int m, int delta, bool smooth_ci) {
  VarietySpec v;
  v.space = space;
  v.system = PolySystem(space.point_dim(), {});
  for (const auto& s : polys)
    v.system.polys.push_back(parse_poly(s, space.point_dim()));
  v.dim_bound = m;
  v.degree_bound = delta;
  v.smooth_complete_intersection = smooth_ci;
  v.validate();
  return v;
}

}  // namespace

void Scenario::validate() const {
  variety.validate();
  if (queries.empty()) throw std::invalid_argument("scenario: no queries");
  for (const auto& q : queries) {
    BoundQuery bq{variety.space.n, variety.dim_bound, variety.degree_bound,
                  q.eps, q.sigma, variety.space};
    bq.validate();
    if (q.center.size() != variety.space.point_dim())
      throw std::invalid_argument("scenario: query center dimension mismatch");
    if (variety.space.is_sphere() && std::abs(q.center.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("scenario: spherical center must be unit");
  }
  if (!(mc.level > 0.0 && mc.level < 1.0))
    throw std::invalid_argument("scenario: confidence level outside (0,1)");
}

std::vector<std::string> corpus_names() {
  return {"line2d",     "circle2d",        "node2d",          "cusp2d",
          "origin2d",   "twisted_cubic3d", "great_circle_s2", "antipodal_s1"};
}

VarietySpec corpus_variety(const std::string& name) {
  if (name == "line2d")
    return make_spec({"X2"}, AmbientSpace::euclidean(2), 1, 1, true);
  if (name == "circle2d")
    return make_spec({"X1^2 + X2^2 - 1"}, AmbientSpace::euclidean(2), 1, 2,
                     true);
  if (name == "node2d")
    return make_spec({"X1*X2"}, AmbientSpace::euclidean(2), 1, 2, false);
  if (name == "cusp2d")
    return make_spec({"X2^2 - X1^3"}, AmbientSpace::euclidean(2), 1, 3, false);
  if (name == "origin2d")
    return make_spec({"X1", "X2"}, AmbientSpace::euclidean(2), 0, 1, true);
  if (name == "twisted_cubic3d")
    return make_spec({"X2 - X1^2", "X3 - X1^3"}, AmbientSpace::euclidean(3), 1,
                     3, true);
  if (name == "great_circle_s2")
    return make_spec({"X3"}, AmbientSpace::sphere(2), 1, 1, true);
  if (name == "antipodal_s1")
    return make_spec({"X1"}, AmbientSpace::sphere(1), 0, 1, true);
  throw std::invalid_argument("unknown corpus variety: " + name);
}

Eigen::VectorXd corpus_center(const std::string& name) {
  if (name == "circle2d") {
    Eigen::VectorXd p(2);
    p << 1.0, 0.0;
    return p;
  }
  if (name == "great_circle_s2") {
    Eigen::VectorXd p(3);
    p << 1.0, 0.0, 0.0;
    return p;
  }
  if (name == "antipodal_s1") {
    Eigen::VectorXd p(2);
    p << 0.0, 1.0;
    return p;
  }
  const VarietySpec v = corpus_variety(name);
  return Eigen::VectorXd::Zero(v.space.point_dim());
}

Scenario default_scenario(const std::string& corpus_name, std::uint64_t trials,
                          std::uint64_t seed) {
  Scenario s;
  s.name = corpus_name;
  s.variety = corpus_variety(corpus_name);
  s.out_prefix = corpus_name;
  s.mc.trials = trials;
  s.mc.seed = seed;
  const Eigen::VectorXd center = corpus_center(corpus_name);
  const bool sph = s.variety.space.is_sphere();
  const double sig_lo = sph ? 0.8 : 0.5;
  const double sig_hi = sph ? 0.5 * kPi : 1.0;
  for (double sigma : {sig_lo, sig_hi})
    for (double eps : {0.02, 0.05, 0.1})
      s.queries.push_back({eps, sigma, center});
  return s;
}

VarietySpec variety_from_json(const nlohmann::json& j) {
  if (j.contains("corpus")) return corpus_variety(j.at("corpus"));
  const std::string space_kind = j.at("space");
  const int n = j.at("n");
  AmbientSpace space = (space_kind == "sphere") ? AmbientSpace::sphere(n)
                                                : AmbientSpace::euclidean(n);
  std::vector<std::string> polys = j.at("polys");
  return make_spec(polys, space, j.at("m"), j.at("delta"),
                   j.value("smooth_complete_intersection", false));
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.name = j.at("name");
  s.variety = variety_from_json(j.at("variety"));
  s.out_prefix = j.value("out_prefix", s.name);
  if (j.contains("mc")) {
    const auto& mc = j.at("mc");
    s.mc.trials = mc.value("trials", 100000u);
    s.mc.seed = mc.value("seed", 1u);
    s.mc.level = mc.value("level", 0.99);
    s.mc.restarts = mc.value("restarts", 2);
  }
  s.budget_seconds = j.value("budget_seconds", 300.0);
  Eigen::VectorXd default_center;
  if (j.contains("center")) {
    const std::vector<double> c = j.at("center");
    default_center = Eigen::Map<const Eigen::VectorXd>(
        c.data(), static_cast<Eigen::Index>(c.size()));
  }
  for (const auto& q : j.at("queries")) {
    QuerySpec qs;
    qs.eps = q.at("eps");
    qs.sigma = q.at("sigma");
    if (q.contains("center")) {
      const std::vector<double> c = q.at("center");
      qs.center = Eigen::Map<const Eigen::VectorXd>(
          c.data(), static_cast<Eigen::Index>(c.size()));
    } else if (default_center.size() > 0) {
      qs.center = default_center;
    } else {
      qs.center = corpus_center(j.at("variety").value("corpus", ""));
    }
    s.queries.push_back(std::move(qs));
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  return scenario_from_json(j);
}

std::vector<BoundEntry> applicable_bounds(const VarietySpec& v,
                                          const BoundQuery& q) {
  std::vector<BoundEntry> entries;
  if (v.space.is_sphere()) {
    if (v.smooth_complete_intersection)
      for (auto& e : spherical_ci_bounds(q).entries)
        entries.push_back(std::move(e));
    for (auto& e : spherical_general_bounds(q).entries)
      entries.push_back(std::move(e));
  } else {
    if (v.smooth_complete_intersection) {
      BoundEntry lotz;
      lotz.name = formula::kLotz;
      lotz.raw = lotz_bound(q);
      lotz.clamped = std::min(lotz.raw, 1.0);
      entries.push_back(std::move(lotz));
    }
    for (auto& e : affine_bounds(q).entries) entries.push_back(std::move(e));
    BoundEntry cy;
    cy.name = formula::kComteYomdin;
    cy.raw = comte_yomdin_bound(q);
    cy.clamped = std::min(cy.raw, 1.0);
    entries.push_back(std::move(cy));
  }
  return entries;
}

ScenarioResult run_scenario(const Scenario& s) {
  s.validate();
  ScenarioResult result;
  result.metadata["scenario"] = s.name;
  result.metadata["version"] = kVersion;
  result.metadata["seed"] = s.mc.seed;
  result.metadata["level"] = s.mc.level;
  result.metadata["trials_requested"] = s.mc.trials;
  result.metadata["budget_seconds"] = s.budget_seconds;

  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();

  // Budget enforcement: a small pilot per query projects the full cost; the
  // trial count is cut by the smallest power of 4 that fits in the budget.
  std::uint64_t trials = s.mc.trials;
  bool reduced = false;
  {
    const std::uint64_t pilot = std::min<std::uint64_t>(256, s.mc.trials);
    double projected = 0.0;
    for (std::size_t qi = 0; qi < s.queries.size(); ++qi) {
      const auto& q = s.queries[qi];
      const auto t0 = clock::now();
      McOptions opts;
      opts.level = s.mc.level;
      opts.restarts = s.mc.restarts;
      tube_probability_mc(s.variety, q.center, q.sigma, q.eps, pilot,
                          s.mc.seed, opts);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      projected += dt * static_cast<double>(s.mc.trials) / pilot;
    }
    while (projected > 0.8 * s.budget_seconds && trials > 4096) {
      trials /= 4;
      projected /= 4;
      reduced = true;
    }
  }
  result.metadata["trials_used"] = trials;
  result.metadata["trials_reduced"] = reduced;

  nlohmann::json per_query = nlohmann::json::array();
  for (std::size_t qi = 0; qi < s.queries.size(); ++qi) {
    const auto& q = s.queries[qi];
    BoundQuery bq{s.variety.space.n, s.variety.dim_bound,
                  s.variety.degree_bound, q.eps, q.sigma, s.variety.space};
    const std::uint64_t query_seed = s.mc.seed + qi;
    McOptions opts;
    opts.level = s.mc.level;
    opts.restarts = s.mc.restarts;
    const auto t0 = clock::now();
    const McEstimate est = tube_probability_mc(s.variety, q.center, q.sigma,
                                               q.eps, trials, query_seed, opts);
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();

    per_query.push_back({{"eps", q.eps},
                         {"sigma", q.sigma},
                         {"seed", query_seed},
                         {"trials", est.trials},
                         {"hits", est.hits},
                         {"not_found", est.not_found},
                         {"seconds", dt}});

    for (const BoundEntry& e : applicable_bounds(s.variety, bq)) {
      ReportRow row;
      row.scenario = s.name;
      row.formula = e.name;
      row.n = bq.n;
      row.m = bq.m;
      row.delta = bq.delta;
      row.eps = q.eps;
      row.sigma = q.sigma;
      row.bound_raw = e.raw;
      row.bound_clamped = e.clamped;
      row.p_hat = est.p_hat;
      row.ci_low = est.ci_low;
      row.ci_high = est.ci_high;
      row.verdict = est.ci_low <= e.clamped;
      row.seed = query_seed;
      result.rows.push_back(std::move(row));
    }
  }
  result.metadata["queries"] = per_query;
  result.metadata["seconds_total"] =
      std::chrono::duration<double>(clock::now() - t_start).count();
  for (const auto& r : result.rows) result.all_pass &= r.verdict;
  return result;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("report_csv: no rows");
  std::string out =
      "scenario,formula,n,m,delta,eps,sigma,bound_raw,bound_clamped,p_hat,"
      "ci_low,ci_high,verdict,seed\n";
  for (const auto& r : rows) {
    out += r.scenario + ',' + r.formula + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.m) + ',' + std::to_string(r.delta) + ',' +
           fmt(r.eps) + ',' + fmt(r.sigma) + ',' + fmt(r.bound_raw) + ',' +
           fmt(r.bound_clamped) + ',' + fmt(r.p_hat) + ',' + fmt(r.ci_low) +
           ',' + fmt(r.ci_high) + ',' + (r.verdict ? "pass" : "fail") + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

void emit_report(const ScenarioResult& result, const std::string& csv_path,
                 const std::string& json_path) {
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << report_csv(result.rows);
  }
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << result.metadata.dump(2) << '\n';
}

std::string output_dir() {
  const char* env = std::getenv("TUBEVOL_OUT");
  return env && *env ? env : ".";
}

}  // namespace tubevol
