#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "tubevol/bounds.hpp"
#include "tubevol/curvature.hpp"
#include "tubevol/deformation.hpp"
#include "tubevol/harness.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

tubevol::VarietySpec load_variety(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open variety file: " + path);
  nlohmann::json j;
  in >> j;
  return tubevol::variety_from_json(j);
}

Eigen::VectorXd parse_point(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    vals.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                           static_cast<Eigen::Index>(vals.size()));
}

int cmd_bounds(const std::string& space, int n, int m, int delta, double eps,
               double sigma) {
  tubevol::BoundQuery q;
  q.n = n;
  q.m = m;
  q.delta = delta;
  q.eps = eps;
  q.sigma = sigma;
  q.space = (space == "sphere") ? tubevol::AmbientSpace::sphere(n)
                                : tubevol::AmbientSpace::euclidean(n);
  const tubevol::BoundReport rep = tubevol::all_bounds(q);
  std::cout << "formula,raw,clamped,preconditions_ok\n";
  for (const auto& e : rep.entries)
    std::cout << e.name << ',' << fmt(e.raw) << ',' << fmt(e.clamped) << ','
              << (e.preconditions_ok() ? "true" : "false") << '\n';
  return 0;
}

int cmd_tube_mc(const std::string& variety_path, const std::string& center,
                double sigma, double eps, std::uint64_t trials,
                std::uint64_t seed, double level, int restarts,
                const std::string& prefix) {
  const tubevol::VarietySpec v = load_variety(variety_path);
  const Eigen::VectorXd p = center.empty()
                                ? Eigen::VectorXd::Zero(v.space.point_dim())
                                : parse_point(center);
  tubevol::McOptions opts;
  opts.level = level;
  opts.restarts = restarts;
  const tubevol::McEstimate est =
      tubevol::tube_probability_mc(v, p, sigma, eps, trials, seed, opts);

  std::string csv = "p_hat,ci_low,ci_high,hits,trials,seed\n";
  csv += fmt(est.p_hat) + ',' + fmt(est.ci_low) + ',' + fmt(est.ci_high) +
         ',' + std::to_string(est.hits) + ',' + std::to_string(est.trials) +
         ',' + std::to_string(est.seed) + '\n';
  std::cout << csv;

  const std::string dir = tubevol::output_dir();
  std::ofstream(dir + "/" + prefix + ".csv", std::ios::binary) << csv;
  nlohmann::json meta{{"variety", variety_path},
                      {"sigma", sigma},
                      {"eps", eps},
                      {"trials", est.trials},
                      {"hits", est.hits},
                      {"not_found", est.not_found},
                      {"seed", est.seed},
                      {"level", est.level}};
  std::ofstream(dir + "/" + prefix + ".json", std::ios::binary)
      << meta.dump(2) << '\n';
  return 0;
}

int cmd_deform(const std::string& variety_path, double r, std::uint64_t seed,
               int clouds, double eps, int probes) {
  const tubevol::VarietySpec v = load_variety(variety_path);
  tubevol::DeformationFamily fam =
      v.space.is_sphere()
          ? tubevol::spherical_family(v.system, v.dim_bound, seed)
          : tubevol::build_family(v.system, v.dim_bound, seed);
  const tubevol::ConvergenceResult res =
      tubevol::convergence_experiment(fam, v, r, clouds, seed);

  Eigen::VectorXd p;
  double sigma;
  if (v.space.is_sphere()) {
    p = Eigen::VectorXd::Zero(v.space.point_dim());
    p[v.space.point_dim() - 1] = 1.0;
    sigma = 0.5 * kPi;
  } else {
    p = Eigen::VectorXd::Zero(v.space.point_dim());
    sigma = r;
  }

  std::cout << "t,hausdorff,dir_true_to_approx,dir_approx_to_true,min_sv,"
               "z_points,vt_points,violations\n";
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& row = res.rows[i];
    int violations = -1;
    if (row.ok)
      violations = tubevol::tube_inclusion_check(
          res.z_cloud, res.vt_clouds[i], p, sigma, eps, 2.0 * row.hausdorff,
          probes, seed);
    std::cout << fmt(row.t) << ',' << fmt(row.hausdorff) << ','
              << fmt(row.dir_true_to_approx) << ','
              << fmt(row.dir_approx_to_true) << ',' << fmt(row.min_sv) << ','
              << row.z_points << ',' << row.vt_points << ',' << violations
              << '\n';
  }
  return 0;
}

int cmd_curvature(std::uint64_t seed) {
  using namespace tubevol;
  struct Case {
    std::string name;
    PolySystem sys;
    int index;
    double exact;
  };
  std::vector<Case> cases;
  // Great circle in S^2: |K_0| = vol(S^1) vol(S^0) = 4 pi, |K_1| = 0.
  PolySystem gc(3, {parse_poly("X3", 3)});
  cases.push_back({"great_circle_s2", gc, 0, 4.0 * kPi});
  cases.push_back({"great_circle_s2", gc, 1, 0.0});
  // Great S^1 in S^3: |K_0| = vol(S^1)^2.
  PolySystem gs13(4, {parse_poly("X3", 4), parse_poly("X4", 4)});
  cases.push_back({"great_s1_s3", gs13, 0, 4.0 * kPi * kPi});
  // Small circles {X3 = cos rho} in S^2: |K_0| = 4 pi sin rho,
  // |K_1| = 4 pi cos rho.
  for (double rho : {0.6, 1.0}) {
    PolySystem sc(3, {parse_poly("X3 - " + fmt(std::cos(rho)), 3)});
    const std::string name = "small_circle_rho_" + fmt(rho);
    cases.push_back({name, sc, 0, 4.0 * kPi * std::sin(rho)});
    cases.push_back({name, sc, 1, 4.0 * kPi * std::cos(rho)});
  }

  std::cout << "case,i,estimate,exact,rel_error\n";
  int failures = 0;
  for (const auto& c : cases) {
    const PointCloud anchors = curve_anchor_points(c.sys, 8, seed);
    const double est = total_abs_curvature_mc(c.sys, anchors, c.index, 64, seed);
    const double denom = std::max(std::abs(c.exact), 1.0);
    const double rel = std::abs(est - c.exact) / denom;
    if (rel > 0.02) ++failures;
    std::cout << c.name << ',' << c.index << ',' << fmt(est) << ','
              << fmt(c.exact) << ',' << fmt(rel) << '\n';
  }
  return failures == 0 ? 0 : 2;
}

int cmd_run(const std::string& path) {
  const tubevol::Scenario s = tubevol::load_scenario_file(path);
  const tubevol::ScenarioResult result = tubevol::run_scenario(s);
  const std::string dir = tubevol::output_dir();
  tubevol::emit_report(result, dir + "/" + s.out_prefix + "_report.csv",
                       dir + "/" + s.out_prefix + "_report.json");
  std::cout << tubevol::report_csv(result.rows);
  return result.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-of-tube bounds for real algebraic sets"};
  app.require_subcommand(1);

  auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds");
  std::string space = "euclidean";
  int n = 2, m = 1, delta = 1;
  double eps = 0.1, sigma = 1.0;
  bounds->add_option("--space", space)->check(CLI::IsMember({"euclidean", "sphere"}));
  bounds->add_option("-n", n)->required();
  bounds->add_option("-m", m)->required();
  bounds->add_option("--delta", delta)->required();
  bounds->add_option("--eps", eps)->required();
  bounds->add_option("--sigma", sigma)->required();

  auto* tube = app.add_subcommand("tube-mc", "Monte Carlo tube probability");
  std::string variety_path, center, prefix = "tube_mc";
  double tm_sigma = 1.0, tm_eps = 0.1, level = 0.99;
  std::uint64_t trials = 100000, seed = 1;
  int restarts = 2;
  tube->add_option("--variety", variety_path)->required();
  tube->add_option("--center", center);
  tube->add_option("--sigma", tm_sigma)->required();
  tube->add_option("--eps", tm_eps)->required();
  tube->add_option("--trials", trials);
  tube->add_option("--seed", seed);
  tube->add_option("--level", level);
  tube->add_option("--restarts", restarts);
  tube->add_option("--out", prefix);

  auto* deform = app.add_subcommand("deform", "Deformation convergence table");
  std::string d_variety;
  double d_r = 2.0, d_eps = 0.1;
  std::uint64_t d_seed = 1;
  int d_clouds = 2000, d_probes = 10000;
  deform->add_option("--variety", d_variety)->required();
  deform->add_option("--R", d_r);
  deform->add_option("--seed", d_seed);
  deform->add_option("--clouds", d_clouds);
  deform->add_option("--eps", d_eps);
  deform->add_option("--probes", d_probes);

  auto* curv = app.add_subcommand("curvature", "Exact-case curvature suite");
  std::uint64_t c_seed = 1;
  curv->add_option("--seed", c_seed);

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path;
  run->add_option("scenario", scenario_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) return cmd_bounds(space, n, m, delta, eps, sigma);
    if (tube->parsed())
      return cmd_tube_mc(variety_path, center, tm_sigma, tm_eps, trials, seed,
                         level, restarts, prefix);
    if (deform->parsed())
      return cmd_deform(d_variety, d_r, d_seed, d_clouds, d_eps, d_probes);
    if (curv->parsed()) return cmd_curvature(c_seed);
    if (run->parsed()) return cmd_run(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
