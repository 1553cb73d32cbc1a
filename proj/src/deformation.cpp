#include "tubevol/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace tubevol {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Value of G at the origin. This pins the shell radius at the grid floor:
// at t = 1e-6 the worst-case shell around a singular point stays within
// 5e-2 of the variety while the Jacobian witness stays above 1e-6.
constexpr double kOriginValue = 1.25e-2;

void append_monomials(int n, int var, int remaining, std::vector<unsigned>& cur,
                      std::vector<std::vector<unsigned>>& out) {
  if (var == n - 1) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = e;
    append_monomials(n, var + 1, remaining - e, cur, out);
  }
}

// All exponent vectors of total degree <= d.
std::vector<std::vector<unsigned>> monomials_up_to(int n, int d) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(n, 0);
  for (int k = 0; k <= d; ++k) append_monomials(n, 0, k, cur, out);
  return out;
}

// Positive polynomial of degree exactly 2d: sum_i X_i^{2d} plus a scaled
// positive combination of squared random degree-<=d polynomials, normalized
// so the value at the origin is kOriginValue.
SparsePoly build_ridge(int n, int d, std::uint64_t seed) {
  SparsePoly g(n);
  for (int i = 0; i < n; ++i) {
    std::vector<unsigned> e(n, 0);
    e[i] = static_cast<unsigned>(2 * d);
    g = g + SparsePoly::monomial(n, e, 1.0);
  }

  SampleRng rng(seed, stream::kRidgeForm, 0);
  const auto monos = monomials_up_to(n, d);
  std::vector<SparsePoly> forms;
  std::vector<double> weights;
  double base = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<Term> terms;
    double norm2 = 0.0;
    for (const auto& e : monos) {
      double c = rng.gaussian();
      if (std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; }))
        c = 0.5 + 0.5 * rng.uniform();  // keep W_j(0) bounded away from 0
      terms.push_back({e, c});
      norm2 += c * c;
    }
    SparsePoly w(n, std::move(terms));
    w = w * (1.0 / std::sqrt(norm2));
    const double u = 0.5 + rng.uniform();
    base += u * w.eval(Eigen::VectorXd::Zero(n)) *
            w.eval(Eigen::VectorXd::Zero(n));
    forms.push_back(std::move(w));
    weights.push_back(u);
  }
  const double kappa = kOriginValue / base;
  for (std::size_t j = 0; j < forms.size(); ++j)
    g = g + forms[j] * forms[j] * (kappa * weights[j]);
  return g;
}

// Nonnegativity audit on random samples of B(0,2); the construction is a sum
// of even powers and squares, so a violation indicates a bug.
void audit_ridge(const SparsePoly& g, std::uint64_t seed) {
  const int n = g.n_vars();
  for (int i = 0; i < 10000; ++i) {
    const Eigen::VectorXd x =
        ball_sample_at(Eigen::VectorXd::Zero(n), 2.0, mix64(seed) ^ stream::kAudit, i);
    if (g.eval(x) < 0.0)
      throw std::logic_error("deformation: ridge polynomial audit failed");
  }
}

DeformationFamily build_family_impl(const PolySystem& f_affine, int m,
                                    std::uint64_t seed, int d,
                                    AmbientSpace original_space,
                                    Eigen::MatrixXd chart_rotation,
                                    std::vector<double> t_grid) {
  const int n = f_affine.n_vars;
  if (!(0 <= m && m < n))
    throw std::invalid_argument("build_family: need 0 <= m < n");
  if (f_affine.polys.empty())
    throw std::invalid_argument("build_family: empty family");

  DeformationFamily fam;
  fam.m = m;
  fam.space = original_space;
  fam.chart_rotation = std::move(chart_rotation);
  fam.family_degree = 2 * d;
  fam.rotation = random_orthogonal(n, seed, 1);
  if (t_grid.empty())
    t_grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i + 1]))
      throw std::invalid_argument("build_family: t grid must be decreasing");
  if (!(t_grid.front() < 1.0 && t_grid.back() > 0.0))
    throw std::invalid_argument("build_family: t grid must lie in (0,1)");
  fam.t_grid = std::move(t_grid);

  const SparsePoly q = sum_of_squares(f_affine);
  const SparsePoly g = build_ridge(n, d, seed);
  audit_ridge(g, seed);
  // Family polynomials live in the rotated frame y with original x = R y.
  fam.q = rotate_coords(q, fam.rotation);
  fam.g = rotate_coords(g, fam.rotation);
  return fam;
}

}  // namespace

std::vector<Eigen::VectorXd> DeformationFamily::to_original(
    const Eigen::VectorXd& y) const {
  if (!space.is_sphere()) return {rotation * y};
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd w(n + 1);
  w[0] = 1.0;
  w.tail(n) = rotation * y;
  w /= w.norm();
  Eigen::VectorXd z = chart_rotation * w;
  return {z, -z};
}

DeformationFamily build_family(const PolySystem& f, int m, std::uint64_t seed,
                               std::vector<double> t_grid) {
  const int d = std::max(1u, f.max_degree());
  return build_family_impl(f, m, seed, d,
                           AmbientSpace::euclidean(f.n_vars),
                           Eigen::MatrixXd(), std::move(t_grid));
}

DeformationFamily spherical_family(const PolySystem& p_hom, int m,
                                   std::uint64_t seed,
                                   std::vector<double> t_grid) {
  for (const SparsePoly& p : p_hom.polys)
    if (!p.is_homogeneous())
      throw std::invalid_argument(
          "spherical_family: input system must be homogeneous");
  const int n = p_hom.n_vars - 1;
  if (n < 1)
    throw std::invalid_argument("spherical_family: ambient S^n needs n >= 1");
  const Eigen::MatrixXd s = random_orthogonal(n + 1, seed, 11);
  const PolySystem rotated = rotate_coords(p_hom, s);
  PolySystem f_aff(n);
  for (const SparsePoly& p : rotated.polys)
    f_aff.polys.push_back(dehomogenize(p));
  const int d = std::max(1u, p_hom.max_degree());
  DeformationFamily fam = build_family_impl(
      f_aff, m, seed, d, AmbientSpace::sphere(n), s, std::move(t_grid));
  return fam;
}

PolySystem family_system(const DeformationFamily& fam, double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("family_system: t outside (0,1)");
  const int n = fam.q.n_vars();
  const SparsePoly d = deformation_poly(fam.q, fam.g, t);
  return cr_set(d, n - fam.m - 1);
}

ConvergenceResult convergence_experiment(const DeformationFamily& fam,
                                         const VarietySpec& original, double r,
                                         int cloud_size, std::uint64_t seed) {
  original.validate();
  if (!(r > 0.0))
    throw std::invalid_argument("convergence_experiment: R > 0 required");
  const bool sph = fam.space.is_sphere();
  const int n = fam.q.n_vars();

  ConvergenceResult out;
  // Sampling region inflated 5% over the comparison ball to tame boundary
  // bias (affine case); the spherical comparison is global.
  const double sample_radius = sph ? kPi : 1.05 * r;
  Eigen::VectorXd center;
  if (sph) {
    center = Eigen::VectorXd::Zero(n + 1);
    center[0] = 1.0;
  } else {
    center = Eigen::VectorXd::Zero(n);
  }
  out.z_cloud = sample_variety_points(original, center, sample_radius,
                                      cloud_size, mix64(seed) ^ 0x5au);

  const Eigen::VectorXd chart_center = Eigen::VectorXd::Zero(n);
  const double chart_radius = sph ? 12.0 : 1.05 * r;

  for (std::size_t ti = 0; ti < fam.t_grid.size(); ++ti) {
    const double t = fam.t_grid[ti];
    ConvergenceRow row;
    row.t = t;
    const PolySystem sys = family_system(fam, t);
    VarietySpec vt;
    vt.system = sys;
    vt.space = AmbientSpace::euclidean(n);
    vt.dim_bound = fam.m;
    vt.degree_bound = std::max(1u, sys.max_degree());
    const std::uint64_t row_seed = mix64(seed + 1000 + ti);

    const PointCloud frame_cloud = sample_variety_points(
        vt, chart_center, chart_radius, cloud_size, row_seed);

    PointCloud vt_cloud{fam.space, {}};
    row.min_sv = std::numeric_limits<double>::infinity();
    for (const auto& y : frame_cloud.points) {
      row.min_sv = std::min(row.min_sv, jacobian_min_sv(sys, y, false));
      for (auto& z : fam.to_original(y)) vt_cloud.points.push_back(std::move(z));
    }
    row.z_points = static_cast<int>(out.z_cloud.size());
    row.vt_points = static_cast<int>(vt_cloud.size());

    if (out.z_cloud.empty() || vt_cloud.empty()) {
      row.ok = false;
      row.min_sv = 0.0;
      out.rows.push_back(row);
      out.vt_clouds.push_back(std::move(vt_cloud));
      continue;
    }

    // Directed distances restricted to the comparison region, with partners
    // searched in the full (inflated) clouds.
    double d_true = 0.0, d_approx = 0.0;
    bool any_true = false, any_approx = false;
    for (const auto& z : out.z_cloud.points) {
      if (!sph && z.norm() > r) continue;
      any_true = true;
      d_true = std::max(d_true, dist_to_cloud(fam.space, z, vt_cloud));
    }
    for (const auto& v : vt_cloud.points) {
      if (!sph && v.norm() > r) continue;
      any_approx = true;
      d_approx = std::max(d_approx, dist_to_cloud(fam.space, v, out.z_cloud));
    }
    if (!any_true || !any_approx) {
      row.ok = false;
      out.rows.push_back(row);
      out.vt_clouds.push_back(std::move(vt_cloud));
      continue;
    }
    row.dir_true_to_approx = d_true;
    row.dir_approx_to_true = d_approx;
    row.hausdorff = std::max(d_true, d_approx);
    out.rows.push_back(row);
    out.vt_clouds.push_back(std::move(vt_cloud));
  }
  return out;
}

int tube_inclusion_check(const PointCloud& z_cloud, const PointCloud& zt_cloud,
                         const Eigen::VectorXd& p, double sigma, double eps,
                         double tau, int probe_count, std::uint64_t seed) {
  if (!(z_cloud.space == zt_cloud.space))
    throw std::invalid_argument("tube_inclusion_check: cloud space mismatch");
  if (z_cloud.empty() || zt_cloud.empty())
    throw std::invalid_argument("tube_inclusion_check: empty cloud");
  const bool sph = z_cloud.space.is_sphere();
  std::unique_ptr<CapThetaSampler> cap;
  if (sph) cap = std::make_unique<CapThetaSampler>(z_cloud.space.n, sigma);
  int violations = 0;
  for (int i = 0; i < probe_count; ++i) {
    const std::uint64_t idx = mix64(stream::kProbe) + static_cast<std::uint64_t>(i);
    const Eigen::VectorXd x = sph ? cap_sample_at(p, *cap, seed, idx)
                                  : ball_sample_at(p, sigma, seed, idx);
    if (dist_to_cloud(z_cloud.space, x, z_cloud) <= eps &&
        dist_to_cloud(z_cloud.space, x, zt_cloud) > eps + tau)
      ++violations;
  }
  return violations;
}

}  // namespace tubevol
