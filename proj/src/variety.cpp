#include "tubevol/variety.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "tubevol/parallel.hpp"

namespace tubevol {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

void VarietySpec::validate() const {
  if (system.polys.empty())
    throw std::invalid_argument("variety: empty polynomial system");
  if (system.n_vars != space.point_dim())
    throw std::invalid_argument(
        "variety: system variable count must match the ambient point dimension");
  if (!(0 <= dim_bound && dim_bound < space.n))
    throw std::invalid_argument("variety: need 0 <= m < n");
  if (degree_bound < 1 ||
      static_cast<unsigned>(degree_bound) < system.max_degree())
    throw std::invalid_argument(
        "variety: degree bound below the actual system degree");
  if (space.is_sphere())
    for (const SparsePoly& p : system.polys)
      if (!p.is_homogeneous())
        throw std::invalid_argument(
            "variety: spherical systems must be homogeneous");
}

std::pair<double, double> binomial_ci(std::uint64_t hits, std::uint64_t trials,
                                      double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("binomial_ci: level outside (0,1)");
  if (hits > trials) throw std::invalid_argument("binomial_ci: hits > trials");
  if (trials == 0) return {0.0, 1.0};
  const double alpha = 1.0 - level;
  const double h = static_cast<double>(hits);
  const double n = static_cast<double>(trials);
  double lo = 0.0, hi = 1.0;
  if (hits > 0) {
    boost::math::beta_distribution<double> dist(h, n - h + 1.0);
    lo = boost::math::quantile(dist, 0.5 * alpha);
  }
  if (hits < trials) {
    boost::math::beta_distribution<double> dist(h + 1.0, n - h);
    hi = boost::math::quantile(dist, 1.0 - 0.5 * alpha);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

GridOracle::GridOracle(const VarietySpec& spec, double box_halfwidth,
                       double resolution)
    : space_(spec.space), r_(box_halfwidth), h_(resolution) {
  spec.validate();
  if (!(resolution > 0.0))
    throw std::invalid_argument("grid oracle: resolution must be positive");
  if (spec.space.n > 3)
    throw std::invalid_argument("grid oracle: only n <= 3 is supported");
  const double box = spec.space.is_sphere()
                         ? 1.0
                         : std::max(1.0, box_halfwidth) *
                               std::sqrt(static_cast<double>(spec.space.n));
  for (const SparsePoly& p : spec.system.polys) {
    grads_.push_back(gradient(p));
    // |grad P| <= sum |c| deg(term) box^{deg(term)-1} on the scan region.
    double bound = 0.0;
    for (const Term& t : p.terms()) {
      const unsigned d = t.total_degree();
      if (d == 0) continue;
      bound += std::abs(t.coeff) * d * std::pow(box, static_cast<double>(d - 1));
    }
    grad_bounds_.push_back(bound * std::sqrt(static_cast<double>(spec.space.n)));
  }
  if (spec.space.is_sphere())
    scan_sphere(spec);
  else
    scan_euclidean(spec);
}

bool GridOracle::cell_flagged(const VarietySpec& spec,
                              const std::vector<Eigen::VectorXd>& corners,
                              const Eigen::VectorXd& center) const {
  for (std::size_t pi = 0; pi < spec.system.polys.size(); ++pi) {
    const SparsePoly& p = spec.system.polys[pi];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : corners) {
      const double v = p.eval(c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo <= 0.0 && hi >= 0.0) continue;  // sign change
    // First-order near-zero test. Kept strict: a loose threshold smears the
    // oracle around points where the gradient degenerates (cusp tips).
    const double v = std::abs(p.eval(center));
    if (v > 0.25 * h_ * grad_bounds_[pi]) return false;
    if (v > 0.25 * h_ * grads_[pi].eval(center).norm()) return false;
  }
  return true;
}

void GridOracle::scan_euclidean(const VarietySpec& spec) {
  const int n = space_.n;
  const int cells = std::max(1, static_cast<int>(std::ceil(2.0 * r_ / h_)));
  const double step = 2.0 * r_ / cells;
  std::vector<int> idx(n, 0);
  std::vector<Eigen::VectorXd> corners(1u << n, Eigen::VectorXd(n));
  Eigen::VectorXd center(n);
  while (true) {
    for (int mask = 0; mask < (1 << n); ++mask)
      for (int d = 0; d < n; ++d)
        corners[mask][d] = -r_ + step * (idx[d] + ((mask >> d) & 1));
    for (int d = 0; d < n; ++d) center[d] = -r_ + step * (idx[d] + 0.5);
    if (cell_flagged(spec, corners, center)) centers_.push_back(center);
    int d = 0;
    while (d < n && ++idx[d] == cells) idx[d++] = 0;
    if (d == n) break;
  }
}

namespace {

// Angular parametrizations with derivative norm <= 1 per coordinate, so an
// angular step h moves the point by at most h sqrt(n).
Eigen::VectorXd sphere_point(int n, const std::vector<double>& a) {
  Eigen::VectorXd x(n + 1);
  if (n == 1) {
    x << std::cos(a[0]), std::sin(a[0]);
  } else if (n == 2) {
    x << std::sin(a[0]) * std::cos(a[1]), std::sin(a[0]) * std::sin(a[1]),
        std::cos(a[0]);
  } else {
    x << std::sin(a[0]) * std::sin(a[1]) * std::cos(a[2]),
        std::sin(a[0]) * std::sin(a[1]) * std::sin(a[2]),
        std::sin(a[0]) * std::cos(a[1]), std::cos(a[0]);
  }
  return x;
}

}  // namespace

void GridOracle::scan_sphere(const VarietySpec& spec) {
  const int n = space_.n;
  std::vector<double> hi_angle(n, kPi);
  hi_angle[n - 1] = 2.0 * kPi;
  std::vector<int> cells(n);
  for (int d = 0; d < n; ++d)
    cells[d] = std::max(1, static_cast<int>(std::ceil(hi_angle[d] / h_)));
  std::vector<int> idx(n, 0);
  std::vector<double> a(n);
  std::vector<Eigen::VectorXd> corners;
  while (true) {
    corners.clear();
    for (int mask = 0; mask < (1 << n); ++mask) {
      for (int d = 0; d < n; ++d)
        a[d] = hi_angle[d] * (idx[d] + ((mask >> d) & 1)) / cells[d];
      corners.push_back(sphere_point(n, a));
    }
    for (int d = 0; d < n; ++d)
      a[d] = hi_angle[d] * (idx[d] + 0.5) / cells[d];
    const Eigen::VectorXd center = sphere_point(n, a);
    if (cell_flagged(spec, corners, center)) centers_.push_back(center);
    int d = 0;
    while (d < n && ++idx[d] == cells[d]) idx[d++] = 0;
    if (d == n) break;
  }
}

double GridOracle::distance(const Eigen::VectorXd& x) const {
  if (centers_.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers_) best = std::min(best, dist(space_, x, c));
  return best;
}

double grid_distance(const VarietySpec& spec, const Eigen::VectorXd& x,
                     double box_halfwidth, double resolution) {
  return GridOracle(spec, box_halfwidth, resolution).distance(x);
}

// ---------------------------------------------------------------------------
// Certified projection
// ---------------------------------------------------------------------------

namespace {

struct CompiledSystem {
  std::vector<SparsePoly> polys;
  std::vector<std::vector<SparsePoly>> grads;
  int dim = 0;
  bool spherical = false;

  explicit CompiledSystem(const VarietySpec& spec)
      : polys(spec.system.polys),
        dim(spec.system.n_vars),
        spherical(spec.space.is_sphere()) {
    grads.reserve(polys.size());
    for (const SparsePoly& p : polys) {
      std::vector<SparsePoly> g;
      g.reserve(dim);
      for (int v = 0; v < dim; ++v) g.push_back(p.derivative(v));
      grads.push_back(std::move(g));
    }
  }

  int rows() const {
    return static_cast<int>(polys.size()) + (spherical ? 1 : 0);
  }

  void residual(const Eigen::VectorXd& y, Eigen::VectorXd& f) const {
    f.resize(rows());
    for (std::size_t i = 0; i < polys.size(); ++i)
      f[static_cast<Eigen::Index>(i)] = polys[i].eval(y);
    if (spherical) f[rows() - 1] = y.squaredNorm() - 1.0;
  }

  void jacobian(const Eigen::VectorXd& y, Eigen::MatrixXd& j) const {
    j.resize(rows(), dim);
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (int v = 0; v < dim; ++v)
        j(static_cast<Eigen::Index>(i), v) = grads[i][v].eval(y);
    if (spherical) j.row(rows() - 1) = 2.0 * y.transpose();
  }

  double max_abs_poly(const Eigen::VectorXd& y) const {
    double m = 0.0;
    for (const SparsePoly& p : polys) m = std::max(m, std::abs(p.eval(y)));
    return m;
  }
};

bool newton_to_zero(const CompiledSystem& cs, Eigen::VectorXd& y, int max_iters,
                    double tol) {
  Eigen::VectorXd f, fnew;
  Eigen::MatrixXd j;
  cs.residual(y, f);
  double phi = f.squaredNorm();
  for (int it = 0; it < max_iters; ++it) {
    if (f.cwiseAbs().maxCoeff() <= tol) return true;
    cs.jacobian(y, j);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(j);
    Eigen::VectorXd delta = cod.solve(-f);
    const double cap = 2.0 * (1.0 + y.norm());
    const double dn = delta.norm();
    if (!(dn > 0.0)) return f.cwiseAbs().maxCoeff() <= tol;
    if (dn > cap) delta *= cap / dn;
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
      const Eigen::VectorXd cand = y + alpha * delta;
      cs.residual(cand, fnew);
      const double phin = fnew.squaredNorm();
      if (phin <= (1.0 - 1e-4 * alpha) * phi) {
        y = cand;
        f = fnew;
        phi = phin;
        accepted = true;
        break;
      }
    }
    if (!accepted) return f.cwiseAbs().maxCoeff() <= tol;
  }
  return f.cwiseAbs().maxCoeff() <= tol;
}

// Descends |y - x|^2 along the numeric zero set: tangential gradient step,
// then a short Newton re-projection; accepts only strict improvements.
void refine_distance(const CompiledSystem& cs, const Eigen::VectorXd& x,
                     Eigen::VectorXd& y, int max_iters, double tol) {
  Eigen::MatrixXd j;
  for (int it = 0; it < max_iters; ++it) {
    cs.jacobian(y, j);
    const Eigen::VectorXd g = y - x;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j.transpose(),
                                          Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = (sv.size() ? sv[0] : 0.0) * 1e-12;
    Eigen::VectorXd gt = g;
    for (Eigen::Index r = 0; r < sv.size(); ++r)
      if (sv[r] > cut) gt -= svd.matrixU().col(r).dot(g) * svd.matrixU().col(r);
    const double gn = gt.norm();
    if (gn <= 1e-13 * std::max(1.0, g.norm())) return;
    const double base = g.squaredNorm();
    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt < 25; ++bt, alpha *= 0.5) {
      Eigen::VectorXd cand = y - alpha * gt;
      if (!newton_to_zero(cs, cand, 25, tol)) continue;
      if ((cand - x).squaredNorm() < base - 1e-15) {
        y = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted) return;
  }
}

}  // namespace

Projection project_to_variety(const VarietySpec& spec, const Eigen::VectorXd& x,
                              const ProjectionOptions& opts, std::uint64_t seed,
                              std::uint64_t index) {
  spec.validate();
  if (x.size() != spec.space.point_dim())
    throw std::invalid_argument("project_to_variety: point dimension mismatch");
  const CompiledSystem cs(spec);
  const double inner_tol = std::max(1e-14, 0.01 * opts.residual_tol);
  SampleRng rng(seed, stream::kProjection, index);
  const double scale0 =
      spec.space.is_sphere() ? 0.5 : std::max(1.0, x.norm());
  static constexpr double kPerturb[] = {0.05, 0.15, 0.4, 1.0, 2.5};

  Projection best;
  for (int s = 0; s <= opts.restarts; ++s) {
    Eigen::VectorXd y = x;
    if (s > 0) {
      const double lam = scale0 * kPerturb[(s - 1) % 5];
      for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += lam * rng.gaussian();
      if (spec.space.is_sphere()) {
        const double nrm = y.norm();
        if (nrm > 1e-12) y /= nrm;
      }
    }
    // Newton aims below inner_tol; a start is only discarded when even the
    // looser certification residual is out of reach.
    if (!newton_to_zero(cs, y, opts.max_newton_iters, inner_tol) &&
        cs.max_abs_poly(y) > opts.residual_tol)
      continue;
    refine_distance(cs, x, y, opts.max_descent_iters, inner_tol);
    if (spec.space.is_sphere()) {
      const double nrm = y.norm();
      if (!(nrm > 1e-12)) continue;
      y /= nrm;
    }
    const double res = cs.max_abs_poly(y);
    if (res > opts.residual_tol) continue;
    const double d = dist(spec.space, x, y);
    if (d < best.upper_bound) {
      best.found = true;
      best.y = y;
      best.upper_bound = d;
      best.residual = res;
    }
    if (opts.early_exit_dist >= 0.0 && best.found &&
        best.upper_bound <= opts.early_exit_dist)
      return best;
  }
  return best;
}

McEstimate tube_probability_mc(const VarietySpec& spec,
                               const Eigen::VectorXd& p, double sigma,
                               double eps, std::uint64_t trials,
                               std::uint64_t seed, const McOptions& opts) {
  spec.validate();
  if (p.size() != spec.space.point_dim())
    throw std::invalid_argument("tube_probability_mc: center dimension mismatch");
  if (!(sigma > 0.0))
    throw std::invalid_argument("tube_probability_mc: sigma > 0 required");
  if (eps < 0.0)
    throw std::invalid_argument("tube_probability_mc: eps >= 0 required");

  const bool sph = spec.space.is_sphere();
  std::unique_ptr<CapThetaSampler> cap;
  if (sph) {
    if (std::abs(p.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("tube_probability_mc: center must be unit");
    if (sigma > kPi + 1e-15)
      throw std::invalid_argument("tube_probability_mc: spherical sigma > pi");
    cap = std::make_unique<CapThetaSampler>(spec.space.n, sigma);
  }

  ProjectionOptions popts;
  popts.restarts = opts.restarts;
  popts.residual_tol = opts.residual_tol;
  popts.early_exit_dist = eps;

  const int nthreads = opts.threads;
  std::vector<std::uint64_t> hit_acc, nf_acc;
  std::mutex acc_mutex;
  parallel_chunks(trials, nthreads,
                  [&](std::uint64_t b, std::uint64_t e, int) {
                    std::uint64_t hits = 0, nf = 0;
                    for (std::uint64_t i = b; i < e; ++i) {
                      const Eigen::VectorXd x =
                          sph ? cap_sample_at(p, *cap, seed, i)
                              : ball_sample_at(p, sigma, seed, i);
                      const Projection pr =
                          project_to_variety(spec, x, popts, seed, i);
                      if (!pr.found)
                        ++nf;
                      else if (pr.upper_bound <= eps)
                        ++hits;
                    }
                    std::lock_guard<std::mutex> lock(acc_mutex);
                    hit_acc.push_back(hits);
                    nf_acc.push_back(nf);
                  });

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.level = opts.level;
  for (std::uint64_t h : hit_acc) est.hits += h;
  for (std::uint64_t h : nf_acc) est.not_found += h;
  est.p_hat = trials ? static_cast<double>(est.hits) / trials : 0.0;
  std::tie(est.ci_low, est.ci_high) = binomial_ci(est.hits, trials, opts.level);
  return est;
}

PointCloud sample_variety_points(const VarietySpec& spec,
                                 const Eigen::VectorXd& center, double radius,
                                 int count, std::uint64_t seed, int restarts) {
  spec.validate();
  const bool sph = spec.space.is_sphere();
  std::unique_ptr<CapThetaSampler> cap;
  if (sph) cap = std::make_unique<CapThetaSampler>(spec.space.n, radius);

  ProjectionOptions popts;
  popts.restarts = restarts;
  popts.residual_tol = 1e-8;

  PointCloud out{spec.space, {}};
  for (int i = 0; i < count; ++i) {
    const std::uint64_t idx =
        mix64(stream::kVarietySample) + static_cast<std::uint64_t>(i);
    const Eigen::VectorXd x = sph ? cap_sample_at(center, *cap, seed, idx)
                                  : ball_sample_at(center, radius, seed, idx);
    const Projection pr = project_to_variety(spec, x, popts, seed, idx);
    if (!pr.found) continue;
    if (dist(spec.space, center, pr.y) > radius) continue;
    out.points.push_back(pr.y);
  }
  return out;
}

double jacobian_min_sv(const PolySystem& s, const Eigen::VectorXd& x,
                       bool spherical) {
  if (x.size() != s.n_vars)
    throw std::invalid_argument("jacobian_min_sv: point dimension mismatch");
  const int rows = static_cast<int>(s.polys.size()) + (spherical ? 1 : 0);
  Eigen::MatrixXd j(rows, s.n_vars);
  j.topRows(static_cast<int>(s.polys.size())) = s.jacobian(x);
  if (spherical) j.row(rows - 1) = 2.0 * x.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  return svd.singularValues().minCoeff();
}

}  // namespace tubevol
