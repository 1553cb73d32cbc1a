#ifndef TUBEVOL_VARIETY_HPP
#define TUBEVOL_VARIETY_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "tubevol/geometry.hpp"
#include "tubevol/poly.hpp"

namespace tubevol {

// An algebraic set: common zeros of `system` in the ambient space, with the
// declared dimension bound m and degree bound delta of the tube theorems.
struct VarietySpec {
  PolySystem system;
  AmbientSpace space;
  int dim_bound = 0;     // m
  int degree_bound = 1;  // delta
  // Set when the defining system is known to cut Z out as a nonsingular
  // complete intersection (enables the complete-intersection bounds).
  bool smooth_complete_intersection = false;

  void validate() const;
};

struct McEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double level = 0.99;
  std::uint64_t seed = 0;
  std::uint64_t not_found = 0;  // samples where no certified point was found
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval.
std::pair<double, double> binomial_ci(std::uint64_t hits, std::uint64_t trials,
                                      double level);

// Brute-force distance oracle on a grid; intended for tests only.
// Euclidean: box [-R, R]^n around the origin, cell size h, n <= 3.
// Sphere: angular grid with step h, n <= 3 (cost grows like (pi/h)^n).
// A cell is flagged when every member polynomial either changes sign over
// the cell corners or is below a gradient-scaled threshold at the center;
// distance(x) is the minimum distance from x to a flagged cell center.
class GridOracle {
 public:
  GridOracle(const VarietySpec& spec, double box_halfwidth, double resolution);
  double distance(const Eigen::VectorXd& x) const;
  const std::vector<Eigen::VectorXd>& flagged_centers() const {
    return centers_;
  }

 private:
  void scan_euclidean(const VarietySpec& spec);
  void scan_sphere(const VarietySpec& spec);
  bool cell_flagged(const VarietySpec& spec,
                    const std::vector<Eigen::VectorXd>& corners,
                    const Eigen::VectorXd& center) const;

  AmbientSpace space_;
  double r_, h_;
  std::vector<PolySystem> grads_;
  std::vector<double> grad_bounds_;  // coarse box bounds on the gradient norm
  std::vector<Eigen::VectorXd> centers_;
};

double grid_distance(const VarietySpec& spec, const Eigen::VectorXd& x,
                     double box_halfwidth, double resolution);

struct ProjectionOptions {
  int restarts = 50;
  // Large enough for the slow linear tail near degenerate points (cusp tips);
  // smooth zeros converge in a handful of iterations.
  int max_newton_iters = 300;
  int max_descent_iters = 80;
  double residual_tol = 1e-10;
  // When >= 0, return as soon as a certified point within this distance of x
  // has been found (the hit decision is already determined).
  double early_exit_dist = -1.0;
};

struct Projection {
  bool found = false;
  Eigen::VectorXd y;
  double upper_bound = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

// Multi-start Gauss-Newton onto the zero set followed by tangential distance
// descent. On success, max_i |P_i(y)| <= residual_tol and upper_bound is a
// certified upper bound for dist(x, Z) in the space's metric.
Projection project_to_variety(const VarietySpec& spec, const Eigen::VectorXd& x,
                              const ProjectionOptions& opts = {},
                              std::uint64_t seed = 0, std::uint64_t index = 0);

struct McOptions {
  int restarts = 2;
  double level = 0.99;
  int threads = 0;  // 0 = hardware concurrency
  double residual_tol = 1e-10;
};

// Monte Carlo estimate of P(dist(x, Z) <= eps) for x uniform in B(p, sigma).
// A trial is a hit exactly when the certified upper bound is <= eps, so the
// estimate is one-sidedly sound (it can only undercount).
McEstimate tube_probability_mc(const VarietySpec& spec,
                               const Eigen::VectorXd& p, double sigma,
                               double eps, std::uint64_t trials,
                               std::uint64_t seed, const McOptions& opts = {});

// Projects region samples onto Z and keeps certified successes (residual
// <= 1e-8) that stay within the region; may return fewer than count points.
PointCloud sample_variety_points(const VarietySpec& spec,
                                 const Eigen::VectorXd& center, double radius,
                                 int count, std::uint64_t seed,
                                 int restarts = 8);

// Smallest singular value of the system Jacobian at x; the spherical flag
// appends the gradient of |x|^2 - 1 as a row.
double jacobian_min_sv(const PolySystem& s, const Eigen::VectorXd& x,
                       bool spherical);

}  // namespace tubevol

#endif  // TUBEVOL_VARIETY_HPP
