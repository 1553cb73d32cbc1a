#ifndef TUBEVOL_GEOMETRY_HPP
#define TUBEVOL_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tubevol/rng.hpp"

namespace tubevol {

enum class SpaceKind { Euclidean, Sphere };

// Euclidean(n) is R^n; Sphere(n) is S^n embedded in R^{n+1}.
struct AmbientSpace {
  SpaceKind kind = SpaceKind::Euclidean;
  int n = 1;

  static AmbientSpace euclidean(int n) { return {SpaceKind::Euclidean, n}; }
  static AmbientSpace sphere(int n) { return {SpaceKind::Sphere, n}; }

  bool is_sphere() const { return kind == SpaceKind::Sphere; }
  int point_dim() const { return is_sphere() ? n + 1 : n; }
  bool operator==(const AmbientSpace& o) const = default;
};

struct PointCloud {
  AmbientSpace space;
  std::vector<Eigen::VectorXd> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Geodesic distance; the spherical inner product is clamped to [-1,1].
double dist(const AmbientSpace& space, const Eigen::VectorXd& a,
            const Eigen::VectorXd& b);

// sin of the angle between two unit vectors (inputs checked to 1e-6).
double d_sin(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

// J_{n,k}(eps): 1 for k=0, else the integral of sin^{k-1} cos^{n-k} over
// [0, min(eps, pi/2)], by adaptive Gauss-Legendre to abs. tolerance 1e-12.
double J(int n, int k, double eps);

// Volume of the geodesic cap B(p, sigma) in S^n, 0 < sigma <= pi/2.
double cap_volume(int n, double sigma);

// Probability that a uniformly rotated great subsphere S^{n-m+i} of S^n
// meets B(p, sigma); 0 <= i <= m < n.
double subsphere_cap_prob(int n, int m, int i, double sigma);

// I.i.d. uniform points in the closed ball B(p, sigma) of R^n.
PointCloud sample_ball(const Eigen::VectorXd& p, double sigma, int count,
                       std::uint64_t seed, std::uint64_t index_offset = 0);

// I.i.d. uniform (surface measure) points in the geodesic cap B(p, sigma) of
// S^n, 0 < sigma <= pi; the angle to p has density prop. to sin^{n-1}.
PointCloud sample_cap(const Eigen::VectorXd& p, double sigma, int count,
                      std::uint64_t seed, std::uint64_t index_offset = 0);

// Inverse-CDF sampler for the cap colatitude. Separate from sample_cap so
// single samples can be drawn by (seed, index) in parallel loops.
class CapThetaSampler {
 public:
  // Colatitude density prop. to sin^{n-1} theta on [0, sigma], sigma <= pi.
  CapThetaSampler(int n, double sigma);
  double theta(double u) const;  // u in [0,1]
  double total_mass() const { return cum_.back(); }

 private:
  double segment_integral(double a, double b) const;
  int n_;
  double sigma_;
  std::vector<double> grid_, cum_;
};

// One cap sample at a given counter index (used by the parallel MC paths).
Eigen::VectorXd cap_sample_at(const Eigen::VectorXd& p,
                              const CapThetaSampler& sampler,
                              std::uint64_t seed, std::uint64_t index);
Eigen::VectorXd ball_sample_at(const Eigen::VectorXd& p, double sigma,
                               std::uint64_t seed, std::uint64_t index);

double directed_hausdorff(const PointCloud& a, const PointCloud& b);
double hausdorff_distance(const PointCloud& a, const PointCloud& b);
double dist_to_cloud(const AmbientSpace& space, const Eigen::VectorXd& x,
                     const PointCloud& cloud);

// One point per row.
std::string cloud_to_csv(const PointCloud& cloud);

Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed,
                                  std::uint64_t index = 0);

// Uniform point on S^{dim} (embedded in R^{dim+1}).
Eigen::VectorXd random_unit_vector(int dim, SampleRng& rng);

}  // namespace tubevol

#endif  // TUBEVOL_GEOMETRY_HPP
