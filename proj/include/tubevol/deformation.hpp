#ifndef TUBEVOL_DEFORMATION_HPP
#define TUBEVOL_DEFORMATION_HPP

#include <cstdint>
#include <vector>

#include "tubevol/variety.hpp"

namespace tubevol {

// Polar-system smoothing family for a variety Z = Z(F): D(Q,G,t) = (1-t)Q - tG
// with Q the sum of squares of F and G a positive polynomial of degree 2d,
// all expressed in a seeded random orthogonal coordinate frame.
struct DeformationFamily {
  SparsePoly q;                    // rotated frame
  SparsePoly g;                    // rotated frame
  Eigen::MatrixXd rotation;        // affine frame map: original x = R * y
  Eigen::MatrixXd chart_rotation;  // ambient rotation (spherical case only)
  int m = 0;
  std::vector<double> t_grid;      // strictly decreasing, in (0,1)
  AmbientSpace space;              // space of the original variety
  int family_degree = 2;           // 2d

  // Family-frame point -> original-space point(s); two antipodal points in
  // the spherical case.
  std::vector<Eigen::VectorXd> to_original(const Eigen::VectorXd& y) const;
};

// Family for an affine variety Z(F) in R^n, dim bound m.
DeformationFamily build_family(const PolySystem& f, int m, std::uint64_t seed,
                               std::vector<double> t_grid = {});

// Family for Z(P) in S^n (P homogeneous): a random hyperplane becomes the
// chart at infinity, the family is built on the affine chart, and sampled
// points are lifted back to S^n with antipodal doubling.
DeformationFamily spherical_family(const PolySystem& p_hom, int m,
                                   std::uint64_t seed,
                                   std::vector<double> t_grid = {});

// Cr_{n-m-1}(D(Q,G,t)): exactly n-m polynomials of degree <= 2d.
PolySystem family_system(const DeformationFamily& fam, double t);

struct ConvergenceRow {
  double t = 0.0;
  double hausdorff = 0.0;
  double dir_true_to_approx = 0.0;  // sup over Z samples of dist to V_t
  double dir_approx_to_true = 0.0;  // sup over V_t samples of dist to Z
  double min_sv = 0.0;              // min audited Jacobian singular value
  int z_points = 0;
  int vt_points = 0;
  bool ok = true;  // false when a cloud came out empty
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  PointCloud z_cloud;
  std::vector<PointCloud> vt_clouds;  // per t row, in the original space
};

// For each grid t: sample V_t and Z, record Hausdorff distance (restricted
// to B(0,R) in the affine case; global on the sphere) and the smoothness
// audit. R is the chart sampling radius in the spherical case.
ConvergenceResult convergence_experiment(const DeformationFamily& fam,
                                         const VarietySpec& original, double r,
                                         int cloud_size, std::uint64_t seed);

// Counts probe points of B(p, sigma) within eps of z_cloud but farther than
// eps + tau from zt_cloud.
int tube_inclusion_check(const PointCloud& z_cloud, const PointCloud& zt_cloud,
                         const Eigen::VectorXd& p, double sigma, double eps,
                         double tau, int probe_count, std::uint64_t seed);

}  // namespace tubevol

#endif  // TUBEVOL_DEFORMATION_HPP
