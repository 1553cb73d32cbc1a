#ifndef TUBEVOL_CURVATURE_HPP
#define TUBEVOL_CURVATURE_HPP

#include <cstdint>
#include <vector>

#include "tubevol/geometry.hpp"
#include "tubevol/poly.hpp"

namespace tubevol {

// Orthonormal splitting of T_x S^n at a point of M = Z(s) cap S^n into the
// tangent and normal spaces of M. All columns are orthogonal to x.
struct NormalFrame {
  Eigen::VectorXd x;
  Eigen::MatrixXd tangent;  // point_dim x dim(M)
  Eigen::MatrixXd normal;   // point_dim x codim(M in S^n)
};

// Requires |P_i(x)| <= 1e-8 and a full-rank constraint Jacobian at x
// (throws on a singular point).
NormalFrame normal_frame(const PolySystem& s, const Eigen::VectorXd& x);

// Weingarten map (shape operator) of M in S^n in the unit normal direction
// nu, expressed in the frame's tangent basis; symmetric by construction.
Eigen::MatrixXd weingarten(const PolySystem& s, const NormalFrame& frame,
                           const Eigen::VectorXd& nu);

// Coefficients psi_0..psi_m of det(1 - t L) = sum_i t^i psi_i, via traces of
// powers (Newton's identities); psi_0 = 1 and psi_1 = -trace(L) exactly.
std::vector<double> psi_coeffs(const Eigen::MatrixXd& l);

// Monte Carlo total absolute curvature |K_i|(M) for a closed CURVE M in S^n:
// traces the curve from the anchor points with arc-length steps, averaging
// |psi_i| over uniform unit normals at each step. Singular anchor points are
// skipped and counted. Supports dim(M) = 1 only.
double total_abs_curvature_mc(const PolySystem& s, const PointCloud& anchors,
                              int i, int normals_per_point, std::uint64_t seed,
                              int* skipped = nullptr);

// Seeded anchor points on Z(s) cap S^n for the tracer: corrects uniform
// sphere samples onto the curve and keeps well-separated successes.
PointCloud curve_anchor_points(const PolySystem& s, int count,
                               std::uint64_t seed);

// Spherical Weyl tube formula: sum_i J(n, c+i, eps) * K[i].
double weyl_tube_volume(const std::vector<double>& k, int n, int c, double eps);

}  // namespace tubevol

#endif  // TUBEVOL_CURVATURE_HPP
