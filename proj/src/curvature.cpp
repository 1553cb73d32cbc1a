#include "tubevol/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace tubevol {

namespace {

// Constraint system {P_1..P_c, |y|^2 - 1} with precompiled gradients.
struct CurveSystem {
  std::vector<SparsePoly> polys;
  std::vector<std::vector<SparsePoly>> grads;
  int dim;

  explicit CurveSystem(const PolySystem& s) : polys(s.polys), dim(s.n_vars) {
    for (const SparsePoly& p : polys) {
      std::vector<SparsePoly> g;
      for (int v = 0; v < dim; ++v) g.push_back(p.derivative(v));
      grads.push_back(std::move(g));
    }
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& y) const {
    Eigen::VectorXd f(polys.size() + 1);
    for (std::size_t i = 0; i < polys.size(); ++i)
      f[static_cast<Eigen::Index>(i)] = polys[i].eval(y);
    f[static_cast<Eigen::Index>(polys.size())] = y.squaredNorm() - 1.0;
    return f;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd j(polys.size() + 1, dim);
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (int v = 0; v < dim; ++v)
        j(static_cast<Eigen::Index>(i), v) = grads[i][v].eval(y);
    j.row(static_cast<Eigen::Index>(polys.size())) = 2.0 * y.transpose();
    return j;
  }

  bool correct(Eigen::VectorXd& y, int max_iters = 40,
               double tol = 1e-12) const {
    Eigen::VectorXd f = residual(y);
    double phi = f.squaredNorm();
    for (int it = 0; it < max_iters; ++it) {
      if (f.cwiseAbs().maxCoeff() <= tol) return true;
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jacobian(y));
      const Eigen::VectorXd delta = cod.solve(-f);
      double alpha = 1.0;
      bool ok = false;
      for (int bt = 0; bt < 25; ++bt, alpha *= 0.5) {
        const Eigen::VectorXd cand = y + alpha * delta;
        const Eigen::VectorXd fc = residual(cand);
        if (fc.squaredNorm() <= (1.0 - 1e-4 * alpha) * phi) {
          y = cand;
          f = fc;
          phi = f.squaredNorm();
          ok = true;
          break;
        }
      }
      if (!ok) break;
    }
    return f.cwiseAbs().maxCoeff() <= tol;
  }
};

}  // namespace

NormalFrame normal_frame(const PolySystem& s, const Eigen::VectorXd& x) {
  const int dim = s.n_vars;
  if (x.size() != dim)
    throw std::invalid_argument("normal_frame: point dimension mismatch");
  if (std::abs(x.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("normal_frame: point must lie on the sphere");
  for (const SparsePoly& p : s.polys)
    if (std::abs(p.eval(x)) > 1e-8)
      throw std::invalid_argument("normal_frame: point is not on the variety");

  const int c = static_cast<int>(s.polys.size());
  Eigen::MatrixXd ghat(dim, c);
  for (int i = 0; i < c; ++i) {
    Eigen::VectorXd g(dim);
    for (int v = 0; v < dim; ++v) g[v] = s.polys[i].derivative(v).eval(x);
    g -= g.dot(x) * x;
    ghat.col(i) = g;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ghat, Eigen::ComputeThinU);
  if (svd.rank() < c || svd.singularValues().minCoeff() <
                            1e-8 * std::max(1.0, svd.singularValues()[0]))
    throw std::invalid_argument("normal_frame: singular point (rank-deficient)");

  NormalFrame frame;
  frame.x = x;
  frame.normal = svd.matrixU().leftCols(c);

  // Tangent space: orthogonal complement of span{x, normals} in R^{dim}.
  Eigen::MatrixXd span(dim, c + 1);
  span.col(0) = x;
  span.rightCols(c) = frame.normal;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
  const Eigen::MatrixXd q = qr.householderQ();
  frame.tangent = q.rightCols(dim - c - 1);
  return frame;
}

Eigen::MatrixXd weingarten(const PolySystem& s, const NormalFrame& frame,
                           const Eigen::VectorXd& nu) {
  const int dim = s.n_vars;
  if (frame.x.size() != dim || nu.size() != dim)
    throw std::invalid_argument("weingarten: frame/system mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("weingarten: nu must be a unit vector");
  const Eigen::VectorXd in_span = frame.normal * (frame.normal.transpose() * nu);
  if ((nu - in_span).norm() > 1e-6)
    throw std::invalid_argument("weingarten: nu outside the normal space");

  const Eigen::VectorXd& x = frame.x;
  const int c = static_cast<int>(s.polys.size());
  const int md = static_cast<int>(frame.tangent.cols());

  Eigen::MatrixXd ghat(dim, c);
  Eigen::VectorXd radial(c);  // <grad P_i, x>
  for (int i = 0; i < c; ++i) {
    Eigen::VectorXd g(dim);
    for (int v = 0; v < dim; ++v) g[v] = s.polys[i].derivative(v).eval(x);
    radial[i] = g.dot(x);
    ghat.col(i) = g - radial[i] * x;
  }
  const Eigen::MatrixXd gram = ghat.transpose() * ghat;
  const Eigen::VectorXd lambda =
      gram.ldlt().solve(ghat.transpose() * nu);

  // Second fundamental form in the tangent basis: for a curve gamma in M with
  // gamma' = u, <gamma'', grad P_i> = -u^T Hess P_i u while <gamma'', x> =
  // -|u|^2, giving <II(u,v), nu> = sum_i lambda_i (-u^T Hess P_i v +
  // <grad P_i, x> <u,v>).
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(md, md);
  for (int i = 0; i < c; ++i) {
    if (lambda[i] == 0.0) continue;
    Eigen::MatrixXd hess(dim, dim);
    for (int a = 0; a < dim; ++a) {
      const SparsePoly da = s.polys[i].derivative(a);
      for (int b = a; b < dim; ++b) {
        hess(a, b) = da.derivative(b).eval(x);
        hess(b, a) = hess(a, b);
      }
    }
    const Eigen::MatrixXd ht =
        frame.tangent.transpose() * hess * frame.tangent;
    l += lambda[i] * (-ht + radial[i] * Eigen::MatrixXd::Identity(md, md));
  }
  return 0.5 * (l + l.transpose());
}

std::vector<double> psi_coeffs(const Eigen::MatrixXd& l) {
  if (l.rows() != l.cols())
    throw std::invalid_argument("psi_coeffs: matrix must be square");
  const int m = static_cast<int>(l.rows());
  std::vector<double> traces(m + 1, 0.0);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  for (int k = 1; k <= m; ++k) {
    power = power * l;
    traces[k] = power.trace();
  }
  std::vector<double> e(m + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= k; ++j) {
      acc += sign * e[k - j] * traces[j];
      sign = -sign;
    }
    e[k] = acc / k;
  }
  std::vector<double> psi(m + 1);
  for (int k = 0; k <= m; ++k) psi[k] = (k % 2 == 0) ? e[k] : -e[k];
  return psi;
}

PointCloud curve_anchor_points(const PolySystem& s, int count,
                               std::uint64_t seed) {
  const int dim = s.n_vars;
  const CurveSystem cs(s);
  PointCloud out{AmbientSpace::sphere(dim - 1), {}};
  for (int i = 0; i < 20 * count && static_cast<int>(out.size()) < count; ++i) {
    SampleRng rng(seed, stream::kVarietySample, 0x9000u + i);
    Eigen::VectorXd y = random_unit_vector(dim - 1, rng);
    if (!cs.correct(y)) continue;
    y /= y.norm();
    bool separated = true;
    for (const auto& a : out.points)
      if ((a - y).norm() < 0.05) {
        separated = false;
        break;
      }
    if (separated) out.points.push_back(y);
  }
  return out;
}

double total_abs_curvature_mc(const PolySystem& s, const PointCloud& anchors,
                              int i, int normals_per_point, std::uint64_t seed,
                              int* skipped) {
  const int dim = s.n_vars;
  const int c = static_cast<int>(s.polys.size());
  const int mdim = dim - 1 - c;  // dim of M
  if (mdim != 1)
    throw std::invalid_argument(
        "total_abs_curvature_mc: only curves (dim M = 1) are supported");
  if (i < 0 || i > mdim)
    throw std::invalid_argument("total_abs_curvature_mc: index out of range");
  if (normals_per_point < 1)
    throw std::invalid_argument("total_abs_curvature_mc: need normals >= 1");

  const CurveSystem cs(s);
  const double fiber_vol = sphere_volume(c - 1);  // vol of the normal fiber
  const double step = 3e-3;
  const AmbientSpace sph = AmbientSpace::sphere(dim - 1);
  int skip_count = 0;
  double total = 0.0;
  std::vector<Eigen::VectorXd> visited;

  auto fiber_average = [&](const NormalFrame& frame,
                           std::uint64_t counter) -> double {
    double acc = 0.0;
    if (c == 1) {
      // The fiber S^0 is {nu, -nu} and |psi_i| is even in nu.
      const std::vector<double> psi =
          psi_coeffs(weingarten(s, frame, frame.normal.col(0)));
      return std::abs(psi[i]);
    }
    SampleRng rng(seed, stream::kNormalFiber, counter);
    for (int j = 0; j < normals_per_point; ++j) {
      Eigen::VectorXd w(c);
      double nrm = 0.0;
      do {
        for (int k = 0; k < c; ++k) w[k] = rng.gaussian();
        nrm = w.norm();
      } while (nrm <= 1e-12);
      const Eigen::VectorXd nu = frame.normal * (w / nrm);
      const std::vector<double> psi = psi_coeffs(weingarten(s, frame, nu));
      acc += std::abs(psi[i]);
    }
    return acc / normals_per_point;
  };

  std::uint64_t counter = 0;
  for (const auto& anchor : anchors.points) {
    bool near_visited = false;
    for (const auto& v : visited)
      if (dist(sph, anchor, v) < 4.0 * step) {
        near_visited = true;
        break;
      }
    if (near_visited) continue;

    Eigen::VectorXd x0 = anchor;
    if (!cs.correct(x0)) {
      ++skip_count;
      continue;
    }
    x0 /= x0.norm();
    NormalFrame frame;
    try {
      frame = normal_frame(s, x0);
    } catch (const std::invalid_argument&) {
      ++skip_count;
      continue;
    }
    Eigen::VectorXd tau = frame.tangent.col(0);
    Eigen::VectorXd x = x0;
    const int max_steps = 200000;
    for (int k = 0; k < max_steps; ++k) {
      const double avg = fiber_average(frame, counter++);
      Eigen::VectorXd next = std::cos(step) * x + std::sin(step) * tau;
      if (!cs.correct(next)) {
        ++skip_count;
        break;
      }
      next /= next.norm();
      const double arc = dist(sph, x, next);
      total += fiber_vol * avg * arc;
      if (k % 50 == 0) visited.push_back(x);
      try {
        frame = normal_frame(s, next);
      } catch (const std::invalid_argument&) {
        ++skip_count;
        break;
      }
      Eigen::VectorXd tnext = frame.tangent.col(0);
      if (tnext.dot(next - x) < 0.0) tnext = -tnext;
      x = next;
      tau = tnext;
      if (k > 5 && dist(sph, x, x0) < 0.75 * step) break;  // loop closed
    }
    visited.push_back(x0);
  }
  if (skipped) *skipped = skip_count;
  return total;
}

double weyl_tube_volume(const std::vector<double>& k, int n, int c,
                        double eps) {
  if (k.empty()) throw std::invalid_argument("weyl_tube_volume: empty K list");
  if (c < 1 || c + static_cast<int>(k.size()) - 1 > n)
    throw std::invalid_argument("weyl_tube_volume: invalid codimension");
  double acc = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    acc += J(n, c + static_cast<int>(i), eps) * k[i];
  return acc;
}

}  // namespace tubevol
