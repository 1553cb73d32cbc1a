#include "tubevol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tubevol {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 7/15-point Gauss-Legendre nodes and weights on [-1,1].
constexpr double kGl7X[4] = {0.0, 0.405845151377397166906606412077,
                             0.741531185599394439863864773281,
                             0.949107912342758524526189684048};
constexpr double kGl7W[4] = {0.417959183673469387755102040816,
                             0.381830050505118944950369775489,
                             0.279705391489276667901467771424,
                             0.129484966168869693270611432679};
constexpr double kGl15X[8] = {0.0, 0.201194093997434522300628303395,
                              0.394151347077563369897207370981,
                              0.570972172608538847537226737254,
                              0.724417731360170047416186054614,
                              0.848206583410427216200648320774,
                              0.937273392400705904307758947710,
                              0.987992518020485428489565718587};
constexpr double kGl15W[8] = {0.202578241925561272880620199968,
                              0.198431485327111576456118326444,
                              0.186161000015562211026800561866,
                              0.166269205816993933553200860481,
                              0.139570677926154314447804794511,
                              0.107159220467171935011869546686,
                              0.070366047488108124709267416451,
                              0.030753241996117268354628393577};

template <typename F>
double gl7(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kGl7W[0] * f(c);
  for (int i = 1; i < 4; ++i)
    s += kGl7W[i] * (f(c - h * kGl7X[i]) + f(c + h * kGl7X[i]));
  return s * h;
}

template <typename F>
double gl15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = kGl15W[0] * f(c);
  for (int i = 1; i < 8; ++i)
    s += kGl15W[i] * (f(c - h * kGl15X[i]) + f(c + h * kGl15X[i]));
  return s * h;
}

template <typename F>
double adaptive_gl_rec(const F& f, double a, double b, double tol, int depth) {
  const double whole = gl15(f, a, b);
  const double coarse = gl7(f, a, b);
  if (std::abs(whole - coarse) <= tol || depth >= 48) return whole;
  const double mid = 0.5 * (a + b);
  return adaptive_gl_rec(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive_gl_rec(f, mid, b, 0.5 * tol, depth + 1);
}

// Adaptive Gauss-Legendre with interval bisection, absolute tolerance.
template <typename F>
double adaptive_gl(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  return adaptive_gl_rec(f, a, b, tol, 0);
}

double powi(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

}  // namespace

double dist(const AmbientSpace& space, const Eigen::VectorXd& a,
            const Eigen::VectorXd& b) {
  if (a.size() != space.point_dim() || b.size() != space.point_dim())
    throw std::invalid_argument("dist: point dimension mismatch");
  if (!space.is_sphere()) return (a - b).norm();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  return std::acos(c);
}

double d_sin(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("d_sin: dimension mismatch");
  if (std::abs(a.norm() - 1.0) > 1e-6 || std::abs(b.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("d_sin: inputs must be unit vectors");
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  return std::sqrt(std::max(0.0, (1.0 - c) * (1.0 + c)));
}

double sphere_volume(int n) {
  if (n < 0) throw std::invalid_argument("sphere_volume: n < 0");
  return std::exp(std::log(2.0) + 0.5 * (n + 1) * std::log(kPi) -
                  std::lgamma(0.5 * (n + 1)));
}

double J(int n, int k, double eps) {
  if (k < 0 || n < 0 || k > n)
    throw std::invalid_argument("J: need 0 <= k <= n");
  if (eps < 0.0) throw std::invalid_argument("J: eps < 0");
  if (k == 0) return 1.0;
  const double b = std::min(eps, 0.5 * kPi);
  if (b <= 0.0) return 0.0;
  const auto f = [n, k](double t) {
    return powi(std::sin(t), k - 1) * powi(std::cos(t), n - k);
  };
  return adaptive_gl(f, 0.0, b, 1e-12);
}

double cap_volume(int n, double sigma) {
  if (n < 1) throw std::invalid_argument("cap_volume: n < 1");
  if (!(sigma > 0.0) || sigma > 0.5 * kPi + 1e-15)
    throw std::invalid_argument("cap_volume: sigma outside (0, pi/2]");
  return sphere_volume(n - 1) * J(n, n, sigma);
}

double subsphere_cap_prob(int n, int m, int i, double sigma) {
  if (!(0 <= i && i <= m && m < n))
    throw std::invalid_argument("subsphere_cap_prob: need 0 <= i <= m < n");
  if (!(sigma > 0.0)) throw std::invalid_argument("subsphere_cap_prob: sigma <= 0");
  if (m == i) return 1.0;  // the subsphere is all of S^n
  const double logc = std::log(2.0) + std::lgamma(0.5 * (n + 1)) -
                      std::lgamma(0.5 * (n - m + i + 1)) -
                      std::lgamma(0.5 * (m - i));
  return std::min(1.0, std::exp(logc) * J(n, m - i, sigma));
}

Eigen::VectorXd random_unit_vector(int dim, SampleRng& rng) {
  Eigen::VectorXd v(dim + 1);
  while (true) {
    for (int i = 0; i <= dim; ++i) v[i] = rng.gaussian();
    const double nrm = v.norm();
    if (nrm > 1e-12) return v / nrm;
  }
}

Eigen::VectorXd ball_sample_at(const Eigen::VectorXd& p, double sigma,
                               std::uint64_t seed, std::uint64_t index) {
  const int n = static_cast<int>(p.size());
  SampleRng rng(seed, stream::kBallSample, index);
  Eigen::VectorXd dir(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) dir[i] = rng.gaussian();
    nrm = dir.norm();
  } while (nrm <= 1e-12);
  const double r = sigma * std::pow(rng.uniform(), 1.0 / n);
  return p + (r / nrm) * dir;
}

PointCloud sample_ball(const Eigen::VectorXd& p, double sigma, int count,
                       std::uint64_t seed, std::uint64_t index_offset) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_ball: sigma <= 0");
  PointCloud out{AmbientSpace::euclidean(static_cast<int>(p.size())), {}};
  out.points.reserve(count);
  for (int i = 0; i < count; ++i)
    out.points.push_back(ball_sample_at(p, sigma, seed, index_offset + i));
  return out;
}

CapThetaSampler::CapThetaSampler(int n, double sigma) : n_(n), sigma_(sigma) {
  if (n < 1) throw std::invalid_argument("cap sampler: n < 1");
  if (!(sigma > 0.0) || sigma > kPi + 1e-15)
    throw std::invalid_argument("cap sampler: sigma outside (0, pi]");
  const int panels = 2048;
  grid_.resize(panels + 1);
  cum_.resize(panels + 1);
  cum_[0] = 0.0;
  for (int j = 0; j <= panels; ++j) grid_[j] = sigma_ * j / panels;
  for (int j = 0; j < panels; ++j)
    cum_[j + 1] = cum_[j] + segment_integral(grid_[j], grid_[j + 1]);
}

double CapThetaSampler::segment_integral(double a, double b) const {
  const int k = n_;
  const auto f = [k](double t) { return powi(std::sin(t), k - 1); };
  return gl15(f, a, b);
}

double CapThetaSampler::theta(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const double target = u * cum_.back();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  std::size_t j = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(0, it - cum_.begin() - 1));
  if (j >= grid_.size() - 1) j = grid_.size() - 2;
  double lo = grid_[j], hi = grid_[j + 1];
  const double local = target - cum_[j];
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 60; ++iter) {
    const double val = segment_integral(grid_[j], t) - local;
    if (val > 0.0)
      hi = t;
    else
      lo = t;
    const double dens = powi(std::sin(t), n_ - 1);
    double next = (dens > 1e-300) ? t - val / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-15) return next;
    t = next;
  }
  return t;
}

Eigen::VectorXd cap_sample_at(const Eigen::VectorXd& p,
                              const CapThetaSampler& sampler,
                              std::uint64_t seed, std::uint64_t index) {
  const int dim = static_cast<int>(p.size());  // = n + 1
  SampleRng rng(seed, stream::kCapSample, index);
  const double theta = sampler.theta(rng.uniform());
  // Tangent direction at p: a gaussian vector projected to p-perp.
  Eigen::VectorXd v(dim);
  double nrm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
    v -= v.dot(p) * p;
    nrm = v.norm();
  } while (nrm <= 1e-12);
  Eigen::VectorXd x = std::cos(theta) * p + (std::sin(theta) / nrm) * v;
  return x / x.norm();
}

PointCloud sample_cap(const Eigen::VectorXd& p, double sigma, int count,
                      std::uint64_t seed, std::uint64_t index_offset) {
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) throw std::invalid_argument("sample_cap: ambient S^n needs n >= 1");
  if (std::abs(p.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sample_cap: center must be a unit vector");
  CapThetaSampler sampler(n, sigma);
  PointCloud out{AmbientSpace::sphere(n), {}};
  out.points.reserve(count);
  for (int i = 0; i < count; ++i)
    out.points.push_back(cap_sample_at(p, sampler, seed, index_offset + i));
  return out;
}

double dist_to_cloud(const AmbientSpace& space, const Eigen::VectorXd& x,
                     const PointCloud& cloud) {
  if (cloud.empty())
    throw std::invalid_argument("dist_to_cloud: empty cloud");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : cloud.points) best = std::min(best, dist(space, x, y));
  return best;
}

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
  if (!(a.space == b.space))
    throw std::invalid_argument("hausdorff: clouds in different spaces");
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff: empty cloud");
  double worst = 0.0;
  for (const auto& x : a.points)
    worst = std::max(worst, dist_to_cloud(a.space, x, b));
  return worst;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::string cloud_to_csv(const PointCloud& cloud) {
  std::string out;
  char buf[40];
  for (const auto& p : cloud.points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      if (i) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed,
                                  std::uint64_t index) {
  SampleRng rng(seed, stream::kRotation, index);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace tubevol
