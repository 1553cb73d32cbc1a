#include "tubevol/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace tubevol {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kE = 2.718281828459045235360287471352662498;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// 4 sum_{i=0}^m C(n, n-m+i) (2 d r/s)^{n-m+i} (1 + r/s)^{m-i}, shared by the
// complete-intersection bound (degree d) and the general sum form (degree
// 2 delta). Everything goes through log space so n up to ~50 is safe.
double tube_sum_form(int n, int m, int d, double r, double s) {
  if (r == 0.0) return 0.0;
  const double lx = std::log(2.0 * d * r / s);
  const double ly = std::log1p(r / s);
  double acc = 0.0;
  for (int i = 0; i <= m; ++i)
    acc += std::exp(log_binomial(n, n - m + i) + (n - m + i) * lx +
                    (m - i) * ly);
  return 4.0 * acc;
}

// (a)^{n-m} (1+b)^m with a prefactor, in log space; zero when a == 0.
double product_form(double prefactor, int n, int m, double a, double b) {
  if (a == 0.0) return 0.0;
  return prefactor * std::exp((n - m) * std::log(a) + m * std::log1p(b));
}

BoundEntry make_entry(std::string name, double raw,
                      std::vector<PrecondFlag> preconds = {}) {
  BoundEntry e;
  e.name = std::move(name);
  e.raw = raw;
  e.clamped = std::min(raw, 1.0);
  e.preconds = std::move(preconds);
  return e;
}

void require_euclidean(const BoundQuery& q, const char* who) {
  if (q.space.is_sphere())
    throw std::invalid_argument(std::string(who) +
                                ": euclidean query required");
}

void require_spherical(const BoundQuery& q, const char* who) {
  if (!q.space.is_sphere())
    throw std::invalid_argument(std::string(who) +
                                ": spherical query required");
}

}  // namespace

void BoundQuery::validate() const {
  if (!(0 <= m && m < n)) throw std::invalid_argument("query: need 0 <= m < n");
  if (delta < 1) throw std::invalid_argument("query: delta >= 1 required");
  if (eps < 0.0) throw std::invalid_argument("query: eps >= 0 required");
  if (!(sigma > 0.0)) throw std::invalid_argument("query: sigma > 0 required");
  if (space.n != n) throw std::invalid_argument("query: space dimension mismatch");
  if (space.is_sphere()) {
    if (sigma > 0.5 * kPi + 1e-12)
      throw std::invalid_argument("query: spherical sigma outside (0, pi/2]");
    if (eps > 0.5 * kPi + 1e-12)
      throw std::invalid_argument("query: spherical eps outside [0, pi/2]");
  }
}

double lotz_bound(const BoundQuery& q) {
  q.validate();
  require_euclidean(q, "lotz_bound");
  return tube_sum_form(q.n, q.m, q.delta, q.eps, q.sigma);
}

BoundReport affine_bounds(const BoundQuery& q) {
  q.validate();
  require_euclidean(q, "affine_bounds");
  BoundReport rep;
  rep.query = q;

  rep.entries.push_back(make_entry(
      formula::kAffineSum, tube_sum_form(q.n, q.m, 2 * q.delta, q.eps, q.sigma)));

  const double ratio = q.eps / q.sigma;
  rep.entries.push_back(make_entry(
      formula::kAffineProduct,
      product_form(4.0, q.n, q.m, 4.0 * q.n * q.delta * ratio,
                   (4.0 * q.delta + 1.0) * ratio)));

  // eps <= sigma/((4 delta + 1) m); vacuous for m = 0.
  const bool small_ok =
      q.m == 0 || q.eps <= q.sigma / ((4.0 * q.delta + 1.0) * q.m);
  if (small_ok) {
    std::vector<PrecondFlag> flags{
        {q.m == 0 ? "small_eps_range_vacuous_m0" : "small_eps_range", true}};
    rep.entries.push_back(make_entry(
        formula::kAffineSmallEps,
        product_form(4.0 * kE, q.n, q.m, 4.0 * q.n * q.delta * ratio, 0.0),
        std::move(flags)));
  }
  return rep;
}

double comte_yomdin_bound(const BoundQuery& q) {
  q.validate();
  require_euclidean(q, "comte_yomdin_bound");
  if (q.eps == 0.0) return 0.0;
  const int c = q.n - q.m;
  const double ratio = q.eps / q.sigma;
  const double log_pref =
      std::log(static_cast<double>(q.n)) + 0.5 * (q.n - 1) * std::log(kPi) +
      1.5 * q.n * std::log(2.0) + std::lgamma(q.n + 1.0) +
      0.5 * std::lgamma(q.n + 2.0) + std::lgamma(0.5 * c);
  return std::exp(log_pref + c * std::log(2.0 * q.delta * ratio) +
                  q.m * std::log1p((4.0 * q.delta + 1.0) * ratio));
}

BoundReport spherical_ci_bounds(const BoundQuery& q) {
  q.validate();
  require_spherical(q, "spherical_ci_bounds");
  BoundReport rep;
  rep.query = q;
  const int d = q.delta;
  const double vn = 1.0 + 0.5 * sphere_volume(q.n);
  const double x = std::sin(q.eps) / std::sin(q.sigma);

  rep.entries.push_back(make_entry(
      formula::kSphCi,
      product_form(2.0 * vn, q.n, q.m, 4.0 * q.n * d * x,
                   (4.0 * q.n * d + 4.0 * d + 1.0) * x)));

  const bool small_ok =
      q.m == 0 || std::sin(q.eps) <=
                      std::sin(q.sigma) / ((4.0 * q.n * d + 4.0 * d + 1.0) * q.m);
  if (small_ok) {
    std::vector<PrecondFlag> flags{
        {q.m == 0 ? "small_eps_range_vacuous_m0" : "small_eps_range", true}};
    rep.entries.push_back(
        make_entry(formula::kSphCiSmallEps,
                   product_form(2.0 * kE * vn, q.n, q.m, 4.0 * q.n * d * x, 0.0),
                   std::move(flags)));
  }
  return rep;
}

BoundReport spherical_general_bounds(const BoundQuery& q) {
  q.validate();
  require_spherical(q, "spherical_general_bounds");
  BoundReport rep;
  rep.query = q;
  const double vn = 1.0 + 0.5 * sphere_volume(q.n);
  // Dimension-independent constant: 1 + max_n vol(S^n)/2 = 1 + 8 pi^3 / 15.
  const double vmax = 1.0 + 8.0 * kPi * kPi * kPi / 15.0;
  const double x = std::sin(q.eps) / std::sin(q.sigma);
  const double a = 8.0 * q.n * q.delta * x;
  const double b = (8.0 * q.n * q.delta + 8.0 * q.delta + 1.0) * x;

  rep.entries.push_back(
      make_entry(formula::kSphGeneral, product_form(2.0 * vn, q.n, q.m, a, b)));
  rep.entries.push_back(make_entry(
      formula::kSphGeneralUniform, product_form(2.0 * kE * vmax, q.n, q.m, a, b)));

  const bool small_ok =
      q.m == 0 ||
      std::sin(q.eps) <= std::sin(q.sigma) /
                             ((8.0 * q.n * q.delta + 8.0 * q.delta + 1.0) * q.m);
  if (small_ok) {
    std::vector<PrecondFlag> flags{
        {q.m == 0 ? "small_eps_range_vacuous_m0" : "small_eps_range", true}};
    rep.entries.push_back(make_entry(formula::kSphGeneralSmallEps,
                                     product_form(2.0 * kE * vn, q.n, q.m, a, 0.0),
                                     std::move(flags)));
  }
  return rep;
}

TailBound condition_tail_bound(int n, int m, int delta, double u, double t) {
  if (!(0 <= m && m < n))
    throw std::invalid_argument("condition_tail_bound: need 0 <= m < n");
  if (delta < 1) throw std::invalid_argument("condition_tail_bound: delta >= 1");
  if (!(u > 0.0) || u > 1.0)
    throw std::invalid_argument("condition_tail_bound: u outside (0,1]");
  TailBound out;
  out.threshold = m * (8.0 * n * delta + 8.0 * delta + 1.0) / u;
  if (m == 0) {
    if (!(t > 0.0))
      throw std::domain_error("condition_tail_bound: need t > 0 for m = 0");
  } else if (t < out.threshold) {
    throw std::domain_error(
        "condition_tail_bound: t below threshold m(8n delta+8 delta+1)/u = " +
        std::to_string(out.threshold));
  }
  const double vmax = 1.0 + 8.0 * kPi * kPi * kPi / 15.0;
  out.raw = 2.0 * kE * vmax *
            std::exp((n - m) * std::log(8.0 * n * delta / (u * t)));
  out.clamped = std::min(out.raw, 1.0);
  return out;
}

std::uint64_t beta_bound(int n, int m, int d, int i) {
  if (!(0 <= i && i <= m && m < n))
    throw std::invalid_argument("beta_bound: need 0 <= i <= m < n");
  if (d < 1) throw std::invalid_argument("beta_bound: d >= 1");
  const std::uint64_t base = 4ull * static_cast<std::uint64_t>(d);
  std::uint64_t v = 2;
  for (int k = 0; k < n - m + i; ++k) {
    if (__builtin_mul_overflow(v, base, &v))
      throw std::overflow_error("beta_bound: 2(4d)^{n-m+i} overflows 64 bits");
  }
  return v;
}

BoundReport all_bounds(const BoundQuery& q) {
  q.validate();
  if (q.space.is_sphere()) {
    BoundReport rep = spherical_ci_bounds(q);
    BoundReport gen = spherical_general_bounds(q);
    rep.entries.insert(rep.entries.end(), gen.entries.begin(),
                       gen.entries.end());
    return rep;
  }
  BoundReport rep = affine_bounds(q);
  rep.entries.insert(rep.entries.begin(),
                     make_entry(formula::kLotz, lotz_bound(q)));
  rep.entries.push_back(
      make_entry(formula::kComteYomdin, comte_yomdin_bound(q)));
  return rep;
}

}  // namespace tubevol
