#include <doctest.h>

#include <cmath>

#include "tubevol/bounds.hpp"

using namespace tubevol;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kE = 2.718281828459045235360287471352662498;

BoundQuery euclid(int n, int m, int delta, double eps, double sigma) {
  return {n, m, delta, eps, sigma, AmbientSpace::euclidean(n)};
}
BoundQuery sph(int n, int m, int delta, double eps, double sigma) {
  return {n, m, delta, eps, sigma, AmbientSpace::sphere(n)};
}
}  // namespace

TEST_CASE("lotz bound") {
  // n=2, m=1, d=1, r=0.1, s=1: 4[2*0.2*1.1 + 0.04] = 1.92.
  CHECK(lotz_bound(euclid(2, 1, 1, 0.1, 1.0)) ==
        doctest::Approx(1.92).epsilon(1e-12));
  CHECK(lotz_bound(euclid(3, 1, 2, 0.0, 1.0)) == 0.0);

  double prev = lotz_bound(euclid(3, 2, 2, 0.01, 1.0));
  for (double r : {0.02, 0.04, 0.08, 0.16}) {
    const double v = lotz_bound(euclid(3, 2, 2, r, 1.0));
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(lotz_bound(sph(2, 1, 1, 0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("affine bounds report") {
  const BoundReport rep = affine_bounds(euclid(2, 1, 1, 0.1, 1.0));
  const BoundEntry* prod = rep.find(formula::kAffineProduct);
  REQUIRE(prod != nullptr);
  CHECK(prod->raw == doctest::Approx(4.8).epsilon(1e-12));
  CHECK(prod->clamped == 1.0);

  // Small-eps precondition 0.1 <= 1/5 holds; value 4e * 0.8.
  const BoundEntry* small = rep.find(formula::kAffineSmallEps);
  REQUIRE(small != nullptr);
  CHECK(small->raw == doctest::Approx(4.0 * kE * 0.8).epsilon(1e-12));
  CHECK(small->preconditions_ok());

  // eps = 0: every form vanishes.
  for (const auto& e : affine_bounds(euclid(2, 1, 1, 0.0, 1.0)).entries)
    CHECK(e.raw == 0.0);

  // Precondition fails: entry absent.
  const BoundReport rep2 = affine_bounds(euclid(3, 2, 1, 0.5, 1.0));
  CHECK(rep2.find(formula::kAffineSmallEps) == nullptr);

  // m = 0: vacuously present.
  const BoundReport rep3 = affine_bounds(euclid(2, 0, 1, 0.9, 1.0));
  CHECK(rep3.find(formula::kAffineSmallEps) != nullptr);

  CHECK_THROWS_AS(affine_bounds(sph(2, 1, 1, 0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("comte-yomdin bound") {
  // n=2, m=1, delta=1, eps=0.1, sigma=1: 32 pi sqrt(6) * 0.2 * 1.5.
  CHECK(comte_yomdin_bound(euclid(2, 1, 1, 0.1, 1.0)) ==
        doctest::Approx(32.0 * kPi * std::sqrt(6.0) * 0.2 * 1.5).epsilon(1e-12));
  CHECK(comte_yomdin_bound(euclid(4, 2, 3, 0.0, 1.0)) == 0.0);

  // The exponential-in-n prefactor dominates the affine product form for
  // n >= 4 on the standard grid; recorded as a comparison, not assumed.
  for (int n = 4; n <= 8; ++n)
    for (int m = 0; m < n; ++m)
      for (double ratio : {0.01, 0.1, 0.3}) {
        const BoundQuery q = euclid(n, m, 2, ratio, 1.0);
        const double cy = comte_yomdin_bound(q);
        const double prod = affine_bounds(q).find(formula::kAffineProduct)->raw;
        CHECK(cy >= prod);
      }
}

TEST_CASE("spherical complete-intersection bounds") {
  const BoundReport rep = spherical_ci_bounds(sph(2, 1, 1, 0.1, kPi / 2));
  const double expect = 2.0 * (1.0 + 2.0 * kPi) * (8.0 * std::sin(0.1)) *
                        (1.0 + 13.0 * std::sin(0.1));
  CHECK(rep.find(formula::kSphCi)->raw == doctest::Approx(expect).epsilon(1e-12));
  // sin 0.1 > 1/13: the small-radius entry is absent.
  CHECK(rep.find(formula::kSphCiSmallEps) == nullptr);

  const BoundReport rep2 = spherical_ci_bounds(sph(2, 1, 1, 0.01, kPi / 2));
  REQUIRE(rep2.find(formula::kSphCiSmallEps) != nullptr);
  CHECK(rep2.find(formula::kSphCiSmallEps)->raw ==
        doctest::Approx(2.0 * kE * (1.0 + 2.0 * kPi) * 8.0 * std::sin(0.01))
            .epsilon(1e-12));

  for (const auto& e : spherical_ci_bounds(sph(3, 1, 2, 0.0, 1.0)).entries)
    CHECK(e.raw == 0.0);

  // Nondecreasing in eps.
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double eps = (kPi / 2) * i / 20.0;
    const double v = spherical_ci_bounds(sph(2, 1, 1, eps, kPi / 2))
                         .find(formula::kSphCi)
                         ->raw;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(spherical_ci_bounds(euclid(2, 1, 1, 0.1, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("spherical general bounds") {
  const BoundReport rep = spherical_general_bounds(sph(2, 1, 1, 0.05, kPi / 2));
  const double expect = 2.0 * (1.0 + 2.0 * kPi) * (16.0 * std::sin(0.05)) *
                        (1.0 + 25.0 * std::sin(0.05));
  CHECK(rep.find(formula::kSphGeneral)->raw ==
        doctest::Approx(expect).epsilon(1e-12));

  for (const auto& e : spherical_general_bounds(sph(2, 1, 1, 0.0, 1.0)).entries)
    CHECK(e.raw == 0.0);

  // The dimension-independent constant dominates the vol(S^n)/2 constant.
  for (int n = 1; n <= 10; ++n) {
    const BoundReport r = spherical_general_bounds(sph(n, 0, 2, 0.05, 1.0));
    CHECK(r.find(formula::kSphGeneral)->raw <=
          r.find(formula::kSphGeneralUniform)->raw);
  }
  CHECK_THROWS_AS(spherical_general_bounds(sph(2, 1, 1, 0.1, 2.0)),
                  std::invalid_argument);
}

TEST_CASE("condition tail bound") {
  // n=2, m=1, delta=1, u=1: threshold = 25.
  const TailBound tb = condition_tail_bound(2, 1, 1, 1.0, 25.0);
  CHECK(tb.threshold == doctest::Approx(25.0));
  const double expect =
      2.0 * kE * (1.0 + 8.0 * kPi * kPi * kPi / 15.0) * (16.0 / 25.0);
  CHECK(tb.raw == doctest::Approx(expect).epsilon(1e-12));
  CHECK(tb.clamped == 1.0);

  // Doubling t halves the bound when n - m = 1.
  CHECK(condition_tail_bound(2, 1, 1, 1.0, 50.0).raw ==
        doctest::Approx(tb.raw / 2).epsilon(1e-12));
  // t -> infinity: vanishes.
  CHECK(condition_tail_bound(2, 1, 1, 1.0, 1e12).raw <= 1e-8);

  CHECK_THROWS_AS(condition_tail_bound(2, 1, 1, 1.0, 24.9), std::domain_error);
  CHECK_NOTHROW(condition_tail_bound(2, 0, 1, 1.0, 0.5));  // m = 0: any t > 0
}

TEST_CASE("beta bound") {
  CHECK(beta_bound(2, 1, 1, 0) == 8);
  CHECK(beta_bound(2, 1, 2, 0) == 16);
  CHECK(beta_bound(4, 2, 3, 2) == 2ull * 12 * 12 * 12 * 12);  // i = m
  CHECK_THROWS_AS(beta_bound(50, 40, 100, 40), std::overflow_error);
  CHECK_THROWS_AS(beta_bound(2, 1, 1, 2), std::invalid_argument);
}

TEST_CASE("structural inequalities on the parameter grid") {
  // Sum form <= product form (the binomial estimate in the proof), and the
  // product form <= small-eps form whenever its precondition holds.
  for (int n = 1; n <= 8; ++n)
    for (int m = 0; m < n; ++m)
      for (int delta = 1; delta <= 4; ++delta)
        for (double ratio : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
          const BoundQuery q = euclid(n, m, delta, ratio, 1.0);
          const BoundReport rep = affine_bounds(q);
          const double sum = rep.find(formula::kAffineSum)->raw;
          const double prod = rep.find(formula::kAffineProduct)->raw;
          CHECK(sum <= prod * (1 + 1e-12));
          if (const BoundEntry* small = rep.find(formula::kAffineSmallEps))
            CHECK(prod <= small->raw * (1 + 1e-12));

          // Thm 3.2 is the complete-intersection bound at doubled degree.
          const BoundQuery q2 = euclid(n, m, 2 * delta, ratio, 1.0);
          CHECK(sum == lotz_bound(q2));
        }

  // Same relation for both spherical reports.
  for (int n = 2; n <= 6; ++n)
    for (int m = 0; m < n; ++m)
      for (double eps : {0.001, 0.005, 0.02}) {
        const BoundQuery q = sph(n, m, 2, eps, 1.0);
        const BoundReport ci = spherical_ci_bounds(q);
        if (const BoundEntry* small = ci.find(formula::kSphCiSmallEps))
          CHECK(ci.find(formula::kSphCi)->raw <= small->raw * (1 + 1e-12));
        const BoundReport gen = spherical_general_bounds(q);
        if (const BoundEntry* small = gen.find(formula::kSphGeneralSmallEps))
          CHECK(gen.find(formula::kSphGeneral)->raw <= small->raw * (1 + 1e-12));
      }
}

TEST_CASE("sin subadditivity (Lemma 4.12)") {
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const double r = (kPi / 2) * i / 199.0;
      const double s = (kPi / 2) * j / 199.0;
      CHECK(std::sin(std::min(r + s, kPi / 2)) <=
            std::sin(r) + std::sin(s) + 1e-15);
    }
}

TEST_CASE("bound values are nonnegative and monotone in eps") {
  for (int n : {2, 4})
    for (int m = 0; m < n; m += 2) {
      double prev_sum = -1.0, prev_cy = -1.0;
      for (int i = 0; i <= 10; ++i) {
        const double eps = 0.05 * i;
        const BoundQuery q = euclid(n, m, 2, eps, 1.0);
        const double sum = affine_bounds(q).find(formula::kAffineSum)->raw;
        const double cy = comte_yomdin_bound(q);
        CHECK(sum >= 0.0);
        CHECK(cy >= 0.0);
        CHECK(sum >= prev_sum);
        CHECK(cy >= prev_cy);
        prev_sum = sum;
        prev_cy = cy;
      }
    }
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(euclid(2, 2, 1, 0.1, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(euclid(2, 1, 0, 0.1, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(euclid(2, 1, 1, -0.1, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(euclid(2, 1, 1, 0.1, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sph(2, 1, 1, 2.0, 1.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(sph(2, 1, 1, 0.1, kPi / 2).validate());
}
