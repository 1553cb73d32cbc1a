#ifndef TUBEVOL_BOUNDS_HPP
#define TUBEVOL_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tubevol/geometry.hpp"

namespace tubevol {

// One tube-probability question: ambient space, dimension bound m of the
// algebraic set, degree bound delta, tube radius eps, ball radius sigma.
// Spherical radii are radians: sigma in (0, pi/2], eps in [0, pi/2].
struct BoundQuery {
  int n = 1;
  int m = 0;
  int delta = 1;
  double eps = 0.0;
  double sigma = 1.0;
  AmbientSpace space = AmbientSpace::euclidean(1);

  void validate() const;
};

struct PrecondFlag {
  std::string name;
  bool ok = true;
};

struct BoundEntry {
  std::string name;
  double raw = 0.0;
  double clamped = 0.0;  // min(raw, 1)
  std::vector<PrecondFlag> preconds;

  bool preconditions_ok() const {
    for (const auto& f : preconds)
      if (!f.ok) return false;
    return true;
  }
};

struct BoundReport {
  BoundQuery query;
  std::vector<BoundEntry> entries;

  const BoundEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

// Formula names used in reports and CSV output.
namespace formula {
inline constexpr const char* kLotz = "lotz";
inline constexpr const char* kAffineSum = "affine_sum";
inline constexpr const char* kAffineProduct = "affine_product";
inline constexpr const char* kAffineSmallEps = "affine_small_eps";
inline constexpr const char* kComteYomdin = "comte_yomdin";
inline constexpr const char* kSphCi = "sph_ci";
inline constexpr const char* kSphCiSmallEps = "sph_ci_small_eps";
inline constexpr const char* kSphGeneral = "sph_general";
inline constexpr const char* kSphGeneralSmallEps = "sph_general_small_eps";
inline constexpr const char* kSphGeneralUniform = "sph_general_uniform_const";
inline constexpr const char* kConditionTail = "condition_tail";
}  // namespace formula

// Smooth complete intersections in R^n, degree d, tube radius eps around a
// ball of radius sigma: 4 sum_i C(n, n-m+i) (2 d eps/sigma)^{n-m+i}
// (1 + eps/sigma)^{m-i}. Raw value; may exceed 1.
double lotz_bound(const BoundQuery& q);

// General algebraic sets in R^n: sum form (Lotz at doubled degree), product
// form 4 (4 n delta eps/sigma)^{n-m} (1+(4 delta+1) eps/sigma)^m, and the
// small-eps form 4e (4 n delta eps/sigma)^{n-m} present exactly when
// eps <= sigma/((4 delta+1) m) (vacuously true for m = 0).
BoundReport affine_bounds(const BoundQuery& q);

// Covering-number route: n pi^{(n-1)/2} 2^{n+n/2} n! ((n+1)!)^{1/2}
// Gamma(c/2) (2 delta eps/sigma)^c (1+(4 delta+1) eps/sigma)^m, c = n-m.
double comte_yomdin_bound(const BoundQuery& q);

// Smooth complete intersections in S^n (degree treated as d = delta).
BoundReport spherical_ci_bounds(const BoundQuery& q);

// General algebraic sets in S^n (doubled-degree constants), plus the
// dimension-independent constant variant 2e(1 + 8 pi^3/15).
BoundReport spherical_general_bounds(const BoundQuery& q);

struct TailBound {
  double raw = 0.0;
  double clamped = 0.0;
  double threshold = 0.0;  // m (8 n delta + 8 delta + 1) / u
};

// Conic condition number tail: 2e (1 + 8 pi^3/15) (8 n delta/(u t))^{n-m},
// valid for t >= m (8 n delta + 8 delta + 1)/u.
TailBound condition_tail_bound(int n, int m, int delta, double u, double t);

// beta_i(Z) <= 2 (4 d)^{n-m+i}, as an exact integer.
std::uint64_t beta_bound(int n, int m, int d, int i);

// All formulas applicable to the query's space, for report emission.
BoundReport all_bounds(const BoundQuery& q);

}  // namespace tubevol

#endif  // TUBEVOL_BOUNDS_HPP
