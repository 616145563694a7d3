#pragma once

// Isoperimetric profile L(t) = f(F^-1(t)) on (0, 1) and the representations
// of I_p and I^(2) as integrals over t. Derivatives of L come from exact
// pullbacks:
//   L'(t)      = f'(x) / f(x)
//   L(t) L''(t) = f''(x) / f(x) - (f'(x) / f(x))^2,   x = F^-1(t).

#include <string>
#include <vector>

#include "fisherp/densities.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {

double cdf(const DensityModel& model, double x);

/// x with F(x) = t, 0 < t < 1. Bracketing bisection to relative width 1e-8,
/// then Newton polish. Throws NonConvergence after 200 iterations.
double quantile(const DensityModel& model, double t);

/// x with 1 - F(x) = s, 0 < s < 1; accurate when s is tiny.
double upper_quantile(const DensityModel& model, double s);

struct ProfileGrid {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> L;
  std::vector<double> Lp;    // L'(t)
  std::vector<double> LLpp;  // L(t) L''(t)

  std::size_t size() const noexcept { return t.size(); }
};

inline constexpr double kProfileClip = 1e-6;

/// Chebyshev-distributed nodes in (0, 1) clipped to [1e-6, 1 - 1e-6].
/// Throws UnsupportedDensity unless f > 0 on a single interval.
ProfileGrid build_profile(const DensityModel& model, int n_nodes);

/// CSV with header t,x,L,Lp,LLpp and 17 significant digits.
std::string profile_csv(const ProfileGrid& grid);

/// I_p = int_0^1 |L'(t)|^p dt.
FunctionalValue info_via_profile(const DensityModel& model, double p_exponent,
                                 const QuadratureConfig& config = {});

enum class I2Variant {
  Squared,  // int (L'^2 + L L'')^2 dt
  Split,    // int (L L'')^2 + L'^4 / 3 dt
};

FunctionalValue i2_via_profile(const DensityModel& model, I2Variant variant,
                               const QuadratureConfig& config = {});

struct BoundaryPoint {
  double t;
  double l_lp;   // L(t) L'(t) = f'(F^-1(t))
  double l_lp3;  // L(t) L'(t)^3
};

struct BoundaryReport {
  std::vector<BoundaryPoint> lower;  // t = 10^-k, k = 2..6
  std::vector<BoundaryPoint> upper;  // t = 1 - 10^-k
  bool monotone = false;             // |values| decrease toward both ends
};

BoundaryReport boundary_diagnostics(const DensityModel& model);

}  // namespace fisherp
