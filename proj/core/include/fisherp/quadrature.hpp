#pragma once

// Adaptive quadrature for improper and endpoint-singular integrals.
//
// The integration interval is cut at the hinted breakpoints, every piece is
// split into two halves, and each half is parameterized by u in (0, 1] with
// its (possibly singular or infinite) end at u = 0. Infinite ends use the
// compactifying map x = m + s (1 - u) / u. Each half is then covered by the
// geometric panels [2^-(k+1), 2^-k], k = 0, 1, ..., one "generation" per
// panel, and every panel is integrated by adaptive Gauss-Kronrod (G10/K21).
//
// The sequence of partial sums over generations is what decides between a
// finite value and divergence; see classify_divergence().
//
// Near a finite nonzero end the generations stop once a panel is narrower than
// about 1e6 ulp of the end, where x itself no longer resolves the distance;
// a stable geometric decay is then summed in closed form. The final error
// target is max(rel_tol |I|, abs_tol, rel_tol / 10 * int |g|).

#include <functional>
#include <span>
#include <vector>

#include "fisherp/types.hpp"

namespace fisherp {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 60;  // generations per half, and the bisection budget hint
  double divergence_cap = 1e12;
  double tail_mass_bound = 1e-10;  // rel_tol / 10
  int max_subdivisions = 400;      // per geometric panel

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;

  /// Default config with the given relative tolerance; tail bound follows it.
  static QuadratureConfig with_rel_tol(double rel_tol);
};

/// Points where the integrand may be singular or change character, and the
/// length scale used when compactifying infinite ends.
struct IntegrationHints {
  std::vector<double> breakpoints;
  double scale = 1.0;
};

using Integrand = std::function<double(double)>;

FunctionalValue integrate(const Integrand& integrand, const SupportInterval& interval,
                          const QuadratureConfig& config = {},
                          const IntegrationHints& hints = {});

/// Plain globally adaptive G10/K21 on a finite interval [a, b], cut at the
/// given breakpoints. No endpoint or divergence handling; the status is
/// Finite when the error target was met and Inconclusive otherwise.
FunctionalValue integrate_finite(const Integrand& integrand, double a, double b, double rel_tol,
                                 double abs_tol, std::span<const double> breakpoints = {},
                                 int max_subdivisions = 200);

/// Decision rule on the partial sums of absolute panel contributions, one
/// entry per refinement generation:
///  - Divergent when the last 6 generations grow monotonically and either the
///    last sum exceeds divergence_cap or every step grows by a factor of at
///    least 1 + 10 rel_tol;
///  - Finite when the last step changed the sum by at most rel_tol;
///  - Inconclusive otherwise, or with fewer than 8 generations.
Status classify_divergence(std::span<const double> partial_sums, const QuadratureConfig& config);

}  // namespace fisherp
