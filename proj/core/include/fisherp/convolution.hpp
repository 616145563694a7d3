#pragma once

// Density of X + Y for independent X ~ f (left) and Y ~ g (right):
//   h^(p)(x) = int f^(k)(x - y) g^(p-k)(y) dy,  0 <= k <= p.
// Two normal factors reduce to a normal law; a single normal factor reduces
// to a GaussianConvolution of the other factor. Everything else is nested
// quadrature.

#include <optional>
#include <utility>
#include <vector>

#include "fisherp/densities.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {

inline constexpr int kMaxConvolvedOrder = 3;

class ConvolvedDensity {
 public:
  ConvolvedDensity(DensityModel left, DensityModel right);

  const DensityModel& left() const noexcept { return left_; }
  const DensityModel& right() const noexcept { return right_; }

  /// Closed reduction when a factor is normal.
  const std::optional<DensityModel>& reduced() const noexcept { return reduced_; }

  SupportInterval support() const;
  IntegrationHints integration_hints() const;

  /// Smoothness of h as a sum of the factor smoothness orders.
  int smoothness_order() const;

  /// (k, order - k): derivatives taken on the left and on the right factor.
  /// The larger share goes to the smoother factor. Throws UnsupportedOrder
  /// when no admissible split exists.
  std::pair<int, int> split(int order) const;

  /// h^(order)(x) with the left factor differentiated k times.
  double eval_split(int order, int k, double x, const QuadratureConfig& inner) const;

 private:
  DensityModel left_;
  DensityModel right_;
  std::optional<DensityModel> reduced_;
};

/// h^(order)(x) using split(order). `config` is the outer configuration; the
/// inner integrals run at a tenth of its relative tolerance.
double convolve_eval(const ConvolvedDensity& c, int order, double x, const QuadratureConfig& config = {});

/// I^(p) of the convolution, p <= 3. Finite only when the nested error
/// estimate is within 1e-4 relative.
FunctionalValue fisher_info_convolved(const ConvolvedDensity& c, int p, const QuadratureConfig& config = {});

struct SmoothingLadder {
  std::vector<double> eps;
  std::vector<FunctionalValue> values;  // I^(p)(X + eps Z)
  /// Extrapolation to eps -> 0 from the last three rungs (fit I0 + a e^2 + b e^4).
  /// Reported only; it is not the limit.
  std::optional<double> extrapolated;
};

/// eps_list must be strictly decreasing with every entry >= 0.01.
SmoothingLadder smoothing_ladder(const DensityModel& model, int p, const std::vector<double>& eps_list,
                                 const QuadratureConfig& config = {});

}  // namespace fisherp
