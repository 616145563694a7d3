#pragma once

// Catalog of one-dimensional densities with analytic derivatives.
//
// A DensityModel is an immutable, cheaply copyable handle. Derivatives are
// exact on the interior of the support (closed forms, Leibniz sums or Taylor
// jets); outside the support every derivative is 0.

#include <climits>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fisherp/quadrature.hpp"
#include "fisherp/types.hpp"

namespace fisherp {

enum class Family {
  Normal,
  Gamma,
  Beta,
  HermiteWeighted,
  PolynomialTail,
  HalfGaussian,
  Logistic,
  FiniteMixture,
  GaussianConvolution,
  Affine,
};

std::string_view to_string(Family family) noexcept;

inline constexpr int kMaxDerivativeOrder = 12;
inline constexpr int kInfiniteSmoothness = INT_MAX;

namespace detail {
class DensityImpl;
}

struct MixtureComponent;

class DensityModel {
 public:
  static DensityModel normal(double mean = 0.0, double sigma = 1.0);
  /// x^(n-1) e^(-x) / Gamma(n) on (0, inf).
  static DensityModel gamma(double shape);
  static DensityModel beta(double alpha, double beta);
  /// x^2 phi(x).
  static DensityModel hermite_weighted();
  /// Even, C-infinity, equal to c |x|^(-q) for |x| >= 1. Requires q > 1.
  static DensityModel polynomial_tail(double q);
  /// x e^(-x^2/2) on (0, inf).
  static DensityModel half_gaussian();
  static DensityModel logistic();
  /// Weights must be positive and sum to 1 (within 1e-9; they are renormalized).
  static DensityModel mixture(std::vector<MixtureComponent> components);
  /// Law of X + eps Z with Z standard normal independent of X.
  static DensityModel gaussian_convolution(DensityModel base, double eps);
  /// Law of shift + scale X, scale > 0.
  static DensityModel affine(DensityModel base, double shift, double scale);

  /// {"family": "...", "params": {...}}. Throws DescriptorError.
  static DensityModel from_json(const nlohmann::json& descriptor);
  nlohmann::json to_json() const;

  Family family() const;
  const SupportInterval& support() const;

  /// Largest p with f of class C^p on the whole line: derivatives up to p-1
  /// continuous and f^(p-1) locally absolutely continuous.
  int smoothness_order() const;

  /// Whether I^(p) can be finite at all for this member (family criterion).
  bool smoothness_gate(int p) const;

  double density(double x) const;
  /// f^(k)(x) for 0 <= k <= kMaxDerivativeOrder; throws UnsupportedOrder otherwise.
  double derivative(int k, double x) const;
  /// out[k] = f^(k)(x) for k < out.size().
  void derivatives(double x, std::span<double> out) const;

  double cdf(double x) const;
  /// 1 - F(x), computed without cancellation in the upper tail.
  double survival(double x) const;

  /// Closed-form E exp(itX) when the family has one.
  std::optional<std::complex<double>> characteristic_function(double t) const;
  /// Closed-form E|X|^s (possibly +inf) when the family has one.
  std::optional<double> closed_form_abs_moment(double s) const;

  /// Location and length scale, used for bracketing and quadrature hints.
  double center() const;
  double spread() const;
  IntegrationHints integration_hints() const;

  /// True when f > 0 on the whole open support (a single interval).
  bool positive_on_support() const;

  /// (mean, sigma) when the law is exactly normal.
  std::optional<std::pair<double, double>> normal_parameters() const;

  const std::vector<MixtureComponent>& mixture_components() const;

  const detail::DensityImpl& impl() const { return *impl_; }

 private:
  explicit DensityModel(std::shared_ptr<const detail::DensityImpl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const detail::DensityImpl> impl_;
};

struct MixtureComponent {
  double weight;
  DensityModel model;
};

double eval_density(const DensityModel& model, double x);
double eval_derivative(const DensityModel& model, int k, double x);

/// E|X|^s; closed form where available, quadrature otherwise. Divergent
/// status when the moment is infinite.
FunctionalValue moment(const DensityModel& model, double s, const QuadratureConfig& config = {});

bool smoothness_gate(const DensityModel& model, int p);

}  // namespace fisherp
