#include "fisherp/densities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/density_impl.hpp"
#include "fisherp/errors.hpp"

namespace fisherp {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::Gamma: return "gamma";
    case Family::Beta: return "beta";
    case Family::HermiteWeighted: return "hermite_weighted";
    case Family::PolynomialTail: return "polynomial_tail";
    case Family::HalfGaussian: return "half_gaussian";
    case Family::Logistic: return "logistic";
    case Family::FiniteMixture: return "mixture";
    case Family::GaussianConvolution: return "gaussian_convolution";
    case Family::Affine: return "affine";
  }
  return "unknown";
}

namespace detail {

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double std_normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double DensityImpl::derivative(int k, double x) const {
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  derivatives(x, out);
  return out.back();
}

void DensityImpl::derivatives(double x, std::span<double> out) const {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = derivative(static_cast<int>(k), x);
}

const std::vector<MixtureComponent>& DensityImpl::components() const { return components_; }

}  // namespace detail

DensityModel DensityModel::normal(double mean, double sigma) {
  return DensityModel(detail::make_normal(mean, sigma));
}
DensityModel DensityModel::gamma(double shape) { return DensityModel(detail::make_gamma(shape)); }
DensityModel DensityModel::beta(double alpha, double beta) {
  return DensityModel(detail::make_beta(alpha, beta));
}
DensityModel DensityModel::hermite_weighted() { return DensityModel(detail::make_hermite_weighted()); }
DensityModel DensityModel::polynomial_tail(double q) {
  return DensityModel(detail::make_polynomial_tail(q));
}
DensityModel DensityModel::half_gaussian() { return DensityModel(detail::make_half_gaussian()); }
DensityModel DensityModel::logistic() { return DensityModel(detail::make_logistic()); }
DensityModel DensityModel::mixture(std::vector<MixtureComponent> components) {
  return DensityModel(detail::make_mixture(std::move(components)));
}
DensityModel DensityModel::gaussian_convolution(DensityModel base, double eps) {
  return DensityModel(detail::make_gaussian_convolution(std::move(base), eps));
}
DensityModel DensityModel::affine(DensityModel base, double shift, double scale) {
  return DensityModel(detail::make_affine(std::move(base), shift, scale));
}

Family DensityModel::family() const { return impl_->family(); }
const SupportInterval& DensityModel::support() const { return impl_->support(); }
int DensityModel::smoothness_order() const { return impl_->smoothness_order(); }
bool DensityModel::smoothness_gate(int p) const { return p <= 0 || impl_->gate(p); }

double DensityModel::density(double x) const {
  return impl_->support().contains(x) ? impl_->density(x) : 0.0;
}

double DensityModel::derivative(int k, double x) const {
  if (k < 0 || k > kMaxDerivativeOrder) {
    throw UnsupportedOrder("derivative order " + std::to_string(k) + " is not available (max " +
                           std::to_string(kMaxDerivativeOrder) + ")");
  }
  if (!impl_->support().contains(x)) return 0.0;
  return k == 0 ? impl_->density(x) : impl_->derivative(k, x);
}

void DensityModel::derivatives(double x, std::span<double> out) const {
  if (out.size() > static_cast<std::size_t>(kMaxDerivativeOrder) + 1) {
    throw UnsupportedOrder("derivative order " + std::to_string(out.size() - 1) +
                           " is not available");
  }
  if (!impl_->support().contains(x)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  impl_->derivatives(x, out);
}

double DensityModel::cdf(double x) const {
  const auto& s = impl_->support();
  if (x <= s.lower()) return 0.0;
  if (x >= s.upper()) return 1.0;
  return std::clamp(impl_->cdf(x), 0.0, 1.0);
}

double DensityModel::survival(double x) const {
  const auto& s = impl_->support();
  if (x <= s.lower()) return 1.0;
  if (x >= s.upper()) return 0.0;
  return std::clamp(impl_->survival(x), 0.0, 1.0);
}

std::optional<std::complex<double>> DensityModel::characteristic_function(double t) const {
  return impl_->charfn(t);
}

std::optional<double> DensityModel::closed_form_abs_moment(double s) const {
  if (s == 0.0) return 1.0;
  return impl_->abs_moment(s);
}

double DensityModel::center() const { return impl_->center(); }
double DensityModel::spread() const { return impl_->spread(); }

IntegrationHints DensityModel::integration_hints() const {
  IntegrationHints hints;
  hints.breakpoints = impl_->breakpoints();
  const double c = impl_->center();
  if (impl_->support().contains(c)) hints.breakpoints.push_back(c);
  std::sort(hints.breakpoints.begin(), hints.breakpoints.end());
  hints.breakpoints.erase(std::unique(hints.breakpoints.begin(), hints.breakpoints.end()),
                          hints.breakpoints.end());
  hints.scale = impl_->spread();
  return hints;
}

bool DensityModel::positive_on_support() const { return impl_->positive_on_support(); }

std::optional<std::pair<double, double>> DensityModel::normal_parameters() const {
  return impl_->normal_parameters();
}

const std::vector<MixtureComponent>& DensityModel::mixture_components() const {
  return impl_->components();
}

nlohmann::json DensityModel::to_json() const {
  return nlohmann::json{{"family", std::string(to_string(family()))}, {"params", impl_->params()}};
}

double eval_density(const DensityModel& model, double x) { return model.density(x); }

double eval_derivative(const DensityModel& model, int k, double x) {
  return model.derivative(k, x);
}

bool smoothness_gate(const DensityModel& model, int p) { return model.smoothness_gate(p); }

FunctionalValue moment(const DensityModel& model, double s, const QuadratureConfig& config) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("moment order must be a nonnegative real");
  }
  if (auto closed = model.closed_form_abs_moment(s)) {
    if (std::isinf(*closed)) return FunctionalValue::divergent_value();
    return FunctionalValue::exact(*closed);
  }
  IntegrationHints hints = model.integration_hints();
  if (model.support().contains(0.0)) hints.breakpoints.push_back(0.0);
  return integrate(
      [&](double x) {
        const double f = model.density(x);
        return f == 0.0 ? 0.0 : std::pow(std::abs(x), s) * f;
      },
      model.support(), config, hints);
}

}  // namespace fisherp
