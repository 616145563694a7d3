#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "detail/density_impl.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/hermite.hpp"

namespace fisherp::detail {

namespace {

SupportInterval hull(const std::vector<MixtureComponent>& components) {
  double lo = kInf;
  double hi = -kInf;
  for (const auto& c : components) {
    lo = std::min(lo, c.model.support().lower());
    hi = std::max(hi, c.model.support().upper());
  }
  return {lo, hi};
}

class MixtureImpl final : public DensityImpl {
 public:
  explicit MixtureImpl(std::vector<MixtureComponent> components) : DensityImpl(hull(components)) {
    components_ = std::move(components);
  }

  Family family() const override { return Family::FiniteMixture; }

  int smoothness_order() const override {
    int order = kInfiniteSmoothness;
    for (const auto& c : components_) order = std::min(order, c.model.smoothness_order());
    return order;
  }
  bool gate(int p) const override {
    return std::all_of(components_.begin(), components_.end(),
                       [p](const MixtureComponent& c) { return c.model.smoothness_gate(p); });
  }

  double density(double x) const override {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.model.density(x);
    return sum;
  }
  double derivative(int k, double x) const override {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.model.derivative(k, x);
    return sum;
  }
  void derivatives(double x, std::span<double> out) const override {
    std::array<double, kMaxDerivativeOrder + 1> tmp{};
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& c : components_) {
      c.model.derivatives(x, std::span<double>(tmp.data(), out.size()));
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c.weight * tmp[k];
    }
  }

  double cdf(double x) const override {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.model.cdf(x);
    return sum;
  }
  double survival(double x) const override {
    double sum = 0.0;
    for (const auto& c : components_) sum += c.weight * c.model.survival(x);
    return sum;
  }

  std::optional<std::complex<double>> charfn(double t) const override {
    std::complex<double> sum = 0.0;
    for (const auto& c : components_) {
      const auto v = c.model.characteristic_function(t);
      if (!v) return std::nullopt;
      sum += c.weight * *v;
    }
    return sum;
  }
  std::optional<double> abs_moment(double s) const override {
    double sum = 0.0;
    for (const auto& c : components_) {
      const auto v = c.model.closed_form_abs_moment(s);
      if (!v) return std::nullopt;
      sum += c.weight * *v;
    }
    return sum;
  }

  double center() const override {
    double m = 0.0;
    for (const auto& c : components_) m += c.weight * c.model.center();
    return m;
  }
  double spread() const override {
    const double m = center();
    double v = 0.0;
    for (const auto& c : components_) {
      const double d = c.model.center() - m;
      v += c.weight * (c.model.spread() * c.model.spread() + d * d);
    }
    return std::sqrt(v);
  }

  std::vector<double> breakpoints() const override {
    std::vector<double> points;
    for (const auto& c : components_) {
      const auto hints = c.model.integration_hints();
      points.insert(points.end(), hints.breakpoints.begin(), hints.breakpoints.end());
      points.push_back(c.model.center());
      if (c.model.support().lower_finite()) points.push_back(c.model.support().lower());
      if (c.model.support().upper_finite()) points.push_back(c.model.support().upper());
    }
    return points;
  }

  bool positive_on_support() const override {
    std::vector<const MixtureComponent*> order;
    for (const auto& c : components_) {
      if (!c.model.positive_on_support()) return false;
      order.push_back(&c);
    }
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
      return a->model.support().lower() < b->model.support().lower();
    });
    double reach = order.front()->model.support().upper();
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (!(order[i]->model.support().lower() < reach)) return false;
      reach = std::max(reach, order[i]->model.support().upper());
    }
    return true;
  }

  std::optional<std::pair<double, double>> normal_parameters() const override {
    if (components_.size() == 1) return components_.front().model.normal_parameters();
    return std::nullopt;
  }

  nlohmann::json params() const override {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : components_) {
      list.push_back({{"weight", c.weight}, {"density", c.model.to_json()}});
    }
    return {{"components", list}};
  }
};

// Law of X + eps Z. Derivatives are f * (phi_eps)^(k): the kernel carries all
// the differentiation, so the base density needs no smoothness at all.
class GaussianConvolutionImpl final : public DensityImpl {
 public:
  static constexpr double kWindow = 38.0;  // phi(38) underflows

  GaussianConvolutionImpl(DensityModel base, double eps)
      : DensityImpl(SupportInterval::real_line()), base_(std::move(base)), eps_(eps) {
    if (const auto np = base_.normal_parameters()) {
      exact_ = DensityModel::normal(np->first, std::hypot(np->second, eps_));
    }
    base_points_ = base_.integration_hints().breakpoints;
    if (base_.support().lower_finite()) base_points_.push_back(base_.support().lower());
    if (base_.support().upper_finite()) base_points_.push_back(base_.support().upper());
  }

  Family family() const override { return Family::GaussianConvolution; }
  int smoothness_order() const override { return kInfiniteSmoothness; }
  bool gate(int) const override { return true; }

  double density(double x) const override {
    if (exact_) return exact_->density(x);
    return kernel_integral(0, x);
  }
  double derivative(int k, double x) const override {
    if (exact_) return exact_->derivative(k, x);
    return kernel_integral(k, x);
  }

  double cdf(double x) const override {
    if (exact_) return exact_->cdf(x);
    return smoothed(x, [this](double y) { return base_.cdf(y); });
  }
  double survival(double x) const override {
    if (exact_) return exact_->survival(x);
    return smoothed(x, [this](double y) { return base_.survival(y); });
  }

  std::optional<std::complex<double>> charfn(double t) const override {
    const auto v = base_.characteristic_function(t);
    if (!v) return std::nullopt;
    return *v * std::exp(-0.5 * eps_ * eps_ * t * t);
  }
  std::optional<double> abs_moment(double s) const override {
    if (exact_) return exact_->closed_form_abs_moment(s);
    return std::nullopt;
  }

  double center() const override { return base_.center(); }
  double spread() const override { return std::hypot(base_.spread(), eps_); }
  std::vector<double> breakpoints() const override { return base_points_; }
  std::optional<std::pair<double, double>> normal_parameters() const override {
    if (exact_) return exact_->normal_parameters();
    return std::nullopt;
  }

  nlohmann::json params() const override { return {{"base", base_.to_json()}, {"eps", eps_}}; }

 private:
  // h^(k)(x) = int f(y) phi_eps^(k)(x - y) dy, phi_eps^(k)(u) = (-1)^k H_k(u/eps) phi(u/eps) / eps^(k+1).
  double kernel_integral(int k, double x) const {
    const auto& s = base_.support();
    const double lo = std::max(x - kWindow * eps_, s.lower());
    const double hi = std::min(x + kWindow * eps_, s.upper());
    if (!(lo < hi)) return 0.0;
    const double norm = (k % 2 == 0 ? 1.0 : -1.0) / std::pow(eps_, k + 1);
    auto g = [&](double y) {
      const double f = base_.density(y);
      if (f == 0.0) return 0.0;
      const double z = (x - y) / eps_;
      return f * hermite_eval(k, z) * std_normal_pdf(z);
    };
    std::vector<double> points{x - 8.0 * eps_, x - 2.0 * eps_, x, x + 2.0 * eps_, x + 8.0 * eps_};
    for (double b : base_points_) {
      if (b > lo && b < hi) points.push_back(b);
    }
    const double value = integrate_finite(g, lo, hi, 1e-12, 1e-300, points, 400).value;
    return norm * value;
  }

  template <class F>
  double smoothed(double x, F base_fn) const {
    auto g = [&](double u) { return base_fn(x - eps_ * u) * std_normal_pdf(u); };
    std::vector<double> points{0.0};
    for (double b : base_points_) points.push_back((x - b) / eps_);
    return integrate_finite(g, -kWindow, kWindow, 1e-13, 1e-300, points).value;
  }

  DensityModel base_;
  double eps_;
  std::optional<DensityModel> exact_;
  std::vector<double> base_points_;
};

SupportInterval affine_support(const SupportInterval& s, double shift, double scale) {
  return {shift + scale * s.lower(), shift + scale * s.upper()};
}

class AffineImpl final : public DensityImpl {
 public:
  AffineImpl(DensityModel base, double shift, double scale)
      : DensityImpl(affine_support(base.support(), shift, scale)),
        base_(std::move(base)), shift_(shift), scale_(scale) {}

  Family family() const override { return Family::Affine; }
  int smoothness_order() const override { return base_.smoothness_order(); }
  bool gate(int p) const override { return base_.smoothness_gate(p); }

  double density(double x) const override { return base_.density(z(x)) / scale_; }
  double derivative(int k, double x) const override {
    return base_.derivative(k, z(x)) / std::pow(scale_, k + 1);
  }
  void derivatives(double x, std::span<double> out) const override {
    base_.derivatives(z(x), out);
    double f = scale_;
    for (double& v : out) {
      v /= f;
      f *= scale_;
    }
  }

  double cdf(double x) const override { return base_.cdf(z(x)); }
  double survival(double x) const override { return base_.survival(z(x)); }

  std::optional<std::complex<double>> charfn(double t) const override {
    const auto v = base_.characteristic_function(scale_ * t);
    if (!v) return std::nullopt;
    return *v * std::exp(std::complex<double>(0.0, shift_ * t));
  }
  std::optional<double> abs_moment(double s) const override {
    if (shift_ != 0.0) return std::nullopt;
    const auto v = base_.closed_form_abs_moment(s);
    if (!v) return std::nullopt;
    return std::pow(scale_, s) * *v;
  }

  double center() const override { return shift_ + scale_ * base_.center(); }
  double spread() const override { return scale_ * base_.spread(); }
  std::vector<double> breakpoints() const override {
    auto points = base_.integration_hints().breakpoints;
    for (double& b : points) b = shift_ + scale_ * b;
    return points;
  }
  bool positive_on_support() const override { return base_.positive_on_support(); }
  std::optional<std::pair<double, double>> normal_parameters() const override {
    const auto np = base_.normal_parameters();
    if (!np) return std::nullopt;
    return std::make_pair(shift_ + scale_ * np->first, scale_ * np->second);
  }

  nlohmann::json params() const override {
    return {{"base", base_.to_json()}, {"shift", shift_}, {"scale", scale_}};
  }

 private:
  double z(double x) const { return (x - shift_) / scale_; }

  DensityModel base_;
  double shift_;
  double scale_;
};

}  // namespace

std::shared_ptr<const DensityImpl> make_mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) throw InvalidArgument("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw InvalidArgument("mixture weights must be positive");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("mixture weights must sum to 1 (got " + std::to_string(total) + ")");
  }
  for (auto& c : components) c.weight /= total;
  return std::make_shared<MixtureImpl>(std::move(components));
}

std::shared_ptr<const DensityImpl> make_gaussian_convolution(DensityModel base, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument("convolution eps must be positive");
  }
  return std::make_shared<GaussianConvolutionImpl>(std::move(base), eps);
}

std::shared_ptr<const DensityImpl> make_affine(DensityModel base, double shift, double scale) {
  if (!std::isfinite(shift)) throw InvalidArgument("affine shift must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("affine scale must be positive");
  }
  return std::make_shared<AffineImpl>(std::move(base), shift, scale);
}

}  // namespace fisherp::detail
