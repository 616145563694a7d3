#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "detail/density_impl.hpp"
#include "detail/taylor.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/hermite.hpp"

namespace fisherp::detail {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// a (a - 1) ... (a - j + 1); exactly 0 once a hits a nonnegative integer.
double falling(double a, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= a - i;
  return r;
}

// E|Z|^s for standard normal Z.
double normal_abs_moment(double s) {
  return std::exp(0.5 * s * std::log(2.0) + std::lgamma(0.5 * (s + 1.0)) - 0.5 * std::log(kPi));
}

class NormalImpl final : public DensityImpl {
 public:
  NormalImpl(double mean, double sigma) : DensityImpl(SupportInterval::real_line()), mean_(mean), sigma_(sigma) {}

  Family family() const override { return Family::Normal; }
  int smoothness_order() const override { return kInfiniteSmoothness; }
  bool gate(int) const override { return true; }

  double density(double x) const override { return std_normal_pdf((x - mean_) / sigma_) / sigma_; }

  void derivatives(double x, std::span<double> out) const override {
    const double z = (x - mean_) / sigma_;
    std::array<double, kMaxDerivativeOrder + 1> h{};
    hermite_eval_all(z, std::span<double>(h.data(), out.size()));
    double scale = std_normal_pdf(z) / sigma_;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[k] * scale;
      scale /= sigma_;
    }
  }
  double derivative(int k, double x) const override {
    const double z = (x - mean_) / sigma_;
    return (k % 2 == 0 ? 1.0 : -1.0) * hermite_eval(k, z) * std_normal_pdf(z) /
           std::pow(sigma_, k + 1);
  }

  double cdf(double x) const override { return std_normal_cdf((x - mean_) / sigma_); }
  double survival(double x) const override { return std_normal_sf((x - mean_) / sigma_); }

  std::optional<std::complex<double>> charfn(double t) const override {
    return std::exp(std::complex<double>(-0.5 * sigma_ * sigma_ * t * t, mean_ * t));
  }
  std::optional<double> abs_moment(double s) const override {
    if (mean_ != 0.0) return std::nullopt;
    return std::pow(sigma_, s) * normal_abs_moment(s);
  }

  double center() const override { return mean_; }
  double spread() const override { return sigma_; }
  std::optional<std::pair<double, double>> normal_parameters() const override {
    return std::make_pair(mean_, sigma_);
  }
  nlohmann::json params() const override { return {{"mean", mean_}, {"sigma", sigma_}}; }

 private:
  double mean_;
  double sigma_;
};

class GammaImpl final : public DensityImpl {
 public:
  explicit GammaImpl(double n) : DensityImpl({0.0, kInf}), n_(n), log_norm_(std::lgamma(n)) {}

  Family family() const override { return Family::Gamma; }
  int smoothness_order() const override { return static_cast<int>(std::ceil(n_)) - 1; }
  bool gate(int p) const override { return n_ > 2.0 * p; }

  double density(double x) const override {
    return std::exp((n_ - 1.0) * std::log(x) - x - log_norm_);
  }

  // Leibniz on x^(n-1) e^(-x): sum_j C(k,j) (n-1)_j x^(n-1-j) (-1)^(k-j) e^(-x).
  double derivative(int k, double x) const override {
    const double lx = std::log(x);
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double coef = binomial(k, j) * falling(n_ - 1.0, j);
      if (coef == 0.0) continue;
      const double mag = std::exp(std::log(std::abs(coef)) + (n_ - 1.0 - j) * lx - x - log_norm_);
      const bool negative = (coef < 0.0) != ((k - j) % 2 == 1);
      sum += negative ? -mag : mag;
    }
    return sum;
  }

  double cdf(double x) const override { return boost::math::gamma_p(n_, x); }
  double survival(double x) const override { return boost::math::gamma_q(n_, x); }

  std::optional<std::complex<double>> charfn(double t) const override {
    return std::exp(-n_ * std::log(std::complex<double>(1.0, -t)));
  }
  std::optional<double> abs_moment(double s) const override {
    return std::exp(std::lgamma(n_ + s) - log_norm_);
  }

  double center() const override { return n_; }
  double spread() const override { return std::sqrt(n_); }
  nlohmann::json params() const override { return {{"n", n_}}; }

 private:
  double n_;
  double log_norm_;
};

class BetaImpl final : public DensityImpl {
 public:
  BetaImpl(double a, double b)
      : DensityImpl({0.0, 1.0}), a_(a), b_(b),
        log_beta_(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)) {}

  Family family() const override { return Family::Beta; }
  int smoothness_order() const override { return static_cast<int>(std::ceil(std::min(a_, b_))) - 1; }
  bool gate(int p) const override { return std::min(a_, b_) > 2.0 * p; }

  double density(double x) const override {
    return std::exp((a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x) - log_beta_);
  }

  double derivative(int k, double x) const override {
    const double lx = std::log(x);
    const double l1x = std::log1p(-x);
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double coef = binomial(k, j) * falling(a_ - 1.0, j) * falling(b_ - 1.0, k - j);
      if (coef == 0.0) continue;
      const double mag = std::exp(std::log(std::abs(coef)) + (a_ - 1.0 - j) * lx +
                                  (b_ - 1.0 - (k - j)) * l1x - log_beta_);
      const bool negative = (coef < 0.0) != ((k - j) % 2 == 1);
      sum += negative ? -mag : mag;
    }
    return sum;
  }

  double cdf(double x) const override { return boost::math::ibeta(a_, b_, x); }
  double survival(double x) const override { return boost::math::ibetac(a_, b_, x); }

  std::optional<double> abs_moment(double s) const override {
    return std::exp(std::lgamma(a_ + s) + std::lgamma(a_ + b_) - std::lgamma(a_) -
                    std::lgamma(a_ + b_ + s));
  }

  double center() const override { return a_ / (a_ + b_); }
  double spread() const override {
    const double t = a_ + b_;
    return std::sqrt(a_ * b_ / (t * t * (t + 1.0)));
  }
  nlohmann::json params() const override { return {{"alpha", a_}, {"beta", b_}}; }

 private:
  double a_;
  double b_;
  double log_beta_;
};

// x^2 phi(x) = phi + H_2 phi, so f^(k) = (-1)^k (H_k + H_{k+2}) phi.
class HermiteWeightedImpl final : public DensityImpl {
 public:
  HermiteWeightedImpl() : DensityImpl(SupportInterval::real_line()) {}

  Family family() const override { return Family::HermiteWeighted; }
  int smoothness_order() const override { return kInfiniteSmoothness; }
  bool gate(int) const override { return true; }

  double density(double x) const override { return x * x * std_normal_pdf(x); }

  void derivatives(double x, std::span<double> out) const override {
    std::array<double, kMaxDerivativeOrder + 3> h{};
    hermite_eval_all(x, std::span<double>(h.data(), out.size() + 2));
    const double phi = std_normal_pdf(x);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (k % 2 == 0 ? 1.0 : -1.0) * (h[k] + h[k + 2]) * phi;
    }
    out[0] = x * x * phi;  // H_0 + H_2 cancels near 0
  }
  double derivative(int k, double x) const override {
    return (k % 2 == 0 ? 1.0 : -1.0) * (hermite_eval(k, x) + hermite_eval(k + 2, x)) *
           std_normal_pdf(x);
  }

  double cdf(double x) const override { return std_normal_cdf(x) - x * std_normal_pdf(x); }
  double survival(double x) const override { return std_normal_sf(x) + x * std_normal_pdf(x); }

  std::optional<std::complex<double>> charfn(double t) const override {
    return std::complex<double>((1.0 - t * t) * std::exp(-0.5 * t * t), 0.0);
  }
  std::optional<double> abs_moment(double s) const override { return normal_abs_moment(s + 2.0); }

  double center() const override { return 0.0; }
  double spread() const override { return std::sqrt(3.0); }
  std::vector<double> breakpoints() const override { return {0.0}; }
  bool positive_on_support() const override { return false; }
  nlohmann::json params() const override { return nlohmann::json::object(); }
};

// x e^(-x^2/2) on x > 0; f^(k) = (-1)^k H_{k+1}(x) e^(-x^2/2).
class HalfGaussianImpl final : public DensityImpl {
 public:
  HalfGaussianImpl() : DensityImpl({0.0, kInf}) {}

  Family family() const override { return Family::HalfGaussian; }
  int smoothness_order() const override { return 1; }
  bool gate(int p) const override { return p <= 1; }

  double density(double x) const override { return x * std::exp(-0.5 * x * x); }

  void derivatives(double x, std::span<double> out) const override {
    std::array<double, kMaxDerivativeOrder + 2> h{};
    hermite_eval_all(x, std::span<double>(h.data(), out.size() + 1));
    const double g = std::exp(-0.5 * x * x);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[k + 1] * g;
    }
  }
  double derivative(int k, double x) const override {
    return (k % 2 == 0 ? 1.0 : -1.0) * hermite_eval(k + 1, x) * std::exp(-0.5 * x * x);
  }

  double cdf(double x) const override { return -std::expm1(-0.5 * x * x); }
  double survival(double x) const override { return std::exp(-0.5 * x * x); }

  std::optional<double> abs_moment(double s) const override {
    return std::exp(0.5 * s * std::log(2.0) + std::lgamma(1.0 + 0.5 * s));
  }

  double center() const override { return std::sqrt(0.5 * kPi); }
  double spread() const override { return std::sqrt(2.0 - 0.5 * kPi); }
  nlohmann::json params() const override { return nlohmann::json::object(); }
};

// f = s (1 - s) with s the logistic sigmoid; since s' = s - s^2, f^(k) = P_k(s)
// with P_0 = s - s^2 and P_{k+1} = P_k'(s) (s - s^2).
class LogisticImpl final : public DensityImpl {
 public:
  LogisticImpl() : DensityImpl(SupportInterval::real_line()) {
    polys_[0] = {0.0, 1.0, -1.0};
    for (int k = 1; k <= kMaxDerivativeOrder; ++k) {
      const auto& prev = polys_[k - 1];
      std::vector<double> d(prev.size() - 1);
      for (std::size_t i = 1; i < prev.size(); ++i) d[i - 1] = i * prev[i];
      std::vector<double> next(d.size() + 2, 0.0);
      for (std::size_t i = 0; i < d.size(); ++i) {
        next[i + 1] += d[i];
        next[i + 2] -= d[i];
      }
      polys_[k] = std::move(next);
    }
  }

  Family family() const override { return Family::Logistic; }
  int smoothness_order() const override { return kInfiniteSmoothness; }
  bool gate(int) const override { return true; }

  double density(double x) const override {
    const double e = std::exp(-std::abs(x));
    return e / ((1.0 + e) * (1.0 + e));
  }

  // Evaluated at -|x| where s is small, then reflected by parity.
  double derivative(int k, double x) const override {
    const double e = std::exp(-std::abs(x));
    const double s = e / (1.0 + e);
    const auto& c = polys_[k];
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * s + c[i];
    return (x > 0.0 && k % 2 == 1) ? -v : v;
  }

  double cdf(double x) const override {
    return x < 0.0 ? std::exp(x) / (1.0 + std::exp(x)) : 1.0 / (1.0 + std::exp(-x));
  }
  double survival(double x) const override { return cdf(-x); }

  std::optional<std::complex<double>> charfn(double t) const override {
    const double a = kPi * std::abs(t);
    if (a == 0.0) return std::complex<double>(1.0, 0.0);
    const double e = std::exp(-a);
    return std::complex<double>(2.0 * a * e / (1.0 - e * e), 0.0);
  }

  double center() const override { return 0.0; }
  double spread() const override { return kPi / std::sqrt(3.0); }
  nlohmann::json params() const override { return nlohmann::json::object(); }

 private:
  std::array<std::vector<double>, kMaxDerivativeOrder + 1> polys_;
};

// Even density proportional to
//   exp(q (1 - x^2) / 2)            for |x| <= 1/2,
//   (1 - S) exp(q (1 - x^2) / 2) + S |x|^-q  for 1/2 < |x| < 1,
//   |x|^-q                          for |x| >= 1,
// where S(t) = psi(t) / (psi(t) + psi(1 - t)), psi(t) = exp(-1/t), t = 2|x| - 1.
class PolynomialTailImpl final : public DensityImpl {
 public:
  explicit PolynomialTailImpl(double q) : DensityImpl(SupportInterval::real_line()), q_(q) {
    const double inner = core_integral(0.0, [](double) { return 1.0; });
    c_ = 1.0 / (2.0 * (inner + 1.0 / (q_ - 1.0)));
  }

  Family family() const override { return Family::PolynomialTail; }
  int smoothness_order() const override { return kInfiniteSmoothness; }
  bool gate(int) const override { return true; }

  double density(double x) const override {
    std::array<double, 1> out{};
    derivatives(x, out);
    return out[0];
  }

  void derivatives(double x, std::span<double> out) const override {
    const double a = std::abs(x);
    const int order = static_cast<int>(out.size()) - 1;
    if (a >= 1.0) {
      double ff = 1.0;
      for (int k = 0; k <= order; ++k) {
        out[k] = c_ * ff * std::pow(a, -q_ - k);
        ff *= -q_ - k;
      }
    } else {
      const Jet u = unnormalized(order, a);
      for (int k = 0; k <= order; ++k) out[k] = c_ * u.derivative(k);
    }
    if (x < 0.0) {
      for (int k = 1; k <= order; k += 2) out[k] = -out[k];
    }
  }

  double cdf(double x) const override { return x <= 0.0 ? upper_tail(-x) : 1.0 - upper_tail(x); }
  double survival(double x) const override { return x >= 0.0 ? upper_tail(x) : 1.0 - upper_tail(-x); }

  std::optional<double> abs_moment(double s) const override {
    if (s >= q_ - 1.0) return kInf;
    const double inner = core_integral(0.0, [s](double y) { return std::pow(y, s); });
    return 2.0 * c_ * (inner + 1.0 / (q_ - 1.0 - s));
  }

  double center() const override { return 0.0; }
  double spread() const override { return 1.0; }
  std::vector<double> breakpoints() const override { return {-1.0, -0.5, 0.5, 1.0}; }
  nlohmann::json params() const override { return {{"q", q_}}; }

 private:
  static constexpr double kPsiCutoff = 0.005;

  static Jet psi(const Jet& t, int order) {
    if (t[0] < kPsiCutoff) return Jet(order);
    return exp(-1.0 * (Jet(order, 1.0) / t));
  }

  Jet unnormalized(int order, double a) const {
    const Jet x = Jet::variable(order, a);
    Jet bump = exp(0.5 * q_ * (1.0 - x * x));
    if (a <= 0.5) return bump;
    const Jet t = x * 2.0 + (-1.0);
    const Jet pt = psi(t, order);
    const Jet ps = psi(1.0 - t, order);
    const Jet step = pt / (pt + ps);
    return bump + step * (pow(x, -q_) - bump);
  }

  double unnormalized_value(double a) const { return unnormalized(0, a)[0]; }

  // Integral over [y, 1] of w(x) u(x).
  template <class W>
  double core_integral(double y, W w) const {
    const std::array<double, 1> mid{0.5};
    return integrate_finite([&](double x) { return w(x) * unnormalized_value(x); }, y, 1.0, 1e-13,
                            1e-16, mid)
        .value;
  }

  // P(X > y) for y >= 0.
  double upper_tail(double y) const {
    if (y >= 1.0) return c_ * std::pow(y, 1.0 - q_) / (q_ - 1.0);
    return c_ * (core_integral(y, [](double) { return 1.0; }) + 1.0 / (q_ - 1.0));
  }

  double q_;
  double c_ = 1.0;
};

}  // namespace

std::shared_ptr<const DensityImpl> make_normal(double mean, double sigma) {
  require(std::isfinite(mean), "normal mean must be finite");
  require(sigma > 0.0 && std::isfinite(sigma), "normal sigma must be positive");
  return std::make_shared<NormalImpl>(mean, sigma);
}

std::shared_ptr<const DensityImpl> make_gamma(double shape) {
  require(shape > 0.0 && std::isfinite(shape), "gamma shape must be positive");
  return std::make_shared<GammaImpl>(shape);
}

std::shared_ptr<const DensityImpl> make_beta(double alpha, double beta) {
  require(alpha > 0.0 && std::isfinite(alpha), "beta alpha must be positive");
  require(beta > 0.0 && std::isfinite(beta), "beta beta must be positive");
  return std::make_shared<BetaImpl>(alpha, beta);
}

std::shared_ptr<const DensityImpl> make_hermite_weighted() {
  return std::make_shared<HermiteWeightedImpl>();
}

std::shared_ptr<const DensityImpl> make_polynomial_tail(double q) {
  require(q > 1.0 && std::isfinite(q), "polynomial tail exponent q must exceed 1");
  return std::make_shared<PolynomialTailImpl>(q);
}

std::shared_ptr<const DensityImpl> make_half_gaussian() { return std::make_shared<HalfGaussianImpl>(); }

std::shared_ptr<const DensityImpl> make_logistic() { return std::make_shared<LogisticImpl>(); }

}  // namespace fisherp::detail
