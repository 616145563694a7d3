#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "fisherp/densities.hpp"

namespace fisherp::detail {

class DensityImpl {
 public:
  explicit DensityImpl(SupportInterval support) : support_(support) {}
  virtual ~DensityImpl() = default;

  virtual Family family() const = 0;
  const SupportInterval& support() const { return support_; }
  virtual int smoothness_order() const = 0;
  virtual bool gate(int p) const = 0;

  // Callers guarantee x lies in the open support.
  virtual double density(double x) const = 0;
  virtual double derivative(int k, double x) const;
  virtual void derivatives(double x, std::span<double> out) const;

  virtual double cdf(double x) const = 0;
  virtual double survival(double x) const { return 1.0 - cdf(x); }

  virtual std::optional<std::complex<double>> charfn(double) const { return std::nullopt; }
  virtual std::optional<double> abs_moment(double) const { return std::nullopt; }

  virtual double center() const = 0;
  virtual double spread() const = 0;
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual bool positive_on_support() const { return true; }
  virtual std::optional<std::pair<double, double>> normal_parameters() const { return std::nullopt; }

  virtual nlohmann::json params() const = 0;

  const std::vector<MixtureComponent>& components() const;

 protected:
  SupportInterval support_;
  std::vector<MixtureComponent> components_;
};

std::shared_ptr<const DensityImpl> make_normal(double mean, double sigma);
std::shared_ptr<const DensityImpl> make_gamma(double shape);
std::shared_ptr<const DensityImpl> make_beta(double alpha, double beta);
std::shared_ptr<const DensityImpl> make_hermite_weighted();
std::shared_ptr<const DensityImpl> make_polynomial_tail(double q);
std::shared_ptr<const DensityImpl> make_half_gaussian();
std::shared_ptr<const DensityImpl> make_logistic();
std::shared_ptr<const DensityImpl> make_mixture(std::vector<MixtureComponent> components);
std::shared_ptr<const DensityImpl> make_gaussian_convolution(DensityModel base, double eps);
std::shared_ptr<const DensityImpl> make_affine(DensityModel base, double shift, double scale);

// Shared numerics.
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double std_normal_pdf(double z);
double std_normal_cdf(double z);
double std_normal_sf(double z);

}  // namespace fisherp::detail
