#pragma once

// Chebyshev-Hermite polynomials in the monic (probabilists') normalization:
// H_0 = 1, H_1 = x, H_{p+1} = x H_p - p H_{p-1}. They are orthogonal under the
// standard Gaussian weight with E H_p(Z)^2 = p!.

#include <cstdint>
#include <span>
#include <vector>

namespace fisherp {

inline constexpr int kMaxHermiteDegree = 30;

/// Polynomial x^p + a_{p-1} x^{p-1} + ... + a_0, coefficients stored in
/// ascending order. The leading coefficient is exactly 1.
class MonicPolynomial {
 public:
  /// Throws InvalidArgument unless the last coefficient is exactly 1.
  explicit MonicPolynomial(std::vector<double> coefficients);

  static MonicPolynomial monomial(int degree);

  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }

  /// Horner evaluation.
  double operator()(double x) const noexcept;

  /// Coefficients of the derivative (not monic: leading coefficient = degree).
  std::vector<double> derivative_coefficients() const;

 private:
  std::vector<double> coefficients_;
};

/// Exact integer coefficients of H_p, ascending. Throws DegreeTooLarge for p > 30.
std::vector<std::int64_t> hermite_coefficients(int p);

/// H_p as a MonicPolynomial. Throws DegreeTooLarge for p > 30.
MonicPolynomial hermite(int p);

/// H_p(x) by the three-term recursion.
double hermite_eval(int p, double x);

/// Fills out[0..n) with H_0(x), ..., H_{n-1}(x).
void hermite_eval_all(double x, std::span<double> out) noexcept;

/// E H_p(Z)^2 = p! for the standard normal Z. Requires 0 <= p <= 20.
double hermite_sq_gaussian_mean(int p);

/// p! as a double.
double factorial(int p);

}  // namespace fisherp
