#include "fisherp/hermite.hpp"

#include <string>

#include "fisherp/errors.hpp"

namespace fisherp {

MonicPolynomial::MonicPolynomial(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty() || coefficients_.back() != 1.0) {
    throw InvalidArgument("monic polynomial needs leading coefficient 1");
  }
}

MonicPolynomial MonicPolynomial::monomial(int degree) {
  if (degree < 0) throw InvalidArgument("negative polynomial degree");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = 1.0;
  return MonicPolynomial(std::move(c));
}

double MonicPolynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

std::vector<double> MonicPolynomial::derivative_coefficients() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    d.push_back(static_cast<double>(i) * coefficients_[i]);
  }
  if (d.empty()) d.push_back(0.0);
  return d;
}

std::vector<std::int64_t> hermite_coefficients(int p) {
  if (p < 0) throw InvalidArgument("negative Hermite degree");
  if (p > kMaxHermiteDegree) {
    throw DegreeTooLarge("Hermite degree " + std::to_string(p) + " exceeds " +
                         std::to_string(kMaxHermiteDegree));
  }
  std::vector<std::int64_t> prev{1};
  if (p == 0) return prev;
  std::vector<std::int64_t> curr{0, 1};
  for (int n = 1; n < p; ++n) {
    // H_{n+1} = x H_n - n H_{n-1}
    std::vector<std::int64_t> next(static_cast<std::size_t>(n) + 2, 0);
    for (std::size_t i = 0; i < curr.size(); ++i) next[i + 1] = curr[i];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      std::int64_t scaled = 0;
      std::int64_t updated = 0;
      if (__builtin_mul_overflow(prev[i], static_cast<std::int64_t>(n), &scaled) ||
          __builtin_sub_overflow(next[i], scaled, &updated)) {
        throw DegreeTooLarge("Hermite coefficient overflow");
      }
      next[i] = updated;
    }
    prev = std::move(curr);
    curr = std::move(next);
  }
  return curr;
}

MonicPolynomial hermite(int p) {
  const auto exact = hermite_coefficients(p);
  std::vector<double> c(exact.begin(), exact.end());
  return MonicPolynomial(std::move(c));
}

double hermite_eval(int p, double x) {
  if (p < 0) throw InvalidArgument("negative Hermite degree");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double curr = x;
  for (int n = 1; n < p; ++n) {
    const double next = x * curr - n * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

void hermite_eval_all(double x, std::span<double> out) noexcept {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = x * out[n] - static_cast<double>(n) * out[n - 1];
  }
}

double factorial(int p) {
  if (p < 0) throw InvalidArgument("negative factorial argument");
  double r = 1.0;
  for (int i = 2; i <= p; ++i) r *= i;
  return r;
}

double hermite_sq_gaussian_mean(int p) {
  if (p < 0 || p > 20) throw InvalidArgument("hermite_sq_gaussian_mean needs 0 <= p <= 20");
  return factorial(p);
}

}  // namespace fisherp
