#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace fisherp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lower, upper); either end may be infinite.
class SupportInterval {
 public:
  SupportInterval(double lower, double upper);

  static SupportInterval real_line() { return {-kInf, kInf}; }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  bool lower_finite() const noexcept { return lower_ > -kInf; }
  bool upper_finite() const noexcept { return upper_ < kInf; }
  bool contains(double x) const noexcept { return x > lower_ && x < upper_; }

  friend bool operator==(const SupportInterval&, const SupportInterval&) = default;

 private:
  double lower_;
  double upper_;
};

enum class Status { Finite, Divergent, Inconclusive };

std::string_view to_string(Status status) noexcept;

/// Result of an improper or singular integral.
struct FunctionalValue {
  double value = 0.0;
  double error_estimate = 0.0;
  Status status = Status::Finite;
  std::int64_t node_count = 0;

  bool finite() const noexcept { return status == Status::Finite; }
  bool divergent() const noexcept { return status == Status::Divergent; }

  static FunctionalValue exact(double v) { return {v, 0.0, Status::Finite, 0}; }
  static FunctionalValue divergent_value(std::int64_t nodes = 0) {
    return {kInf, kInf, Status::Divergent, nodes};
  }
};

/// Sum of two integrals over disjoint pieces.
inline FunctionalValue add_values(const FunctionalValue& a, const FunctionalValue& b) {
  if (a.divergent() || b.divergent()) return FunctionalValue::divergent_value(a.node_count + b.node_count);
  const Status s = a.finite() && b.finite() ? Status::Finite : Status::Inconclusive;
  return {a.value + b.value, a.error_estimate + b.error_estimate, s, a.node_count + b.node_count};
}

}  // namespace fisherp
