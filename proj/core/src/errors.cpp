#include "fisherp/errors.hpp"
#include "fisherp/types.hpp"

#include <cmath>

namespace fisherp {

DescriptorError::DescriptorError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

SupportInterval::SupportInterval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw InvalidArgument("support interval requires lower < upper");
  }
}

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Finite:
      return "finite";
    case Status::Divergent:
      return "divergent";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

}  // namespace fisherp
