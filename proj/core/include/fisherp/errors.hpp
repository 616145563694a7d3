#pragma once

#include <stdexcept>
#include <string>

namespace fisherp {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No analytic derivative rule exists for the requested (family, order).
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

/// A moment needed by the computation is infinite.
class MomentRequired : public Error {
 public:
  using Error::Error;
};

/// Root finding did not converge (usually a defective CDF).
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// The density does not live on a single interval of positivity.
class UnsupportedDensity : public Error {
 public:
  using Error::Error;
};

/// Malformed density descriptor. `field()` names the offending JSON path.
class DescriptorError : public Error {
 public:
  DescriptorError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

}  // namespace fisherp
