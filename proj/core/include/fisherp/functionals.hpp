#pragma once

// Information functionals of a density f:
//   I^(p)    = int f^(p)^2 / f                 (Fisher information of order p)
//   I_p      = int |f'|^p / f^(p-1)            (score moments, real p >= 1)
//   V_{k,l}  = int f^(k) f^(l) / f              (cross functionals)
//   I^(p)(X|Z) = int (f^(p)/f - (-1)^p H_p)^2 f (relative to the standard normal)
// plus the derivative norms and characteristic-function probes used by the
// inequality checks. Wherever f(x) <= 1e-300 the integrand is taken as 0.

#include <vector>

#include "fisherp/densities.hpp"
#include "fisherp/hermite.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {

inline constexpr int kMaxFisherOrder = 8;
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kMaxCharfnArgument = 1e3;

/// I^(p). p = 0 gives exactly 1; a closed smoothness gate gives Divergent
/// without integrating. Throws UnsupportedOrder for p > kMaxFisherOrder.
FunctionalValue fisher_info(const DensityModel& model, int p, const QuadratureConfig& config = {});

/// The integral of f^(p)^2 / f over the support with no smoothness gate; the
/// quadrature classifier alone decides finiteness.
FunctionalValue fisher_integral(const DensityModel& model, int p, const QuadratureConfig& config = {});

FunctionalValue score_moment(const DensityModel& model, double p, const QuadratureConfig& config = {});

FunctionalValue cross_functional(const DensityModel& model, int k, int l,
                                 const QuadratureConfig& config = {});

class CrossFunctionalMatrix {
 public:
  CrossFunctionalMatrix(int order, std::vector<FunctionalValue> entries);

  int order() const noexcept { return order_; }
  const FunctionalValue& at(int k, int l) const;

 private:
  int order_;
  std::vector<FunctionalValue> entries_;
};

/// V_{k,l} for 0 <= k, l <= p. Diagonal entries are I^(k).
CrossFunctionalMatrix cross_functional_matrix(const DensityModel& model, int p,
                                              const QuadratureConfig& config = {});

struct RelativeFisherValue {
  FunctionalValue value;        // direct quadrature
  double identity_value = 0.0;  // I^(p) - 2 p! + E H_p(X)^2
  double relative_discrepancy = 0.0;
  bool defect = false;  // discrepancy above kRelativeFisherDefect

  static constexpr double kRelativeFisherDefect = 1e-5;
};

/// Throws MomentRequired when E X^(2p) is infinite.
RelativeFisherValue relative_fisher(const DensityModel& model, int p,
                                    const QuadratureConfig& config = {});

/// E H(X)^2.
FunctionalValue hermite_square_mean(const DensityModel& model, const MonicPolynomial& poly,
                                    const QuadratureConfig& config = {});

/// int |f^(k)|; Divergent when the gate for k is closed.
FunctionalValue derivative_tv_norm(const DensityModel& model, int k, const QuadratureConfig& config = {});

/// int (f^(p))^2.
FunctionalValue derivative_l2_norm(const DensityModel& model, int p, const QuadratureConfig& config = {});

/// int |x|^s |f^(p)(x)| dx.
FunctionalValue derivative_weighted_l1(const DensityModel& model, int p, double s,
                                       const QuadratureConfig& config = {});

/// sup |f^(k)| over the support, by sampling and local refinement.
double derivative_sup_norm(const DensityModel& model, int k);

/// |E exp(itX)|: closed form when available, otherwise quadrature.
/// Inconclusive for |t| > kMaxCharfnArgument.
FunctionalValue charfn_modulus(const DensityModel& model, double t, const QuadratureConfig& config = {});

/// Always by quadrature (cosine and sine parts over the effective support).
FunctionalValue charfn_modulus_quadrature(const DensityModel& model, double t,
                                          const QuadratureConfig& config = {});

}  // namespace fisherp
