#pragma once

// Inequality harness. Every check evaluates both sides of an inequality
// numerically and orients them so that lhs is the side expected to be larger:
// slack = lhs - rhs, and the verdict is Pass iff slack >= -tolerance_used.
// Inputs outside the hypotheses of an inequality (a divergent information,
// an infinite moment) are Skipped, never Failed.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fisherp/densities.hpp"
#include "fisherp/hermite.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {

enum class Verdict { Pass, Fail, Skipped, Observation };

std::string_view to_string(Verdict verdict) noexcept;

/// Machine-readable reasons carried by Skipped reports.
namespace skip_reason {
inline constexpr const char* kDivergentInput = "DivergentInput";
inline constexpr const char* kMomentRequired = "MomentRequired";
inline constexpr const char* kInconclusive = "Inconclusive";
inline constexpr const char* kUnsupported = "Unsupported";
}  // namespace skip_reason

struct InequalityReport {
  std::string check_name;
  nlohmann::json inputs;  // fingerprint of the parameters
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  Verdict verdict = Verdict::Skipped;
  double tolerance_used = 0.0;
  std::string reason;  // skip reason, or a short note

  nlohmann::json to_json() const;
};

/// max(1e-6 |rhs|, 1e-9).
double default_tolerance(double rhs);
/// Ten times the default; used where the inequality is an equality.
double equality_tolerance(double rhs);

/// lhs >= rhs - tolerance. A negative tolerance selects default_tolerance(rhs).
InequalityReport inequality_report(std::string name, nlohmann::json inputs, double lhs, double rhs,
                                   double tolerance = -1.0);

/// |lhs - rhs| <= tolerance, reported with slack = -|lhs - rhs|.
InequalityReport equality_report(std::string name, nlohmann::json inputs, double lhs, double rhs,
                                 double tolerance = -1.0);

InequalityReport skipped_report(std::string name, nlohmann::json inputs, std::string reason);

/// Swaps lhs and rhs and recomputes the verdict (used for negative controls).
InequalityReport inverted(InequalityReport report);

/// Weights alpha_0..alpha_p on the simplex, used to combine the terms of the
/// order-p Stam expansion.
class StamWeights {
 public:
  /// Throws InvalidArgument unless all weights are >= 0 and sum to 1 within 1e-12.
  explicit StamWeights(std::vector<double> alpha);

  /// Minimizer of Q(alpha) = sum A_k alpha_k^2: alpha_k proportional to 1/A_k.
  /// Requires every A_k > 0.
  static StamWeights optimal(std::span<const double> a);

  const std::vector<double>& alpha() const noexcept { return alpha_; }

  double objective(std::span<const double> a) const;

 private:
  std::vector<double> alpha_;
};

/// (sum 1/A_k)^-1, the minimum of Q over the simplex.
double stam_minimum(std::span<const double> a);

/// Known closed forms of I^(p): normal (any p), gamma (p <= 3), logistic
/// (p <= 2) and affine images of these.
std::optional<double> closed_form_fisher(const DensityModel& model, int p);

/// Known closed form of V_{1,2}: gamma with n > 3, normal laws (0).
std::optional<double> closed_form_v12(const DensityModel& model);

// Individual checks ----------------------------------------------------------

/// I^(p) + E H(X)^2 >= 2 p!. When poly = H_p and E H_p(X)^2 = p! within 1e-6,
/// a second report asserts I^(p) >= p! - 1e-6.
std::vector<InequalityReport> check_cramer_rao(const DensityModel& model, int p, const MonicPolynomial& poly,
                                               const QuadratureConfig& config = {});

/// I^(p) E X^(2p) >= p! / 2.
InequalityReport check_cramer_rao_product(const DensityModel& model, int p, const QuadratureConfig& config = {});

/// Direct relative Fisher information against I^(p) - 2 p! + E H_p^2, equal
/// within rel_tol relative.
InequalityReport check_relative_fisher(const DensityModel& model, int p, double rel_tol = 1e-5,
                                       const QuadratureConfig& config = {});

/// {I^(2) >= I_4 / 3, I_4 / 3 >= I^2 / 3}.
std::vector<InequalityReport> check_order_two_chain(const DensityModel& model, const QuadratureConfig& config = {});

/// 1/I^(p)(X+Y) >= 1/I^(p)(X) + 1/I^(p)(Y) + 1/(I^(k)(X) I^(p-k)(Y)).
InequalityReport check_stam(const DensityModel& x, const DensityModel& y, int p, int k,
                            const QuadratureConfig& config = {});

/// I^(k)(X) I^(p-k)(Y) >= I^(p)(X+Y).
InequalityReport check_stam_product(const DensityModel& x, const DensityModel& y, int p, int k,
                                    const QuadratureConfig& config = {});

/// 1/I^(p)(X+Y) >= sum_k 1/(I^(k)(X) I^(p-k)(Y)), I^(0) = 1. Proven for a
/// normal X; for other X a failure is reported as Observation.
InequalityReport check_stam_sharp(const DensityModel& x, const DensityModel& y, int p,
                                  const QuadratureConfig& config = {});

/// Gamma(n), p = 3: V_{1,2} V_{2,1} > 0 (lhs = product, rhs = its error
/// bound) and V_{1,2} = 2/((n-2)(n-3)) within 1e-6 relative.
std::vector<InequalityReport> check_cross_term_sign(double n, const QuadratureConfig& config = {});

/// sum alpha_i I^(p)(f_i) >= I^(p)(mixture).
InequalityReport check_convexity(const DensityModel& mixture, int p, const QuadratureConfig& config = {});

/// Integrability and decay bounds for derivatives of f up to order p >= 2:
///   a: int |f^(k)| <= 4^(p-1) int |f| + 2^(4^p) int |f^(p)|, 1 <= k <= p-1
///   b: int |f'| <= int |f| + (2/3) int |f''|
///   c: int |f^(p)| <= sqrt(I^(p)) and sup |f^(p-1)| <= sqrt(I^(p))
///   d: int (f^(p))^2 <= I^(p)^(3/2)
///   e: int |x|^p |f^(p)| <= sqrt(beta_2p I^(p))
///   f: |f^(p-1)(x)| <= (1 + sqrt(beta_2p)) sqrt(I^(p)) / (1 + |x|^p) on 21 points
std::vector<InequalityReport> check_derivative_bounds(const DensityModel& model, int p,
                                                      const QuadratureConfig& config = {});

/// |t|^p |f^(t)| strictly decreasing along t = 5, 10, 20, 40.
InequalityReport check_charfn_decay(const DensityModel& model, int p, const QuadratureConfig& config = {});

/// The classifier decides I^(p) finite (expect_finite) or Divergent.
InequalityReport check_finiteness(const DensityModel& model, int p, bool expect_finite,
                                  const QuadratureConfig& config = {});

/// Computed I^(p) against closed_form_fisher within rel_tol.
InequalityReport check_fisher_closed_form(const DensityModel& model, int p, double rel_tol,
                                          const QuadratureConfig& config = {});

/// Direct I^(2) against both profile representations and each other
/// (rel_tol_i2), profile I against direct I (rel_tol_i1), and profile I
/// against a closed form when one is known (rel_tol_i1 / 10).
std::vector<InequalityReport> check_profile_equivalence(const DensityModel& model, double rel_tol_i2 = 1e-4,
                                                        double rel_tol_i1 = 1e-5,
                                                        const QuadratureConfig& config = {});

/// I^(p)(X + eps Z) along a decreasing eps ladder: strictly increasing,
/// bounded by I^(p)(eps Z) = p! eps^(-2p), last rung within final_rel of target.
std::vector<InequalityReport> check_smoothing_ladder(const DensityModel& model, int p,
                                                     const std::vector<double>& eps,
                                                     std::optional<double> target, double final_rel,
                                                     const QuadratureConfig& config = {});

/// Quadrature against the Gaussian weight: |E H_k H_l| <= 1e-9 for k < l <= max_orth,
/// E H_p^2 = p! within 1e-9 relative for p <= max_norm.
std::vector<InequalityReport> check_hermite_orthogonality(int max_orth = 8, int max_norm = 10);

/// Closed-form weights reach stam_minimum, and `perturbations` random
/// admissible weight vectors do not go below it.
std::vector<InequalityReport> check_weight_optimality(const std::vector<double>& a, int perturbations = 20,
                                                      unsigned seed = 1);

// Manifest driver ------------------------------------------------------------

/// Manifest: {"checks": [{"name": ..., "params": {...}, "grid": {...}}]}.
/// Each grid key lists values; the cartesian product is merged into params.
/// params.invert = true swaps the sides of every report (negative control).
/// Throws ManifestError on unknown names or malformed entries.
std::vector<InequalityReport> run_suite(const nlohmann::json& manifest, const QuadratureConfig& config = {});

/// Names accepted in a manifest.
std::vector<std::string> suite_check_names();

/// 1 when any report failed, 0 otherwise.
int suite_exit_status(const std::vector<InequalityReport>& reports);

nlohmann::json reports_to_json(const std::vector<InequalityReport>& reports);

/// Header check_name,inputs,lhs,rhs,slack,verdict,tolerance,reason.
std::string reports_to_csv(const std::vector<InequalityReport>& reports);

/// Finite numbers as JSON numbers; infinities and NaN as "inf", "-inf", "nan".
nlohmann::json json_number(double v);

/// %.17g, with "inf" / "-inf" / "nan".
std::string format_number(double v);

}  // namespace fisherp
