#pragma once
// Loss functions on parameter pairs, attenuation functions, and the
// likelihood-ratio quantile profile c[P, Q].

#include "riskaverse/problem.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace riskaverse {

/// theta1 -> L(theta1, theta2) for a fixed theta2.
using BoundLoss = std::function<double(const Vector& theta1)>;

struct Loss {
  std::string name;
  /// Depends on (theta1, theta2) only through the likelihoods P_theta1, P_theta2.
  bool likelihood_based = false;
  /// Axiom this loss is built to break ("IRP", "IRO", "IIA", "ISI"), if any.
  std::string designed_violation;
  std::function<double(const EstimationProblem&, const Vector&, const Vector&)> eval;
  /// Optional: precomputes everything that depends on theta2 alone.
  std::function<BoundLoss(const EstimationProblem&, const Vector&)> binder;

  double operator()(const EstimationProblem& p, const Vector& theta1, const Vector& theta2) const {
    return eval(p, theta1, theta2);
  }
  /// The problem must outlive the returned function.
  BoundLoss bind(const EstimationProblem& p, const Vector& theta2) const;
};

// ---------------------------------------------------------------------------
// f-divergences
// ---------------------------------------------------------------------------

struct FFunction {
  std::string name;
  std::function<double(double)> f;
  /// lim F(r)/r as r -> infinity; used where Q has no mass but P does.
  double slope_at_infinity = 0.0;

  /// F(1) = 0 to 1e-12 and midpoint convexity on probe triples.
  void validate() const;
};

namespace f_functions {
FFunction hellinger();        // 1 - sqrt(r)
FFunction chi_squared();      // (r - 1)^2 / 2
FFunction total_variation();  // |r - 1| / 2
FFunction kullback_leibler(); // r log r
FFunction by_name(const std::string& name);
}  // namespace f_functions

/// Squared Hellinger distance, (1/2) * integral of (sqrt p - sqrt q)^2.
double hellinger_sq(const EstimationProblem& p, const Vector& theta1, const Vector& theta2);
/// integral of F(p/q) q, with p = P_theta1 and q = P_theta2.
double f_divergence(const FFunction& F, const EstimationProblem& p, const Vector& theta1, const Vector& theta2);

Loss hellinger_sq_loss();
Loss f_divergence_loss(const FFunction& F);

struct LinearBoundResult {
  bool pass = true;
  double worst_r = 0.0;
  /// max over probes of |F(r)| - (A r + B); nonpositive on pass.
  double worst_excess = 0.0;
};

/// Checks |F(r)| <= A r + B on the probes.
LinearBoundResult linear_bound_check(const FFunction& F, double A, double B, const std::vector<double>& probes);

// ---------------------------------------------------------------------------
// Parameter-space and counterexample losses
// ---------------------------------------------------------------------------

/// |theta1 - theta2|^2.
Loss quadratic_loss();
/// prior(theta2)^(2/M) |theta1 - theta2|^2.
Loss weighted_ml_loss();
/// integral of q (p - q)^2 dx for continuous observations.
Loss iro_violating_loss();
/// Sum over the support of q (p - q)^2.
Loss iro_violating_mass_loss();
/// Sum over coordinates k of E_{x~Q}[ L1(P_k, Q_k) ] where P_k, Q_k are the
/// conditional laws of x(k) given x(1:k-1) and L1 is the mass loss above.
Loss sequential_mass_loss();

/// P(theta2)^2 * base(theta1, theta2), where P(theta2) is the prior mass of
/// {theta : weight(theta, theta2) <= t}. Without `t` the threshold is the
/// median of `weight` over off-diagonal probe pairs of the problem.
Loss iia_violating_loss(const Loss& base, const Loss& weight, std::optional<double> t = std::nullopt);

/// The threshold chosen by iia_violating_loss when none is given.
double default_iia_threshold(const Loss& weight, const EstimationProblem& problem);
/// Prior mass of {theta : weight(theta, theta2) <= t}.
double iia_weight_mass(const Loss& weight, const EstimationProblem& problem, const Vector& theta2, double t);

/// How the G-loss recovers p from a likelihood vector.
enum class RecoveryMode {
  /// p~ = 1/2 - sqrt(1/4 - exp(sum log P / (n 2^(n-1)))) with n = log2 |X|.
  fixed_functional,
  /// Same shape, but the affine map from sum log P to log(p(1-p)) is
  /// calibrated on the problem at hand, so p is recovered on any family
  /// of the form (Bernoulli trials) x (independent noise).
  family_recalibrated,
};

/// 1/2 (G(p~(P1)) - G(p~(P2)))^2 with G(p) = integral of F_weight over
/// (0, p]. F_weight must be positive on (0, 1/2]. The recalibrated mode also
/// needs Theta inside (0, 1/2], since it reads theta as p.
Loss semicontinuous_g_loss(std::function<double(double)> F_weight, std::string weight_name = "F",
                           RecoveryMode mode = RecoveryMode::fixed_functional);

/// The p~ map applied to a likelihood vector of a problem.
double recover_p(const EstimationProblem& problem, const Vector& masses, RecoveryMode mode);

/// Loss by configuration name: hellinger_sq, f_divergence {F}, quadratic,
/// weighted_ml, iro_violating, iro_violating_mass, sequential_mass,
/// iia_violating {base, weight, t}, semicontinuous_g {weight, recovery}.
Loss loss_from_config(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// Positive weight functions accepted by semicontinuous_g: "one", "1+2t",
/// "2t", "exp" (e^t).
std::function<double(double)> weight_function(const std::string& name);

// ---------------------------------------------------------------------------
// Attenuation and gain
// ---------------------------------------------------------------------------

struct Attenuation {
  std::string name;
  std::function<double(double)> eval;
  double threshold_a0 = 1.0;

  double operator()(double a) const { return eval(a); }
};

namespace attenuations {
/// (1 - a)^2 on [0, 1], zero beyond.
Attenuation truncated_quadratic();
/// (1 + cos(pi a)) / 2 on [0, 1], zero beyond.
Attenuation raised_cosine();
Attenuation by_name(const std::string& name);
}  // namespace attenuations

/// A(0) = 1, monotone, zero past a0, and a continuous derivative at a0.
/// Throws std::invalid_argument describing the first violation.
void validate_attenuation(const Attenuation& A);

/// A(k L(theta1, theta2)).
double gain_k(const Attenuation& A, const Loss& L, double k, const EstimationProblem& p, const Vector& theta1,
              const Vector& theta2);

// ---------------------------------------------------------------------------
// c[P, Q]
// ---------------------------------------------------------------------------

/// Step quantile function of r = P/Q under Q: c(t) = values[i] for
/// breakpoints[i-1] < t <= breakpoints[i].
struct RNProfile {
  std::vector<double> breakpoints;
  std::vector<double> values;

  bool operator==(const RNProfile&) const = default;
  /// integral of c over (0, 1]; equals 1 for normalized P, Q.
  double integral() const;
};

RNProfile rn_profile(const Vector& P, const Vector& Q);
RNProfile rn_profile(const EstimationProblem& problem, const Vector& theta1, const Vector& theta2);

}  // namespace riskaverse
