#pragma once
// Classical point estimators and the risk-averse engine.

#include "riskaverse/information.hpp"
#include "riskaverse/losses.hpp"

#include <vector>

namespace riskaverse {

struct KSchedule {
  std::vector<double> k_values;

  /// Strictly increasing, positive and at least four entries long.
  void validate() const;
  /// base^j for j = first..last.
  static KSchedule geometric(double base = 4.0, int first = 0, int last = 12);
};

struct ConvergenceTrace {
  std::vector<double> k_values;
  std::vector<SetEstimate> per_k_estimates;
  /// max over theta of V_k(theta).
  std::vector<double> per_k_max_gain;
  /// The same maxima times k^(M/2); comparable across k on continuous
  /// parameter spaces. Equal to per_k_max_gain for finite ones.
  std::vector<double> per_k_scaled_gain;

  /// Largest increase of per_k_max_gain from one k to the next (0 when
  /// monotone non-increasing).
  double monotonicity_violation() const;
};

struct RiskAverseOptions {
  /// Match radius for the set limit; 0 picks the coarse grid spacing, or
  /// half the closest pair distance on a finite parameter set.
  double match_radius = 0.0;
  int stability_window = 3;
  /// Relative tolerance of the V_k quadrature.
  double gain_rel_tol = 1e-9;
};

struct RiskAverseResult {
  ConvergenceTrace trace;
  SetLimit limit;
};

/// argmax of the posterior mass over a finite parameter set.
SetEstimate map_estimate(const EstimationProblem& problem, const Observation& x,
                         double plateau_tol = kDefaultPlateauTol);
/// argmax of the posterior density over a continuous parameter space.
SetEstimate fmap_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid = {});
/// argmax of the likelihood of x (either kind of parameter space).
SetEstimate ml_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid = {});
/// argmax of f(theta | x) / sqrt(det I_theta). Points with a singular or
/// non-finite Fisher matrix are excluded and counted in the notes; throws
/// NumericalError when no point survives.
SetEstimate wf_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid = {},
                        double step = 0.0);
/// argmax of f(theta | x) / sqrt(det H_L(theta)), excluding points where the
/// loss Hessian is not positive definite.
SetEstimate generalized_wf(const EstimationProblem& problem, const Observation& x, const Loss& L,
                           const GridSpec& grid = {}, double step = 0.0);

/// Posterior expectation of theta (continuous parameter) or the
/// mass-weighted mean of the points (finite parameter set).
Vector posterior_mean(const EstimationProblem& problem, const Observation& x, double tol = 1e-10);

/// V_k(theta) = E[A(k L(theta~, theta)) | x]. Exact on a finite parameter
/// set; otherwise quadrature over the region where k L < a0, located by ray
/// crossings from theta and padded by a margin.
double expected_gain(const Posterior& post, const Loss& L, const Attenuation& A, double k, const Vector& theta,
                     double rel_tol = 1e-9);
double expected_gain(const EstimationProblem& problem, const Loss& L, const Attenuation& A, double k,
                     const Vector& theta, const Observation& x, double rel_tol = 1e-9);

/// Posterior mass of N_k(theta) = {theta' : A(k L(theta', theta)) > 0} on a
/// finite parameter set.
double neighbourhood_mass(const Posterior& post, const Loss& L, const Attenuation& A, double k, const Vector& theta);

/// Per-k argmax of V_k over the schedule followed by set-limit detection.
/// Divergence is reported in the result, not thrown.
RiskAverseResult risk_averse_estimate(const EstimationProblem& problem, const Loss& L, const Attenuation& A,
                                      const KSchedule& schedule, const Observation& x, const GridSpec& grid = {},
                                      const RiskAverseOptions& opts = {});

}  // namespace riskaverse
