#pragma once
// Fisher information, loss Hessians and the constant linking them.

#include "riskaverse/losses.hpp"

#include <string>
#include <vector>

namespace riskaverse {

struct InfoMatrix {
  enum class Method { exact_discrete, quadrature, finite_difference };

  Matrix entries;
  Vector theta;
  Method method = Method::exact_discrete;
  /// A first-order one-sided stencil was needed near a face of the box.
  bool one_sided = false;
  std::vector<std::string> notes;

  double min_eigenvalue() const;
  double determinant() const;
  /// Finite, symmetric and with positive determinant.
  bool positive_definite() const;
};

/// Default finite-difference step: 1e-4 of the narrowest side of the box.
double default_score_step(const EstimationProblem& problem);
/// Default Hessian step: 1e-3 of the narrowest side of the box.
double default_hessian_step(const EstimationProblem& problem);

/// E[score score^T | theta] with the score from central differences of the
/// log-likelihood. Exact sum over a discrete support, quadrature otherwise.
/// Near a face the step shrinks to the available room, and below 10% of the
/// requested step a one-sided difference is used (noted and flagged).
/// `step` <= 0 selects default_score_step.
InfoMatrix fisher_information(const EstimationProblem& problem, const Vector& theta, double step = 0.0);

/// Hessian of theta' -> L(theta', theta) at theta' = theta. Entries below
/// -1e-6 in the spectrum are reported in the notes as a violation of the
/// positive semidefiniteness implied by L >= 0 and L(theta, theta) = 0.
InfoMatrix loss_hessian(const EstimationProblem& problem, const Loss& L, const Vector& theta, double step = 0.0);

struct GammaRow {
  Vector theta;
  Matrix fisher;
  Matrix hessian;
  /// <H, I> / <I, I> at this point alone.
  double gamma = 0.0;
  /// ||H - gamma I||_F / ||gamma I||_F with the global gamma, so that the
  /// residual does not depend on the scale of L.
  double residual = 0.0;
};

struct GammaFit {
  double gamma = 0.0;
  double max_residual = 0.0;
  std::vector<GammaRow> rows;
  std::vector<Vector> excluded;
  std::vector<std::string> notes;
};

/// Least-squares scalar fit of H_L(theta) ~ gamma I(theta) over the grid.
/// Points with a singular or non-finite Fisher matrix are excluded and
/// noted; throws NumericalError when every point is excluded.
GammaFit gamma_fit(const EstimationProblem& problem, const Loss& L, const std::vector<Vector>& theta_grid,
                   double score_step = 0.0, double hessian_step = 0.0);

}  // namespace riskaverse
