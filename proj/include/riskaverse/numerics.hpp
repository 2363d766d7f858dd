#pragma once
// Numerical kernel: adaptive quadrature over boxes, grid argmax with
// refinement, finite-difference Hessians and the set-limit detector.

#include "riskaverse/core.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riskaverse {

using ScalarField = std::function<double(const Vector&)>;

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Sum whose result depends only on the multiset of terms, never on their
/// order. Terms are accumulated exactly per binary exponent and the bins are
/// combined in ascending exponent order.
double invariant_sum(std::span<const double> terms);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_cells = 20000;
  /// Optional interior cut points per dimension; the initial partition is the
  /// tensor grid they induce. Used for declared discontinuities.
  std::vector<std::vector<double>> breakpoints;
  /// Initial uniform splits per dimension (applied inside each breakpoint cell).
  int initial_splits = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Adaptive tensor-product Gauss-Kronrod (7/15) quadrature. Converged when
/// the summed |K - G| estimate is below max(abs_tol, rel_tol * |value|).
/// Throws NumericalError on a non-finite integrand value; an exhausted cell
/// budget is reported through `converged`.
QuadratureResult integrate(const ScalarField& fn, const Box& box, const QuadratureOptions& opts = {});

/// integrate() with an absolute tolerance; throws NumericalError if the
/// budget is exhausted before the tolerance is met.
double integrate_box(const ScalarField& fn, const Box& box, double tol);

// ---------------------------------------------------------------------------
// Grid argmax
// ---------------------------------------------------------------------------

struct GridSpec {
  int points_per_dim = 21;
  int refinement_rounds = 8;
  double shrink_factor = 0.25;

  void validate() const;
};

/// Value taken by set estimators: all maximizers found within a relative
/// plateau tolerance of the best value.
struct SetEstimate {
  std::vector<Vector> points;
  std::vector<double> values;
  double value = 0.0;
  double plateau_tol = 1e-9;
  /// Final grid spacing (max over dimensions); 0 for finite parameter sets.
  double cell_size = 0.0;
  /// Coarsest grid spacing, the resolution at which plateaus are reported.
  double coarse_cell_size = 0.0;
  /// A connected flat region was found (as opposed to isolated ties).
  bool plateau = false;
  /// Set estimator returned nothing; the estimator is not well defined here.
  bool empty = false;
  std::vector<std::string> notes;

  std::size_t size() const { return points.size(); }
};

inline constexpr double kDefaultPlateauTol = 1e-9;

/// Maximizes `fn` over `box` by a uniform grid followed by windowed
/// refinement around every competitive local maximum. `fn` may return -inf
/// to exclude a point; NaN is an error.
SetEstimate grid_argmax(const ScalarField& fn, const Box& box, const GridSpec& grid,
                        double plateau_tol = kDefaultPlateauTol);

/// Argmax over an explicit finite candidate list, retaining all ties.
SetEstimate finite_argmax(const std::vector<Vector>& candidates, std::span<const double> values,
                          double plateau_tol = kDefaultPlateauTol);

/// Largest distance from any point of `a` to its nearest point of `b` and
/// vice versa (Hausdorff distance); infinity when exactly one is empty.
double set_distance(const std::vector<Vector>& a, const std::vector<Vector>& b);

// ---------------------------------------------------------------------------
// Derivatives
// ---------------------------------------------------------------------------

struct HessianResult {
  Matrix hessian;
  Vector steps;
  bool one_sided = false;
};

/// Symmetrized central-difference Hessian. When `box` is given, steps are
/// shrunk to stay inside it and fall back to first-order one-sided stencils
/// within 10% of the requested step from a face (flagged in the result).
HessianResult finite_diff_hessian(const ScalarField& fn, const Vector& point, double step,
                                  const std::optional<Box>& box = std::nullopt);

// ---------------------------------------------------------------------------
// Level-set helpers
// ---------------------------------------------------------------------------

/// Distance along unit direction `dir` from `origin` to the first point where
/// fn >= level, searched up to `max_distance`. Returns max_distance when no
/// crossing is found. Assumes fn(origin) < level.
double ray_crossing(const ScalarField& fn, const Vector& origin, const Vector& dir, double level,
                    double max_distance, double rel_tol = 1e-12);

/// Largest t >= 0 such that origin + t*dir stays in the box (dir nonzero).
double distance_to_face(const Box& box, const Vector& origin, const Vector& dir);

// ---------------------------------------------------------------------------
// Set limit
// ---------------------------------------------------------------------------

struct SetLimit {
  SetEstimate limit;
  bool diverged = false;
  std::string reason;
};

/// Numerical setlim: points of the final trace that have a partner within
/// `match_radius` in each of the last `stability_window` traces. Repeating
/// the final trace keeps a detected limit unchanged. `diameter`, when
/// positive, bounds the admissible spread of the final window.
SetLimit setlim_detect(const std::vector<SetEstimate>& traces, double match_radius,
                       int stability_window = 3, double diameter = 0.0);

}  // namespace riskaverse
