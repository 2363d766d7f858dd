#pragma once
// Estimation problems, their posteriors, and the three transforms the
// invariance axioms quantify over.

#include "riskaverse/core.hpp"
#include "riskaverse/numerics.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace riskaverse {

using Observation = Vector;

class ObservationSpace {
 public:
  enum class Kind { continuous, discrete };

  /// Continuous observations in R^N. Quadrature over X runs on
  /// `integration_box`, which must carry all but a negligible part of every
  /// likelihood's mass; `breakpoints` lists known discontinuities per axis and
  /// `cuts` an initial partition fine enough to resolve the likelihoods.
  static ObservationSpace continuous(Box integration_box, std::vector<std::vector<double>> breakpoints = {},
                                     std::vector<std::vector<double>> cuts = {});
  /// Finite support; points must be pairwise distinct and share a dimension.
  static ObservationSpace discrete(std::vector<Vector> support);

  Kind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == Kind::discrete; }
  int dim() const { return dim_; }

  const std::vector<Vector>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  /// Position of `x` in the support, if present.
  std::optional<std::size_t> index_of(const Vector& x) const;

  const Box& integration_box() const { return box_; }
  const std::vector<std::vector<double>>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<double>>& cuts() const { return cuts_; }
  /// Breakpoints and cuts merged, as quadrature breakpoints.
  std::vector<std::vector<double>> quadrature_cuts() const;

 private:
  Kind kind_ = Kind::continuous;
  int dim_ = 0;
  std::vector<Vector> support_;
  std::shared_ptr<const std::map<std::vector<double>, std::size_t>> lookup_;
  Box box_;
  std::vector<std::vector<double>> breakpoints_;
  std::vector<std::vector<double>> cuts_;
};

/// Integral of `fn` over a continuous observation space, starting from its
/// declared partition.
QuadratureResult integrate_observations(const ObservationSpace& space, const ScalarField& fn, double rel_tol = 1e-10,
                                        double abs_tol = 0.0, std::size_t max_cells = 50000);

using PriorFn = std::function<double(const Vector& theta)>;
using LikelihoodFn = std::function<double(const Vector& theta, const Vector& x)>;
/// Likelihood masses over the whole support, in support order.
using MassesFn = std::function<Vector(const Vector& theta)>;

/// A joint distribution of (x, theta). For a finite parameter set the prior
/// returns probability masses at `theta_points`; otherwise it is a density on
/// `theta_space`. Problems are immutable once built and safe to share.
struct EstimationProblem {
  std::string label;
  ParameterSpace theta_space;
  std::vector<Vector> theta_points;
  ObservationSpace obs_space;
  PriorFn prior;
  LikelihoodFn likelihood;
  /// Optional fast path for discrete observations.
  MassesFn masses;
  std::vector<std::string> notes;

  bool finite_theta() const { return !theta_points.empty(); }
  int theta_dim() const { return theta_space.dim(); }
  int obs_dim() const { return obs_space.dim(); }

  /// Likelihood masses over the support (discrete observations only).
  Vector likelihood_masses(const Vector& theta) const;
  /// Index into `theta_points` of a point of a finite parameter set.
  std::optional<std::size_t> theta_index(const Vector& theta, double tol = 1e-12) const;
  /// Throws std::invalid_argument unless `x` is a legal observation.
  void check_observation(const Vector& x) const;

  /// Probe-based validation: positive prior, normalized masses and distinct
  /// likelihoods. Throws std::invalid_argument with the first failure.
  void validate() const;

  /// Interior probe points of the parameter space (the points themselves for
  /// a finite parameter set).
  std::vector<Vector> probe_points(int per_dim = 7) const;
};

/// Smallest box around a finite point set, padded where degenerate.
Box bounding_box(const std::vector<Vector>& points, double pad = 0.5);

/// Posterior f(theta | x) with a cached normalizing constant.
class Posterior {
 public:
  Posterior(const EstimationProblem& problem, Observation x, double rel_tol = 1e-10);

  const EstimationProblem& problem() const { return problem_; }
  const Observation& observation() const { return x_; }
  /// prior(theta) * likelihood(theta, x).
  double unnormalized(const Vector& theta) const;
  /// Normalized density (continuous) or mass (finite parameter set).
  double weight(const Vector& theta) const { return unnormalized(theta) / z_; }
  double normalizer() const { return z_; }
  /// Posterior masses aligned with `theta_points` (finite parameter set).
  const std::vector<double>& masses() const { return masses_; }

 private:
  EstimationProblem problem_;
  Observation x_;
  double z_ = 1.0;
  std::vector<double> masses_;
};

double posterior_weight(const EstimationProblem& problem, const Observation& x, const Vector& theta);

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

struct Diffeomorphism {
  std::string name;
  std::function<Vector(const Vector&)> forward;
  std::function<Vector(const Vector&)> inverse;
  /// |det J| of the forward map at a point.
  std::function<double(const Vector&)> jacobian_det;

  /// Round trip to 1e-9 and nonzero Jacobian at each probe; throws otherwise.
  void validate(const std::vector<Vector>& probes) const;
};

namespace transforms {
Diffeomorphism identity();
Diffeomorphism affine(double scale, double shift);
/// theta -> theta^3 per coordinate; singular Jacobian at 0.
Diffeomorphism cube();
/// theta -> theta^3 + theta per coordinate; smooth everywhere.
Diffeomorphism cubic_plus_linear();
Diffeomorphism exp();
Diffeomorphism sinh();
/// Swaps the first two coordinates.
Diffeomorphism coordinate_swap();
/// Cyclic relabeling of a finite support: support[i] -> support[i + shift].
Diffeomorphism support_permutation(const std::vector<Vector>& support, std::size_t shift = 1);
}  // namespace transforms

struct ReparamOptions {
  /// Accept a transformed space that is not a box, using its hull with zero
  /// prior outside the image.
  bool allow_hull = false;
  int hull_probes_per_dim = 257;
};

/// Problem expressed in phi = F(theta). The reported leakage (fraction of
/// hull probes outside the image) is appended to the notes.
EstimationProblem reparameterize(const EstimationProblem& problem, const Diffeomorphism& F,
                                 const ReparamOptions& opts = {});

/// Problem observed through y = G(x).
EstimationProblem transform_observations(const EstimationProblem& problem, const Diffeomorphism& G);

struct DiscreteDistribution {
  std::vector<Vector> points;
  std::vector<double> masses;

  void validate() const;
  static DiscreteDistribution coin(double p_heads);
  static DiscreteDistribution point_mass();
};

/// Observations (x, y) with y drawn independently of theta from `noise`.
/// The support is ordered x-major: (x_i, y_j) sits at i * |Y| + j.
EstimationProblem augment_superfluous(const EstimationProblem& problem, const DiscreteDistribution& noise);

}  // namespace riskaverse
