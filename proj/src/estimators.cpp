#include "riskaverse/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace riskaverse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_continuous(const EstimationProblem& p, const char* who) {
  if (p.finite_theta()) {
    throw std::invalid_argument(std::string(who) + ": needs a continuous parameter space (use map_estimate)");
  }
}

std::vector<double> finite_values(const EstimationProblem& p, const std::function<double(const Vector&)>& fn) {
  std::vector<double> v;
  v.reserve(p.theta_points.size());
  for (const auto& th : p.theta_points) v.push_back(fn(th));
  return v;
}

double min_pair_distance(const std::vector<Vector>& pts) {
  double d = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, (pts[i] - pts[j]).norm());
  }
  return d;
}

std::vector<Vector> ray_directions(int M) {
  std::vector<Vector> dirs;
  if (M == 1) return {scalar(1.0), scalar(-1.0)};
  if (M == 2) {
    for (int i = 0; i < 16; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 16.0;
      dirs.push_back(vec({std::cos(a), std::sin(a)}));
    }
    return dirs;
  }
  for (int i = 0; i < M; ++i) {
    Vector e = Vector::Zero(M);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (int mask = 0; mask < (1 << M); ++mask) {
    Vector d(M);
    for (int i = 0; i < M; ++i) d[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    dirs.push_back(d / std::sqrt(static_cast<double>(M)));
  }
  return dirs;
}

}  // namespace

void KSchedule::validate() const {
  if (k_values.size() < 4) throw std::invalid_argument("k schedule needs at least 4 values");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (!(k_values[i] > 0.0) || !std::isfinite(k_values[i])) {
      throw std::invalid_argument("k schedule values must be positive and finite");
    }
    if (i > 0 && !(k_values[i] > k_values[i - 1])) throw std::invalid_argument("k schedule must be strictly increasing");
  }
}

KSchedule KSchedule::geometric(double base, int first, int last) {
  KSchedule s;
  for (int j = first; j <= last; ++j) s.k_values.push_back(std::pow(base, j));
  return s;
}

double ConvergenceTrace::monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < per_k_max_gain.size(); ++i) {
    worst = std::max(worst, per_k_max_gain[i] - per_k_max_gain[i - 1]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Classical estimators
// ---------------------------------------------------------------------------

SetEstimate map_estimate(const EstimationProblem& problem, const Observation& x, double plateau_tol) {
  if (!problem.finite_theta()) {
    throw std::invalid_argument("map_estimate: needs a finite parameter set (use fmap_estimate)");
  }
  Posterior post(problem, x);
  return finite_argmax(problem.theta_points, post.masses(), plateau_tol);
}

SetEstimate fmap_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid) {
  require_continuous(problem, "fmap_estimate");
  Posterior post(problem, x);
  return grid_argmax([&](const Vector& t) { return post.weight(t); }, problem.theta_space, grid);
}

SetEstimate ml_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid) {
  problem.check_observation(x);
  auto lik = [&](const Vector& t) { return problem.likelihood(t, x); };
  if (problem.finite_theta()) return finite_argmax(problem.theta_points, finite_values(problem, lik));
  return grid_argmax(lik, problem.theta_space, grid);
}

namespace {

SetEstimate weighted_density_argmax(const EstimationProblem& problem, const Observation& x, const GridSpec& grid,
                                    const std::function<std::optional<double>(const Vector&)>& volume,
                                    const std::string& what) {
  Posterior post(problem, x);
  std::size_t excluded = 0;
  auto objective = [&](const Vector& t) {
    const double w = post.weight(t);
    if (w == 0.0) return 0.0;
    const std::optional<double> v = volume(t);
    if (!v) {
      ++excluded;
      return -kInf;
    }
    return w / *v;
  };
  SetEstimate est = grid_argmax(objective, problem.theta_space, grid);
  if (excluded > 0) est.notes.push_back(std::to_string(excluded) + " grid points excluded: " + what);
  if (est.empty) throw NumericalError("every grid point was excluded: " + what);
  return est;
}

}  // namespace

SetEstimate wf_estimate(const EstimationProblem& problem, const Observation& x, const GridSpec& grid, double step) {
  require_continuous(problem, "wf_estimate");
  auto volume = [&](const Vector& t) -> std::optional<double> {
    try {
      const InfoMatrix I = fisher_information(problem, t, step);
      if (!I.positive_definite()) return std::nullopt;
      return std::sqrt(I.determinant());
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };
  return weighted_density_argmax(problem, x, grid, volume, "singular or non-finite Fisher information");
}

SetEstimate generalized_wf(const EstimationProblem& problem, const Observation& x, const Loss& L,
                           const GridSpec& grid, double step) {
  require_continuous(problem, "generalized_wf");
  auto volume = [&](const Vector& t) -> std::optional<double> {
    try {
      const InfoMatrix H = loss_hessian(problem, L, t, step);
      if (!H.positive_definite()) return std::nullopt;
      return std::sqrt(H.determinant());
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };
  return weighted_density_argmax(problem, x, grid, volume, "loss Hessian not positive definite");
}

Vector posterior_mean(const EstimationProblem& problem, const Observation& x, double tol) {
  Posterior post(problem, x);
  const int M = problem.theta_dim();
  Vector mean(M);
  if (problem.finite_theta()) {
    for (int i = 0; i < M; ++i) {
      std::vector<double> terms;
      for (std::size_t j = 0; j < problem.theta_points.size(); ++j) {
        terms.push_back(post.masses()[j] * problem.theta_points[j][i]);
      }
      mean[i] = invariant_sum(terms);
    }
    return mean;
  }
  QuadratureOptions q;
  q.rel_tol = tol;
  q.max_cells = 50000;
  for (int i = 0; i < M; ++i) {
    QuadratureResult r = integrate([&](const Vector& t) { return t[i] * post.weight(t); }, problem.theta_space, q);
    if (!r.converged) throw NumericalError("posterior_mean: quadrature did not converge");
    mean[i] = r.value;
  }
  return mean;
}

// ---------------------------------------------------------------------------
// Risk-averse engine
// ---------------------------------------------------------------------------

double expected_gain(const Posterior& post, const Loss& L, const Attenuation& A, double k, const Vector& theta,
                     double rel_tol) {
  if (!(k > 0.0)) throw std::invalid_argument("expected_gain: k must be positive");
  const EstimationProblem& p = post.problem();
  const BoundLoss bound = L.bind(p, theta);
  if (p.finite_theta()) {
    std::vector<double> terms;
    for (std::size_t i = 0; i < p.theta_points.size(); ++i) {
      const double m = post.masses()[i];
      if (m > 0.0) terms.push_back(m * A(k * bound(p.theta_points[i])));
    }
    return invariant_sum(terms);
  }

  const Box& box = p.theta_space;
  const double a0 = A.threshold_a0;
  auto scaled = [&](const Vector& t) { return k * bound(t); };
  auto integrand = [&](const Vector& t) {
    const double w = post.weight(t);
    return w == 0.0 ? 0.0 : w * A(k * bound(t));
  };
  QuadratureOptions q;
  q.rel_tol = rel_tol;
  q.max_cells = 20000;

  // Region where A(kL) can be nonzero, from ray crossings out of theta.
  Vector lo = theta, hi = theta;
  for (const Vector& d : ray_directions(p.theta_dim())) {
    const double reach = distance_to_face(box, theta, d);
    if (reach <= 0.0) continue;
    const Vector end = theta + ray_crossing(scaled, theta, d, a0, reach) * d;
    lo = lo.cwiseMin(end);
    hi = hi.cwiseMax(end);
  }
  const Vector pad = 0.01 * (hi - lo) + 1e-12 * box.width();
  Vector rlo = (lo - pad).cwiseMax(box.lower()), rhi = (hi + pad).cwiseMin(box.upper());

  // The region must hold every point with kL < a0; check on a sample of the
  // rest of the box and fall back to the whole box if it does not.
  bool contained = true;
  if (p.theta_dim() == 1) {
    for (int i = 0; i < 32 && contained; ++i) {
      const double s = box.lower()[0] + box.width()[0] * (i + 0.5) / 32.0;
      if ((s < rlo[0] || s > rhi[0]) && scaled(scalar(s)) < a0) contained = false;
    }
  }
  Box region = box;
  if (contained && (rhi - rlo).minCoeff() > 0.0) {
    region = Box(rlo, rhi);
    if (p.theta_dim() == 1) q.breakpoints = {{lo[0], hi[0]}};
  } else if (p.theta_dim() == 1) {
    q.breakpoints = {{std::max(lo[0], box.lower()[0]), std::min(hi[0], box.upper()[0])}};
  }
  if (!q.breakpoints.empty()) {
    auto& b = q.breakpoints[0];
    b.erase(std::remove_if(b.begin(), b.end(),
                           [&](double v) { return !(v > region.lower()[0] && v < region.upper()[0]); }),
            b.end());
  }
  if ((region.width().array() <= 0.0).any()) return 0.0;
  QuadratureResult r = integrate(integrand, region, q);
  if (!r.converged) throw NumericalError("expected_gain: quadrature did not converge at " + format_point(theta));
  return r.value;
}

double expected_gain(const EstimationProblem& problem, const Loss& L, const Attenuation& A, double k,
                     const Vector& theta, const Observation& x, double rel_tol) {
  Posterior post(problem, x);
  return expected_gain(post, L, A, k, theta, rel_tol);
}

double neighbourhood_mass(const Posterior& post, const Loss& L, const Attenuation& A, double k, const Vector& theta) {
  const EstimationProblem& p = post.problem();
  if (!p.finite_theta()) throw std::invalid_argument("neighbourhood_mass: needs a finite parameter set");
  const BoundLoss bound = L.bind(p, theta);
  std::vector<double> terms;
  for (std::size_t i = 0; i < p.theta_points.size(); ++i) {
    if (A(k * bound(p.theta_points[i])) > 0.0) terms.push_back(post.masses()[i]);
  }
  return invariant_sum(terms);
}

RiskAverseResult risk_averse_estimate(const EstimationProblem& problem, const Loss& L, const Attenuation& A,
                                      const KSchedule& schedule, const Observation& x, const GridSpec& grid,
                                      const RiskAverseOptions& opts) {
  schedule.validate();
  validate_attenuation(A);
  if (static_cast<int>(schedule.k_values.size()) < opts.stability_window) {
    throw std::invalid_argument("risk_averse_estimate: schedule shorter than the stability window");
  }
  Posterior post(problem, x);
  const double M = static_cast<double>(problem.theta_dim());
  RiskAverseResult out;
  for (double k : schedule.k_values) {
    SetEstimate est;
    if (problem.finite_theta()) {
      const std::vector<double> v =
          finite_values(problem, [&](const Vector& t) { return expected_gain(post, L, A, k, t, opts.gain_rel_tol); });
      est = finite_argmax(problem.theta_points, v);
    } else {
      est = grid_argmax([&](const Vector& t) { return expected_gain(post, L, A, k, t, opts.gain_rel_tol); },
                        problem.theta_space, grid);
    }
    out.trace.k_values.push_back(k);
    out.trace.per_k_max_gain.push_back(est.value);
    out.trace.per_k_scaled_gain.push_back(problem.finite_theta() ? est.value : est.value * std::pow(k, M / 2.0));
    out.trace.per_k_estimates.push_back(std::move(est));
  }
  double radius = opts.match_radius;
  if (radius <= 0.0) {
    radius = problem.finite_theta() ? 0.5 * min_pair_distance(problem.theta_points)
                                    : out.trace.per_k_estimates.back().coarse_cell_size;
    if (!std::isfinite(radius)) radius = 0.0;
  }
  out.limit = setlim_detect(out.trace.per_k_estimates, radius, opts.stability_window);
  return out;
}

}  // namespace riskaverse
