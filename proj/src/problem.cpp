#include "riskaverse/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace riskaverse {

namespace {

std::vector<double> key_of(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Tensor grid with `per_dim` points per axis spanning the box (endpoints
// included when `include_faces`, otherwise cell midpoints).
std::vector<Vector> tensor_grid(const Box& box, int per_dim, bool include_faces) {
  const int m = box.dim();
  std::vector<Vector> out;
  std::vector<int> idx(m, 0);
  while (true) {
    Vector p(m);
    for (int d = 0; d < m; ++d) {
      const double t = include_faces ? static_cast<double>(idx[d]) / (per_dim - 1)
                                     : (idx[d] + 0.5) / per_dim;
      p[d] = box.lower()[d] + t * (box.upper()[d] - box.lower()[d]);
    }
    out.push_back(p);
    int d = 0;
    while (d < m && ++idx[d] == per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == m) break;
  }
  return out;
}

Box hull_of(const std::vector<Vector>& pts) {
  Vector lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return Box(lo, hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// ObservationSpace
// ---------------------------------------------------------------------------

ObservationSpace ObservationSpace::continuous(Box integration_box, std::vector<std::vector<double>> breakpoints,
                                              std::vector<std::vector<double>> cuts) {
  ObservationSpace s;
  s.kind_ = Kind::continuous;
  s.dim_ = integration_box.dim();
  if (!breakpoints.empty() && static_cast<int>(breakpoints.size()) != s.dim_) {
    throw std::invalid_argument("ObservationSpace: breakpoints need one list per dimension");
  }
  if (!cuts.empty() && static_cast<int>(cuts.size()) != s.dim_) {
    throw std::invalid_argument("ObservationSpace: cuts need one list per dimension");
  }
  s.box_ = std::move(integration_box);
  s.breakpoints_ = std::move(breakpoints);
  s.cuts_ = std::move(cuts);
  return s;
}

std::vector<std::vector<double>> ObservationSpace::quadrature_cuts() const {
  if (breakpoints_.empty() && cuts_.empty()) return {};
  std::vector<std::vector<double>> out(dim_);
  for (int d = 0; d < dim_; ++d) {
    if (!breakpoints_.empty()) out[d].insert(out[d].end(), breakpoints_[d].begin(), breakpoints_[d].end());
    if (!cuts_.empty()) out[d].insert(out[d].end(), cuts_[d].begin(), cuts_[d].end());
    std::sort(out[d].begin(), out[d].end());
    out[d].erase(std::unique(out[d].begin(), out[d].end()), out[d].end());
  }
  return out;
}

ObservationSpace ObservationSpace::discrete(std::vector<Vector> support) {
  if (support.empty()) throw std::invalid_argument("ObservationSpace: empty support");
  ObservationSpace s;
  s.kind_ = Kind::discrete;
  s.dim_ = static_cast<int>(support.front().size());
  if (s.dim_ < 1) throw std::invalid_argument("ObservationSpace: observation dimension must be >= 1");
  auto lookup = std::make_shared<std::map<std::vector<double>, std::size_t>>();
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i].size() != s.dim_) throw std::invalid_argument("ObservationSpace: mixed support dimensions");
    if (!lookup->emplace(key_of(support[i]), i).second) {
      throw std::invalid_argument("ObservationSpace: duplicate support point " + format_point(support[i]));
    }
  }
  s.support_ = std::move(support);
  s.lookup_ = std::move(lookup);
  s.box_ = bounding_box(s.support_);
  return s;
}

std::optional<std::size_t> ObservationSpace::index_of(const Vector& x) const {
  if (!lookup_ || x.size() != dim_) return std::nullopt;
  auto it = lookup_->find(key_of(x));
  if (it == lookup_->end()) return std::nullopt;
  return it->second;
}

QuadratureResult integrate_observations(const ObservationSpace& space, const ScalarField& fn, double rel_tol,
                                        double abs_tol, std::size_t max_cells) {
  if (space.is_discrete()) throw std::invalid_argument("integrate_observations: observation space is discrete");
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = abs_tol;
  opts.max_cells = max_cells;
  opts.breakpoints = space.quadrature_cuts();
  return integrate(fn, space.integration_box(), opts);
}

// ---------------------------------------------------------------------------
// EstimationProblem
// ---------------------------------------------------------------------------

Box bounding_box(const std::vector<Vector>& points, double pad) {
  if (points.empty()) throw std::invalid_argument("bounding_box: no points");
  Vector lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (int d = 0; d < lo.size(); ++d) {
    if (!(lo[d] < hi[d])) {
      lo[d] -= pad;
      hi[d] += pad;
    }
  }
  return Box(lo, hi);
}

Vector EstimationProblem::likelihood_masses(const Vector& theta) const {
  if (!obs_space.is_discrete()) {
    throw std::invalid_argument("likelihood_masses: observations of '" + label + "' are continuous");
  }
  if (masses) return masses(theta);
  const auto& sup = obs_space.support();
  Vector out(static_cast<Eigen::Index>(sup.size()));
  for (std::size_t i = 0; i < sup.size(); ++i) out[static_cast<Eigen::Index>(i)] = likelihood(theta, sup[i]);
  return out;
}

std::optional<std::size_t> EstimationProblem::theta_index(const Vector& theta, double tol) const {
  for (std::size_t i = 0; i < theta_points.size(); ++i) {
    if (theta_points[i].size() == theta.size() && (theta_points[i] - theta).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return std::nullopt;
}

void EstimationProblem::check_observation(const Vector& x) const {
  if (x.size() != obs_space.dim()) {
    throw std::invalid_argument("observation has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(obs_space.dim()));
  }
  if (obs_space.is_discrete() && !obs_space.index_of(x)) {
    throw std::invalid_argument("observation " + format_point(x) + " is outside the support of '" + label + "'");
  }
  if (!x.allFinite()) throw std::invalid_argument("observation is not finite");
}

std::vector<Vector> EstimationProblem::probe_points(int per_dim) const {
  if (finite_theta()) return theta_points;
  return tensor_grid(theta_space, per_dim, false);
}

void EstimationProblem::validate() const {
  if (!prior || !likelihood) throw std::invalid_argument("problem '" + label + "': prior and likelihood required");
  for (const auto& t : theta_points) {
    if (t.size() != theta_space.dim()) throw std::invalid_argument("problem '" + label + "': theta dimension mismatch");
  }
  const std::vector<Vector> probes = probe_points();
  for (const auto& t : probes) {
    const double p = prior(t);
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("problem '" + label + "': prior not positive at " + format_point(t));
    }
  }
  if (finite_theta()) {
    double total = 0.0;
    for (const auto& t : theta_points) total += prior(t);
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("problem '" + label + "': prior masses sum to " + std::to_string(total));
    }
    std::set<std::vector<double>> seen;
    for (const auto& t : theta_points) {
      if (!seen.insert(key_of(t)).second) {
        throw std::invalid_argument("problem '" + label + "': duplicate parameter point " + format_point(t));
      }
    }
  }
  if (obs_space.is_discrete()) {
    std::vector<Vector> profiles;
    for (const auto& t : probes) {
      Vector m = likelihood_masses(t);
      if (m.size() != static_cast<Eigen::Index>(obs_space.size())) {
        throw std::invalid_argument("problem '" + label + "': masses do not match the support size");
      }
      if (m.minCoeff() < 0.0 || !m.allFinite()) {
        throw std::invalid_argument("problem '" + label + "': invalid likelihood mass at " + format_point(t));
      }
      std::vector<double> terms(m.data(), m.data() + m.size());
      if (std::abs(invariant_sum(terms) - 1.0) > 1e-9) {
        throw std::invalid_argument("problem '" + label + "': likelihood masses do not sum to 1 at " +
                                    format_point(t));
      }
      profiles.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      for (std::size_t j = i + 1; j < profiles.size(); ++j) {
        if ((profiles[i] - profiles[j]).cwiseAbs().maxCoeff() <= 1e-14) {
          throw std::invalid_argument("problem '" + label + "': identical likelihoods at " + format_point(probes[i]) +
                                      " and " + format_point(probes[j]));
        }
      }
    }
  } else {
    const std::vector<Vector> xs = tensor_grid(obs_space.integration_box(), 9, false);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      for (std::size_t j = i + 1; j < probes.size(); ++j) {
        double diff = 0.0;
        for (const auto& x : xs) diff = std::max(diff, std::abs(likelihood(probes[i], x) - likelihood(probes[j], x)));
        if (diff <= 1e-14) {
          throw std::invalid_argument("problem '" + label + "': identical likelihoods at " + format_point(probes[i]) +
                                      " and " + format_point(probes[j]));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Posterior
// ---------------------------------------------------------------------------

Posterior::Posterior(const EstimationProblem& problem, Observation x, double rel_tol)
    : problem_(problem), x_(std::move(x)) {
  problem_.check_observation(x_);
  if (problem_.finite_theta()) {
    masses_.reserve(problem_.theta_points.size());
    for (const auto& t : problem_.theta_points) masses_.push_back(unnormalized(t));
    z_ = invariant_sum(masses_);
    if (!(z_ > 0.0)) throw NumericalError("posterior: observation has zero marginal probability");
    for (double& m : masses_) m /= z_;
    return;
  }
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_cells = 50000;
  QuadratureResult r = integrate([this](const Vector& t) { return unnormalized(t); }, problem_.theta_space, opts);
  if (!r.converged) throw NumericalError("posterior: normalizing integral did not converge");
  if (!(r.value > 0.0)) throw NumericalError("posterior: normalizing integral is not positive");
  z_ = r.value;
}

double Posterior::unnormalized(const Vector& theta) const {
  return problem_.prior(theta) * problem_.likelihood(theta, x_);
}

double posterior_weight(const EstimationProblem& problem, const Observation& x, const Vector& theta) {
  if (problem.finite_theta()) {
    if (!problem.theta_index(theta)) throw std::invalid_argument("posterior_weight: theta not in the parameter set");
  } else if (!problem.theta_space.contains(theta)) {
    throw std::invalid_argument("posterior_weight: theta outside the parameter space");
  }
  return Posterior(problem, x).weight(theta);
}

// ---------------------------------------------------------------------------
// Diffeomorphisms
// ---------------------------------------------------------------------------

void Diffeomorphism::validate(const std::vector<Vector>& probes) const {
  for (const auto& p : probes) {
    const Vector back = inverse(forward(p));
    if ((back - p).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("transform '" + name + "' does not invert at " + format_point(p));
    }
    const double j = jacobian_det(p);
    if (!(j > 0.0) || !std::isfinite(j)) {
      throw std::invalid_argument("transform '" + name + "' has a vanishing Jacobian at " + format_point(p));
    }
  }
}

namespace transforms {

Diffeomorphism identity() {
  return {"identity", [](const Vector& v) { return v; }, [](const Vector& v) { return v; },
          [](const Vector&) { return 1.0; }};
}

Diffeomorphism affine(double scale, double shift) {
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw std::invalid_argument("affine transform needs a finite nonzero scale");
  }
  std::ostringstream name;
  name << "affine(" << scale << "*v+" << shift << ")";
  return {name.str(), [=](const Vector& v) -> Vector { return (scale * v.array() + shift).matrix(); },
          [=](const Vector& v) -> Vector { return ((v.array() - shift) / scale).matrix(); },
          [=](const Vector& v) { return std::pow(std::abs(scale), static_cast<double>(v.size())); }};
}

Diffeomorphism cube() {
  return {"cube", [](const Vector& v) -> Vector { return v.array().cube().matrix(); },
          [](const Vector& v) -> Vector { return v.unaryExpr([](double a) { return std::cbrt(a); }); },
          [](const Vector& v) { return (3.0 * v.array().square()).prod(); }};
}

Diffeomorphism cubic_plus_linear() {
  auto inv1 = [](double y) {
    // Unique real root of t^3 + t - y (Cardano).
    const double s = std::sqrt(y * y / 4.0 + 1.0 / 27.0);
    return std::cbrt(y / 2.0 + s) + std::cbrt(y / 2.0 - s);
  };
  auto polish = [inv1](double y) {
    double t = inv1(y);
    for (int i = 0; i < 3; ++i) t -= (t * t * t + t - y) / (3.0 * t * t + 1.0);
    return t;
  };
  return {"cubic_plus_linear", [](const Vector& v) -> Vector { return (v.array().cube() + v.array()).matrix(); },
          [polish](const Vector& v) -> Vector { return v.unaryExpr(polish); },
          [](const Vector& v) { return (3.0 * v.array().square() + 1.0).prod(); }};
}

Diffeomorphism exp() {
  return {"exp", [](const Vector& v) -> Vector { return v.array().exp().matrix(); },
          [](const Vector& v) -> Vector { return v.array().log().matrix(); },
          [](const Vector& v) { return v.array().exp().prod(); }};
}

Diffeomorphism sinh() {
  return {"sinh", [](const Vector& v) -> Vector { return v.array().sinh().matrix(); },
          [](const Vector& v) -> Vector { return v.unaryExpr([](double a) { return std::asinh(a); }); },
          [](const Vector& v) { return v.array().cosh().prod(); }};
}

Diffeomorphism coordinate_swap() {
  auto swap = [](const Vector& v) -> Vector {
    if (v.size() < 2) throw std::invalid_argument("coordinate_swap needs dimension >= 2");
    Vector w = v;
    std::swap(w[0], w[1]);
    return w;
  };
  return {"coordinate_swap", swap, swap, [](const Vector&) { return 1.0; }};
}

Diffeomorphism support_permutation(const std::vector<Vector>& support, std::size_t shift) {
  if (support.empty()) throw std::invalid_argument("support_permutation: empty support");
  auto space = std::make_shared<ObservationSpace>(ObservationSpace::discrete(support));
  const std::size_t k = support.size();
  shift %= k;
  auto move = [space, k](const Vector& v, std::size_t by) -> Vector {
    auto i = space->index_of(v);
    if (!i) throw std::invalid_argument("support_permutation: point " + format_point(v) + " not in the support");
    return space->support()[(*i + by) % k];
  };
  return {"support_cycle(" + std::to_string(shift) + ")", [move, shift](const Vector& v) { return move(v, shift); },
          [move, shift, k](const Vector& v) { return move(v, k - shift); }, [](const Vector&) { return 1.0; }};
}

}  // namespace transforms

// ---------------------------------------------------------------------------
// reparameterize
// ---------------------------------------------------------------------------

EstimationProblem reparameterize(const EstimationProblem& problem, const Diffeomorphism& F,
                                 const ReparamOptions& opts) {
  EstimationProblem out = problem;
  out.label = problem.label + " | theta->" + F.name;
  if (problem.finite_theta()) {
    F.validate(problem.theta_points);
    out.theta_points.clear();
    for (const auto& t : problem.theta_points) out.theta_points.push_back(F.forward(t));
    out.theta_space = bounding_box(out.theta_points);
    const EstimationProblem src = problem;
    out.prior = [src, F](const Vector& phi) { return src.prior(F.inverse(phi)); };
    out.likelihood = [src, F](const Vector& phi, const Vector& x) { return src.likelihood(F.inverse(phi), x); };
    if (src.masses) out.masses = [src, F](const Vector& phi) { return src.masses(F.inverse(phi)); };
    return out;
  }

  const Box& theta = problem.theta_space;
  const int per_dim = theta.dim() == 1 ? opts.hull_probes_per_dim : std::min(opts.hull_probes_per_dim, 129);
  const std::vector<Vector> grid = tensor_grid(theta, per_dim, true);
  F.validate(tensor_grid(theta, 5, false));
  std::vector<Vector> image;
  image.reserve(grid.size());
  for (const auto& t : grid) {
    Vector phi = F.forward(t);
    if (!phi.allFinite()) throw std::invalid_argument("reparameterize: transform not finite at " + format_point(t));
    image.push_back(std::move(phi));
  }
  const Box hull = hull_of(image);
  const Vector slack = 1e-9 * theta.width();

  std::size_t outside = 0;
  const std::vector<Vector> hull_grid = tensor_grid(hull, per_dim, false);
  for (const auto& phi : hull_grid) {
    const Vector t = F.inverse(phi);
    if (((t - theta.lower()).array() < -slack.array()).any() || ((t - theta.upper()).array() > slack.array()).any()) {
      ++outside;
    }
  }
  const double leakage = static_cast<double>(outside) / static_cast<double>(hull_grid.size());
  if (leakage > 1e-6 && !opts.allow_hull) {
    throw std::invalid_argument("reparameterize: image of the parameter space is not a box (hull " +
                                format_point(hull.lower()) + " .. " + format_point(hull.upper()) +
                                ", leakage " + std::to_string(leakage) + ")");
  }
  out.theta_space = hull;
  out.notes.push_back("reparameterized by " + F.name + "; hull leakage " + std::to_string(leakage));

  const EstimationProblem src = problem;
  auto pull = [src, F, slack](const Vector& phi, bool& inside) {
    Vector t = F.inverse(phi);
    const Box& b = src.theta_space;
    inside = !(((t - b.lower()).array() < -slack.array()).any() || ((t - b.upper()).array() > slack.array()).any());
    return b.clamp(t);
  };
  out.prior = [src, F, pull](const Vector& phi) {
    bool inside = true;
    const Vector t = pull(phi, inside);
    if (!inside) return 0.0;
    return src.prior(t) / F.jacobian_det(t);
  };
  out.likelihood = [src, pull](const Vector& phi, const Vector& x) {
    bool inside = true;
    return src.likelihood(pull(phi, inside), x);
  };
  if (src.masses) {
    out.masses = [src, pull](const Vector& phi) {
      bool inside = true;
      return src.masses(pull(phi, inside));
    };
  }

  if (leakage == 0.0) {
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    q.max_cells = 20000;
    const double before = integrate(src.prior, theta, q).value;
    const double after = integrate(out.prior, hull, q).value;
    if (std::abs(before - after) > 1e-6 * std::max(1.0, std::abs(before))) {
      throw NumericalError("reparameterize: prior mass changed from " + std::to_string(before) + " to " +
                           std::to_string(after));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// transform_observations
// ---------------------------------------------------------------------------

EstimationProblem transform_observations(const EstimationProblem& problem, const Diffeomorphism& G) {
  EstimationProblem out = problem;
  out.label = problem.label + " | x->" + G.name;
  const EstimationProblem src = problem;

  if (problem.obs_space.is_discrete()) {
    const auto& sup = problem.obs_space.support();
    std::vector<Vector> mapped;
    mapped.reserve(sup.size());
    for (const auto& x : sup) {
      Vector y = G.forward(x);
      if (y.size() != x.size() || !y.allFinite()) {
        throw std::invalid_argument("transform_observations: '" + G.name + "' is not a map of the support");
      }
      const Vector back = G.inverse(y);
      if (back != x && (back - x).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("transform_observations: '" + G.name + "' does not invert on the support");
      }
      mapped.push_back(std::move(y));
    }
    // ObservationSpace::discrete rejects collisions, i.e. non-injective maps.
    out.obs_space = ObservationSpace::discrete(std::move(mapped));
    // Relabel the support without changing its order, so masses carry over.
    auto inverse_index = std::make_shared<ObservationSpace>(out.obs_space);
    out.likelihood = [src, inverse_index](const Vector& theta, const Vector& y) {
      auto i = inverse_index->index_of(y);
      if (!i) throw std::invalid_argument("observation outside the transformed support");
      return src.likelihood(theta, src.obs_space.support()[*i]);
    };
    if (!src.masses) out.masses = [src](const Vector& theta) { return src.likelihood_masses(theta); };
    return out;
  }

  const Box& box = problem.obs_space.integration_box();
  const int per_dim = box.dim() == 1 ? 257 : 65;
  std::vector<Vector> image;
  for (const auto& x : tensor_grid(box, per_dim, true)) {
    Vector y = G.forward(x);
    if (!y.allFinite()) throw std::invalid_argument("transform_observations: transform not finite");
    image.push_back(std::move(y));
  }
  G.validate(tensor_grid(box, 7, false));
  // Breakpoints and cuts are carried through G along a tensor grid of
  // themselves, then projected back onto the axes.
  auto carry = [&](const std::vector<std::vector<double>>& lists, std::size_t cap) {
    std::vector<std::vector<double>> axes(box.dim());
    for (int d = 0; d < box.dim(); ++d) {
      axes[d] = {box.center()[d]};
      if (!lists.empty()) axes[d].insert(axes[d].end(), lists[d].begin(), lists[d].end());
    }
    std::vector<std::vector<double>> mapped(box.dim());
    std::vector<std::size_t> idx(box.dim(), 0);
    while (true) {
      Vector x(box.dim());
      for (int d = 0; d < box.dim(); ++d) x[d] = axes[d][idx[d]];
      const Vector y = G.forward(x);
      for (int d = 0; d < box.dim(); ++d) mapped[d].push_back(y[d]);
      int d = 0;
      while (d < box.dim() && ++idx[d] == axes[d].size()) {
        idx[d] = 0;
        ++d;
      }
      if (d == box.dim()) break;
    }
    for (auto& m : mapped) {
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      if (m.size() > cap) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < cap; ++i) thin.push_back(m[i * (m.size() - 1) / (cap - 1)]);
        m = std::move(thin);
      }
    }
    return mapped;
  };
  std::vector<std::vector<double>> breaks;
  if (!problem.obs_space.breakpoints().empty()) breaks = carry(problem.obs_space.breakpoints(), 64);
  std::vector<std::vector<double>> cuts = problem.obs_space.cuts();
  if (cuts.empty()) {
    cuts.resize(box.dim());
    for (int d = 0; d < box.dim(); ++d) {
      for (int i = 1; i < 32; ++i) cuts[d].push_back(box.lower()[d] + box.width()[d] * i / 32.0);
    }
  }
  out.obs_space = ObservationSpace::continuous(hull_of(image), std::move(breaks), carry(cuts, 64));
  out.likelihood = [src, G](const Vector& theta, const Vector& y) {
    const Vector x = G.inverse(y);
    return src.likelihood(theta, x) / G.jacobian_det(x);
  };
  out.masses = nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// augment_superfluous
// ---------------------------------------------------------------------------

void DiscreteDistribution::validate() const {
  if (points.empty() || points.size() != masses.size()) {
    throw std::invalid_argument("DiscreteDistribution: need one mass per point");
  }
  for (double m : masses) {
    if (!(m >= 0.0)) throw std::invalid_argument("DiscreteDistribution: negative mass");
  }
  if (std::abs(invariant_sum(masses) - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteDistribution: masses do not sum to 1");
  }
  (void)ObservationSpace::discrete(points);
}

DiscreteDistribution DiscreteDistribution::coin(double p_heads) {
  if (!(p_heads > 0.0 && p_heads < 1.0)) throw std::invalid_argument("coin: probability must lie in (0, 1)");
  return {{scalar(0.0), scalar(1.0)}, {1.0 - p_heads, p_heads}};
}

DiscreteDistribution DiscreteDistribution::point_mass() { return {{scalar(0.0)}, {1.0}}; }

EstimationProblem augment_superfluous(const EstimationProblem& problem, const DiscreteDistribution& noise) {
  noise.validate();
  if (!problem.obs_space.is_discrete()) {
    throw std::invalid_argument("augment_superfluous: observations must be discrete");
  }
  const auto& xs = problem.obs_space.support();
  const int nx = problem.obs_space.dim();
  const int ny = static_cast<int>(noise.points.front().size());
  std::vector<Vector> joint;
  joint.reserve(xs.size() * noise.points.size());
  for (const auto& x : xs) {
    for (const auto& y : noise.points) {
      Vector xy(nx + ny);
      xy << x, y;
      joint.push_back(std::move(xy));
    }
  }
  EstimationProblem out = problem;
  out.label = problem.label + " + noise(" + std::to_string(noise.points.size()) + ")";
  out.obs_space = ObservationSpace::discrete(std::move(joint));
  const EstimationProblem src = problem;
  const Vector w = Eigen::Map<const Vector>(noise.masses.data(), static_cast<Eigen::Index>(noise.masses.size()));
  auto noise_space = std::make_shared<ObservationSpace>(ObservationSpace::discrete(noise.points));
  out.likelihood = [src, w, noise_space, nx, ny](const Vector& theta, const Vector& xy) {
    auto j = noise_space->index_of(xy.tail(ny));
    if (!j) throw std::invalid_argument("augmented observation has an unknown noise component");
    return src.likelihood(theta, xy.head(nx)) * w[static_cast<Eigen::Index>(*j)];
  };
  out.masses = [src, w](const Vector& theta) {
    const Vector m = src.likelihood_masses(theta);
    Vector outm(m.size() * w.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) outm.segment(i * w.size(), w.size()) = m[i] * w;
    return outm;
  };
  return out;
}

}  // namespace riskaverse
