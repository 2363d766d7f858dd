#include "riskaverse/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace riskaverse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kObsRelTol = 1e-10;
// Losses between nearby parameters are differences of nearly equal
// likelihoods; below this absolute level quadrature only sees rounding.
constexpr double kObsAbsTol = 1e-15;

using Term = std::function<double(double p, double q)>;

double sum_terms(const Vector& P, const Vector& Q, const Term& term) {
  thread_local std::vector<double> terms;
  terms.resize(static_cast<std::size_t>(P.size()));
  for (Eigen::Index i = 0; i < P.size(); ++i) terms[static_cast<std::size_t>(i)] = term(P[i], Q[i]);
  return invariant_sum(terms);
}

// Sum or integral over the observation space of term(P_theta1(x), P_theta2(x)).
double pair_integral(const EstimationProblem& p, const Vector& theta1, const Vector& theta2, const Term& term) {
  if (p.obs_space.is_discrete()) return sum_terms(p.likelihood_masses(theta1), p.likelihood_masses(theta2), term);
  auto fn = [&](const Vector& x) { return term(p.likelihood(theta1, x), p.likelihood(theta2, x)); };
  QuadratureResult r = integrate_observations(p.obs_space, fn, kObsRelTol, kObsAbsTol);
  if (!r.converged) throw NumericalError("loss quadrature over observations did not converge");
  return r.value;
}

BoundLoss bind_pair(const EstimationProblem& p, const Vector& theta2, Term term) {
  if (p.obs_space.is_discrete()) {
    Vector q = p.likelihood_masses(theta2);
    return [&p, q = std::move(q), term = std::move(term)](const Vector& theta1) {
      return sum_terms(p.likelihood_masses(theta1), q, term);
    };
  }
  return [&p, theta2, term = std::move(term)](const Vector& theta1) { return pair_integral(p, theta1, theta2, term); };
}

Loss pair_loss(std::string name, Term term) {
  Loss L;
  L.name = std::move(name);
  L.likelihood_based = true;
  L.eval = [term](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    return pair_integral(p, t1, t2, term);
  };
  L.binder = [term](const EstimationProblem& p, const Vector& t2) { return bind_pair(p, t2, term); };
  return L;
}

double hellinger_term(double p, double q) {
  const double s = std::sqrt(p) + std::sqrt(q);
  if (s == 0.0) return 0.0;
  const double d = (p - q) / s;
  return 0.5 * d * d;
}

Term f_term(const FFunction& F) {
  return [f = F.f, slope = F.slope_at_infinity](double p, double q) {
    if (q > 0.0) return f(p / q) * q;
    if (p > 0.0) return slope == kInf ? kInf : p * slope;
    return 0.0;
  };
}

}  // namespace

BoundLoss Loss::bind(const EstimationProblem& p, const Vector& theta2) const {
  if (binder) return binder(p, theta2);
  return [this, &p, theta2](const Vector& theta1) { return eval(p, theta1, theta2); };
}

// ---------------------------------------------------------------------------
// f-divergences
// ---------------------------------------------------------------------------

void FFunction::validate() const {
  if (std::abs(f(1.0)) > 1e-12) throw std::invalid_argument("F-function '" + name + "' has F(1) != 0");
  const std::vector<double> probes = {0.0, 1e-3, 0.1, 0.3, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0, 20.0, 100.0};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const double a = probes[i], b = probes[j], m = 0.5 * (a + b);
      const double lhs = f(m), rhs = 0.5 * (f(a) + f(b));
      if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) {
        throw std::invalid_argument("F-function '" + name + "' is not convex on probe triple");
      }
    }
  }
}

namespace f_functions {

FFunction hellinger() { return {"hellinger", [](double r) { return 1.0 - std::sqrt(r); }, 0.0}; }
FFunction chi_squared() { return {"chi_squared", [](double r) { return 0.5 * (r - 1.0) * (r - 1.0); }, kInf}; }
FFunction total_variation() { return {"total_variation", [](double r) { return 0.5 * std::abs(r - 1.0); }, 0.5}; }
FFunction kullback_leibler() {
  return {"kullback_leibler", [](double r) { return r > 0.0 ? r * std::log(r) : 0.0; }, kInf};
}

FFunction by_name(const std::string& name) {
  if (name == "hellinger") return hellinger();
  if (name == "chi_squared" || name == "chi2") return chi_squared();
  if (name == "total_variation" || name == "tv") return total_variation();
  if (name == "kullback_leibler" || name == "kl") return kullback_leibler();
  throw std::invalid_argument("unknown F-function '" + name + "'");
}

}  // namespace f_functions

double hellinger_sq(const EstimationProblem& p, const Vector& theta1, const Vector& theta2) {
  return pair_integral(p, theta1, theta2, hellinger_term);
}

double f_divergence(const FFunction& F, const EstimationProblem& p, const Vector& theta1, const Vector& theta2) {
  F.validate();
  return pair_integral(p, theta1, theta2, f_term(F));
}

Loss hellinger_sq_loss() { return pair_loss("hellinger_sq", hellinger_term); }

Loss f_divergence_loss(const FFunction& F) {
  F.validate();
  return pair_loss("f_divergence(" + F.name + ")", f_term(F));
}

LinearBoundResult linear_bound_check(const FFunction& F, double A, double B, const std::vector<double>& probes) {
  LinearBoundResult out;
  out.worst_excess = -kInf;
  for (double r : probes) {
    const double excess = std::abs(F.f(r)) - (A * r + B);
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.worst_r = r;
    }
  }
  out.pass = out.worst_excess <= 1e-12;
  return out;
}

// ---------------------------------------------------------------------------
// Parameter-space losses
// ---------------------------------------------------------------------------

Loss quadratic_loss() {
  Loss L;
  L.name = "quadratic";
  L.designed_violation = "IRP";
  L.eval = [](const EstimationProblem&, const Vector& t1, const Vector& t2) { return (t1 - t2).squaredNorm(); };
  return L;
}

Loss weighted_ml_loss() {
  Loss L;
  L.name = "weighted_ml";
  L.designed_violation = "IRP";
  L.eval = [](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    return std::pow(p.prior(t2), 2.0 / static_cast<double>(t2.size())) * (t1 - t2).squaredNorm();
  };
  L.binder = [](const EstimationProblem& p, const Vector& t2) -> BoundLoss {
    const double w = std::pow(p.prior(t2), 2.0 / static_cast<double>(t2.size()));
    return [w, t2](const Vector& t1) { return w * (t1 - t2).squaredNorm(); };
  };
  return L;
}

// ---------------------------------------------------------------------------
// IRO counterexamples
// ---------------------------------------------------------------------------

Loss iro_violating_loss() {
  Loss L = pair_loss("iro_violating", [](double p, double q) { return q * (p - q) * (p - q); });
  L.designed_violation = "IRO";
  auto eval = L.eval;
  auto binder = L.binder;
  L.eval = [eval](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    if (p.obs_space.is_discrete()) {
      throw std::invalid_argument("iro_violating: needs continuous observations (use iro_violating_mass)");
    }
    return eval(p, t1, t2);
  };
  L.binder = [binder](const EstimationProblem& p, const Vector& t2) {
    if (p.obs_space.is_discrete()) {
      throw std::invalid_argument("iro_violating: needs continuous observations (use iro_violating_mass)");
    }
    return binder(p, t2);
  };
  return L;
}

Loss iro_violating_mass_loss() {
  Loss L = pair_loss("iro_violating_mass", [](double p, double q) { return q * (p - q) * (p - q); });
  L.designed_violation = "IRO";
  auto eval = L.eval;
  L.eval = [eval](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    if (!p.obs_space.is_discrete()) throw std::invalid_argument("iro_violating_mass: needs discrete observations");
    return eval(p, t1, t2);
  };
  return L;
}

namespace {

// Grouping of the support by coordinate prefixes: for coordinate k, points
// sharing x(1:k-1) form a group, subdivided by the value of x(k).
struct PrefixGroups {
  struct Level {
    std::vector<int> group_of;
    std::vector<int> sub_of;
    std::vector<int> parent;  // group of each sub
    int groups = 0;
  };
  std::vector<Level> levels;
};

std::shared_ptr<const PrefixGroups> prefix_groups(const ObservationSpace& space) {
  auto out = std::make_shared<PrefixGroups>();
  const auto& sup = space.support();
  const int n = space.dim();
  for (int k = 0; k < n; ++k) {
    PrefixGroups::Level level;
    std::map<std::vector<double>, int> gid;
    std::map<std::pair<int, double>, int> sid;
    for (const auto& x : sup) {
      std::vector<double> prefix(x.data(), x.data() + k);
      auto g = gid.emplace(std::move(prefix), static_cast<int>(gid.size())).first->second;
      auto s = sid.emplace(std::make_pair(g, x[k]), static_cast<int>(sid.size()));
      if (s.second) level.parent.push_back(g);
      level.group_of.push_back(g);
      level.sub_of.push_back(s.first->second);
    }
    level.groups = static_cast<int>(gid.size());
    out->levels.push_back(std::move(level));
  }
  return out;
}

double sequential_value(const PrefixGroups& groups, const Vector& P, const Vector& Q) {
  std::vector<double> terms;
  for (const auto& level : groups.levels) {
    std::vector<double> gp(level.groups, 0.0), gq(level.groups, 0.0);
    std::vector<double> sp(level.parent.size(), 0.0), sq(level.parent.size(), 0.0);
    for (std::size_t i = 0; i < level.group_of.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      gp[level.group_of[i]] += P[e];
      gq[level.group_of[i]] += Q[e];
      sp[level.sub_of[i]] += P[e];
      sq[level.sub_of[i]] += Q[e];
    }
    for (std::size_t s = 0; s < level.parent.size(); ++s) {
      const int g = level.parent[s];
      if (!(gq[g] > 0.0)) continue;
      const double qc = sq[s] / gq[g];
      const double pc = gp[g] > 0.0 ? sp[s] / gp[g] : 0.0;
      // Q(prefix) * Q(v | prefix) * (P(v | prefix) - Q(v | prefix))^2
      terms.push_back(sq[s] * (pc - qc) * (pc - qc));
    }
  }
  return invariant_sum(terms);
}

}  // namespace

Loss sequential_mass_loss() {
  Loss L;
  L.name = "sequential_mass";
  L.likelihood_based = true;
  L.designed_violation = "IRO";
  L.eval = [](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    if (!p.obs_space.is_discrete()) throw std::invalid_argument("sequential_mass: needs discrete observations");
    return sequential_value(*prefix_groups(p.obs_space), p.likelihood_masses(t1), p.likelihood_masses(t2));
  };
  L.binder = [](const EstimationProblem& p, const Vector& t2) -> BoundLoss {
    if (!p.obs_space.is_discrete()) throw std::invalid_argument("sequential_mass: needs discrete observations");
    auto groups = prefix_groups(p.obs_space);
    Vector q = p.likelihood_masses(t2);
    return [&p, groups, q](const Vector& t1) { return sequential_value(*groups, p.likelihood_masses(t1), q); };
  };
  return L;
}

// ---------------------------------------------------------------------------
// IIA counterexample
// ---------------------------------------------------------------------------

double default_iia_threshold(const Loss& weight, const EstimationProblem& problem) {
  const std::vector<Vector> probes = problem.probe_points(7);
  std::vector<double> values;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = 0; j < probes.size(); ++j) {
      if (i != j) values.push_back(weight(problem, probes[i], probes[j]));
    }
  }
  if (values.empty()) throw std::invalid_argument("iia_violating: need at least two probe points");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

double iia_weight_mass(const Loss& weight, const EstimationProblem& problem, const Vector& theta2, double t) {
  const BoundLoss w = weight.bind(problem, theta2);
  if (problem.finite_theta()) {
    std::vector<double> terms;
    for (const auto& th : problem.theta_points) {
      if (w(th) <= t) terms.push_back(problem.prior(th));
    }
    return invariant_sum(terms);
  }
  const Box& box = problem.theta_space;
  auto indicator = [&](const Vector& th) { return w(th) <= t ? problem.prior(th) : 0.0; };
  if (box.dim() == 1) {
    // The sublevel set is taken to be an interval around theta2; the
    // assumption is checked on samples outside it.
    const double lo0 = box.lower()[0], hi0 = box.upper()[0], c = theta2[0];
    auto along = [&](const Vector& v) { return w(v); };
    const double right = hi0 > c ? ray_crossing(along, theta2, scalar(1.0), std::nextafter(t, kInf), hi0 - c, 1e-13) : 0.0;
    const double left = c > lo0 ? ray_crossing(along, theta2, scalar(-1.0), std::nextafter(t, kInf), c - lo0, 1e-13) : 0.0;
    const double a = c - left, b = c + right;
    bool interval = true;
    for (int i = 0; i < 64 && interval; ++i) {
      const double s = lo0 + (hi0 - lo0) * (i + 0.5) / 64.0;
      if ((s < a || s > b) && w(scalar(s)) <= t) interval = false;
    }
    if (interval) {
      if (!(b > a)) return 0.0;
      QuadratureOptions q;
      q.rel_tol = 1e-12;
      return integrate(problem.prior, Box::interval(a, b), q).value;
    }
  }
  QuadratureOptions q;
  q.rel_tol = 1e-8;
  q.max_cells = 4000;
  return integrate(indicator, box, q).value;
}

Loss iia_violating_loss(const Loss& base, const Loss& weight, std::optional<double> t) {
  if (t && !(*t > 0.0)) throw std::invalid_argument("iia_violating: threshold must be positive");
  Loss L;
  L.name = "iia_violating(" + base.name + ", " + weight.name + ")";
  L.likelihood_based = false;
  L.designed_violation = "IIA";
  auto threshold = [weight, t](const EstimationProblem& p) { return t ? *t : default_iia_threshold(weight, p); };
  L.eval = [base, weight, threshold](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    const double m = iia_weight_mass(weight, p, t2, threshold(p));
    return m * m * base(p, t1, t2);
  };
  L.binder = [base, weight, threshold](const EstimationProblem& p, const Vector& t2) -> BoundLoss {
    const double m = iia_weight_mass(weight, p, t2, threshold(p));
    BoundLoss b = base.bind(p, t2);
    return [m, b](const Vector& t1) { return m * m * b(t1); };
  };
  return L;
}

// ---------------------------------------------------------------------------
// Semi-continuous G-loss
// ---------------------------------------------------------------------------

namespace {

struct Calibration {
  double scale = 1.0;
  double offset = 0.0;
};

double log_mass_sum(const Vector& masses) {
  std::vector<double> logs(static_cast<std::size_t>(masses.size()));
  for (Eigen::Index i = 0; i < masses.size(); ++i) logs[static_cast<std::size_t>(i)] = std::log(masses[i]);
  return invariant_sum(logs);
}

Calibration calibrate(const EstimationProblem& problem, RecoveryMode mode) {
  Calibration c;
  if (mode == RecoveryMode::fixed_functional) {
    const double size = static_cast<double>(problem.obs_space.size());
    c.scale = size * std::log2(size) / 2.0;
    return c;
  }
  const Box& box = problem.theta_space;
  const double ta = box.lower()[0] + 0.25 * box.width()[0];
  const double tb = box.lower()[0] + 0.75 * box.width()[0];
  const double sa = log_mass_sum(problem.likelihood_masses(scalar(ta)));
  const double sb = log_mass_sum(problem.likelihood_masses(scalar(tb)));
  const double la = std::log(ta * (1.0 - ta)), lb = std::log(tb * (1.0 - tb));
  c.scale = (sb - sa) / (lb - la);
  c.offset = sa - c.scale * la;
  return c;
}

double recover_with(const Calibration& c, const Vector& masses) {
  const double u = std::exp((log_mass_sum(masses) - c.offset) / c.scale);
  return 0.5 - std::sqrt(std::max(0.0, 0.25 - u));
}

void check_g_problem(const EstimationProblem& p, RecoveryMode mode) {
  if (!p.obs_space.is_discrete() || p.finite_theta() || p.theta_dim() != 1) {
    throw std::invalid_argument("semicontinuous_g: needs a one-parameter problem with discrete observations");
  }
  // Calibration reads the parameter as the success probability itself.
  if (mode == RecoveryMode::family_recalibrated &&
      (!(p.theta_space.lower()[0] > 0.0) || p.theta_space.upper()[0] > 0.5)) {
    throw std::invalid_argument("semicontinuous_g: parameter space must lie inside (0, 1/2]");
  }
}

}  // namespace

double recover_p(const EstimationProblem& problem, const Vector& masses, RecoveryMode mode) {
  return recover_with(calibrate(problem, mode), masses);
}

Loss semicontinuous_g_loss(std::function<double(double)> F_weight, std::string weight_name, RecoveryMode mode) {
  Loss L;
  L.name = "semicontinuous_g(" + weight_name +
           (mode == RecoveryMode::fixed_functional ? ", fixed" : ", recalibrated") + ")";
  L.likelihood_based = true;
  L.designed_violation = mode == RecoveryMode::fixed_functional ? "ISI" : "";

  // G(p) is the integral of F over (0, p]; p~ always lies in [0, 1/2].
  auto G = [F_weight](double p) {
    if (p == 0.0) return 0.0;
    QuadratureOptions q;
    q.rel_tol = 1e-14;
    return integrate([&](const Vector& t) { return F_weight(t[0]); }, Box::interval(0.0, p), q).value;
  };
  for (int i = 1; i <= 16; ++i) {
    if (!(F_weight(i / 32.0) > 0.0)) throw std::invalid_argument("semicontinuous_g: weight function not positive");
  }
  L.eval = [G, mode](const EstimationProblem& p, const Vector& t1, const Vector& t2) {
    check_g_problem(p, mode);
    const Calibration c = calibrate(p, mode);
    const double d = G(recover_with(c, p.likelihood_masses(t1))) - G(recover_with(c, p.likelihood_masses(t2)));
    return 0.5 * d * d;
  };
  L.binder = [G, mode](const EstimationProblem& p, const Vector& t2) -> BoundLoss {
    check_g_problem(p, mode);
    const Calibration c = calibrate(p, mode);
    const double g2 = G(recover_with(c, p.likelihood_masses(t2)));
    return [&p, G, c, g2](const Vector& t1) {
      const double d = G(recover_with(c, p.likelihood_masses(t1))) - g2;
      return 0.5 * d * d;
    };
  };
  return L;
}

std::function<double(double)> weight_function(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "1+2t") return [](double t) { return 1.0 + 2.0 * t; };
  if (name == "2t") return [](double t) { return 2.0 * t; };
  if (name == "exp") return [](double t) { return std::exp(t); };
  throw std::invalid_argument("unknown weight function '" + name + "'");
}

Loss loss_from_config(const std::string& name, const nlohmann::json& params) {
  if (!params.is_object()) throw std::invalid_argument("loss params must be an object");
  if (name == "hellinger_sq") return hellinger_sq_loss();
  if (name == "f_divergence") return f_divergence_loss(f_functions::by_name(params.value("F", std::string("hellinger"))));
  if (name == "quadratic") return quadratic_loss();
  if (name == "weighted_ml") return weighted_ml_loss();
  if (name == "iro_violating") return iro_violating_loss();
  if (name == "iro_violating_mass") return iro_violating_mass_loss();
  if (name == "sequential_mass") return sequential_mass_loss();
  if (name == "iia_violating") {
    const Loss base = loss_from_config(params.value("base", std::string("hellinger_sq")));
    const Loss weight = loss_from_config(params.value("weight", std::string("hellinger_sq")));
    std::optional<double> t;
    if (params.contains("t")) t = params.at("t").get<double>();
    return iia_violating_loss(base, weight, t);
  }
  if (name == "semicontinuous_g") {
    const std::string w = params.value("weight", std::string("1+2t"));
    const std::string rec = params.value("recovery", std::string("fixed"));
    RecoveryMode mode;
    if (rec == "fixed") {
      mode = RecoveryMode::fixed_functional;
    } else if (rec == "recalibrated") {
      mode = RecoveryMode::family_recalibrated;
    } else {
      throw std::invalid_argument("unknown recovery mode '" + rec + "'");
    }
    return semicontinuous_g_loss(weight_function(w), w, mode);
  }
  throw std::invalid_argument("unknown loss '" + name + "'");
}

// ---------------------------------------------------------------------------
// Attenuation
// ---------------------------------------------------------------------------

namespace attenuations {

Attenuation truncated_quadratic() {
  return {"truncated_quadratic", [](double a) { return a < 1.0 ? (1.0 - a) * (1.0 - a) : 0.0; }, 1.0};
}

Attenuation raised_cosine() {
  return {"raised_cosine", [](double a) { return a < 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * a)) : 0.0; },
          1.0};
}

Attenuation by_name(const std::string& name) {
  if (name == "truncated_quadratic") return truncated_quadratic();
  if (name == "raised_cosine") return raised_cosine();
  throw std::invalid_argument("unknown attenuation '" + name + "'");
}

}  // namespace attenuations

void validate_attenuation(const Attenuation& A) {
  if (!(A.threshold_a0 > 0.0)) throw std::invalid_argument("attenuation '" + A.name + "': a0 must be positive");
  if (A(0.0) != 1.0) throw std::invalid_argument("attenuation '" + A.name + "': A(0) != 1");
  const double a0 = A.threshold_a0;
  double prev = A(0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double a = 2.0 * a0 * i / 2000.0;
    const double v = A(a);
    if (v < 0.0 || v > prev) throw std::invalid_argument("attenuation '" + A.name + "': not monotone at " + std::to_string(a));
    if (a >= a0 && v != 0.0) throw std::invalid_argument("attenuation '" + A.name + "': nonzero beyond a0");
    prev = v;
  }
  // The one-sided derivative just below a0 must match the zero derivative above.
  const double h = 1e-7 * a0;
  const double left = (A(a0) - A(a0 - h)) / h;
  if (std::abs(left) > 1e-6) {
    throw std::invalid_argument("attenuation '" + A.name + "': derivative jumps at a0");
  }
}

double gain_k(const Attenuation& A, const Loss& L, double k, const EstimationProblem& p, const Vector& theta1,
              const Vector& theta2) {
  if (!(k > 0.0)) throw std::invalid_argument("gain_k: k must be positive");
  return A(k * L(p, theta1, theta2));
}

// ---------------------------------------------------------------------------
// c[P, Q]
// ---------------------------------------------------------------------------

double RNProfile::integral() const {
  std::vector<double> terms;
  double prev = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    terms.push_back((breakpoints[i] - prev) * values[i]);
    prev = breakpoints[i];
  }
  return invariant_sum(terms);
}

RNProfile rn_profile(const Vector& P, const Vector& Q) {
  if (P.size() != Q.size() || P.size() == 0) throw std::invalid_argument("rn_profile: supports differ");
  // Q-mass grouped by the exact ratio value; the map orders ratios ascending.
  std::map<double, std::vector<double>> by_ratio;
  for (Eigen::Index i = 0; i < P.size(); ++i) {
    if (P[i] < 0.0 || Q[i] < 0.0) throw std::invalid_argument("rn_profile: negative mass");
    if (Q[i] == 0.0) continue;
    by_ratio[P[i] / Q[i]].push_back(Q[i]);
  }
  RNProfile out;
  std::vector<double> group_masses;
  for (const auto& [r, masses] : by_ratio) {
    group_masses.push_back(invariant_sum(masses));
    out.breakpoints.push_back(invariant_sum(group_masses));
    out.values.push_back(r);
  }
  return out;
}

RNProfile rn_profile(const EstimationProblem& problem, const Vector& theta1, const Vector& theta2) {
  return rn_profile(problem.likelihood_masses(theta1), problem.likelihood_masses(theta2));
}

}  // namespace riskaverse
