#include "riskaverse/axioms.hpp"

#include "riskaverse/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace riskaverse {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json point_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json points_json(const std::vector<Vector>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

// Accumulates probes into a report, keeping the worst one as the witness.
struct Accumulator {
  AxiomReport report;

  Accumulator(std::string axiom, const Loss& L, double tol) {
    report.axiom = std::move(axiom);
    report.loss_name = L.name;
    report.tolerance = tol;
  }

  void add(const std::string& problem, const Vector& t1, const Vector& t2, const std::string& transform, double before,
           double after) {
    ++report.probes;
    double d = std::abs(after - before);
    if (std::isnan(d)) d = kInf;
    if (!report.witness || d > report.max_discrepancy) {
      report.max_discrepancy = d;
      report.witness = Witness{problem, t1, t2, transform, before, after};
    }
  }

  AxiomReport finish() {
    if (report.max_discrepancy > report.tolerance) {
      report.verdict = AxiomReport::Verdict::violated;
    } else {
      report.verdict = AxiomReport::Verdict::satisfied_on_probes;
    }
    return report;
  }
};

Vector clamp_into(const Box& box, const Vector& v) { return box.clamp(v); }

}  // namespace

json AxiomReport::to_json() const {
  json j;
  j["axiom"] = axiom;
  j["loss"] = loss_name;
  j["verdict"] = violated() ? "violated" : "satisfied_on_probes";
  j["max_discrepancy"] = max_discrepancy;
  j["tolerance"] = tolerance;
  j["probes"] = probes;
  if (witness) {
    j["witness"] = {{"problem", witness->problem},     {"theta1", point_json(witness->theta1)},
                    {"theta2", point_json(witness->theta2)}, {"transform", witness->transform},
                    {"before", witness->before},        {"after", witness->after}};
  } else {
    j["witness"] = nullptr;
  }
  j["notes"] = notes;
  return j;
}

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

AxiomReport check_irp(const Loss& L, const EstimationProblem& problem, const std::vector<Diffeomorphism>& transforms,
                      const std::vector<ThetaPair>& pairs, double tol) {
  Accumulator acc("IRP", L, tol);
  for (const auto& F : transforms) {
    EstimationProblem rp;
    try {
      rp = reparameterize(problem, F);
    } catch (const std::invalid_argument& e) {
      acc.report.notes.push_back("transform " + F.name + " skipped: " + e.what());
      continue;
    }
    for (const auto& [t1, t2] : pairs) {
      const Vector f1 = clamp_into(rp.theta_space, F.forward(t1));
      const Vector f2 = clamp_into(rp.theta_space, F.forward(t2));
      acc.add(problem.label, t1, t2, F.name, L(problem, t1, t2), L(rp, f1, f2));
    }
  }
  return acc.finish();
}

AxiomReport check_iro(const Loss& L, const EstimationProblem& problem,
                      const std::vector<Diffeomorphism>& obs_transforms, const std::vector<ThetaPair>& pairs,
                      double tol) {
  Accumulator acc("IRO", L, tol);
  for (const auto& G : obs_transforms) {
    const EstimationProblem tp = transform_observations(problem, G);
    for (const auto& [t1, t2] : pairs) acc.add(problem.label, t1, t2, G.name, L(problem, t1, t2), L(tp, t1, t2));
  }
  return acc.finish();
}

namespace {

void require_agreement(const EstimationProblem& a, const EstimationProblem& b, const Vector& theta) {
  auto close = [](double u, double v) { return std::abs(u - v) <= 1e-14 * std::max({1.0, std::abs(u), std::abs(v)}); };
  if (!close(a.prior(theta), b.prior(theta))) {
    throw std::invalid_argument("check_iia: priors differ at " + format_point(theta));
  }
  if (a.obs_space.is_discrete() != b.obs_space.is_discrete()) {
    throw std::invalid_argument("check_iia: observation spaces differ");
  }
  if (a.obs_space.is_discrete()) {
    if (a.obs_space.support() != b.obs_space.support()) throw std::invalid_argument("check_iia: supports differ");
    const Vector pa = a.likelihood_masses(theta), pb = b.likelihood_masses(theta);
    for (Eigen::Index i = 0; i < pa.size(); ++i) {
      if (!close(pa[i], pb[i])) throw std::invalid_argument("check_iia: likelihoods differ at " + format_point(theta));
    }
    return;
  }
  const Box& box = a.obs_space.integration_box();
  for (int i = 0; i < 9; ++i) {
    const Vector x = box.lower() + box.width() * ((i + 0.5) / 9.0);
    if (!close(a.likelihood(theta, x), b.likelihood(theta, x))) {
      throw std::invalid_argument("check_iia: likelihoods differ at " + format_point(theta));
    }
  }
}

AxiomReport merge(std::vector<AxiomReport> parts, const std::string& axiom, const Loss& L, double tol) {
  Accumulator acc(axiom, L, tol);
  for (auto& r : parts) {
    acc.report.probes += r.probes;
    for (auto& n : r.notes) acc.report.notes.push_back(std::move(n));
    if (r.witness && (!acc.report.witness || r.max_discrepancy > acc.report.max_discrepancy)) {
      acc.report.witness = r.witness;
      acc.report.max_discrepancy = r.max_discrepancy;
    }
  }
  return acc.finish();
}

}  // namespace

AxiomReport check_iia(const Loss& L, const EstimationProblem& problem_a, const EstimationProblem& problem_b,
                      const Vector& theta1, const Vector& theta2, double tol) {
  require_agreement(problem_a, problem_b, theta1);
  require_agreement(problem_a, problem_b, theta2);
  Accumulator acc("IIA", L, tol);
  acc.add(problem_a.label, theta1, theta2, problem_b.label, L(problem_a, theta1, theta2), L(problem_b, theta1, theta2));
  return acc.finish();
}

AxiomReport check_iia(const Loss& L, const EstimationProblem& problem, const std::vector<ThetaPair>& pairs, double tol) {
  std::vector<AxiomReport> parts;
  for (const auto& [t1, t2] : pairs) {
    if ((t1 - t2).norm() == 0.0) continue;
    EstimationProblem alt;
    try {
      alt = iia_alternative(problem, t1, t2);
    } catch (const std::invalid_argument& e) {
      AxiomReport skipped;
      skipped.notes.push_back("pair " + format_point(t1) + ", " + format_point(t2) + " skipped: " + e.what());
      parts.push_back(std::move(skipped));
      continue;
    }
    parts.push_back(check_iia(L, problem, alt, t1, t2, tol));
  }
  return merge(std::move(parts), "IIA", L, tol);
}

AxiomReport check_isi(const Loss& L, const EstimationProblem& problem, const std::vector<DiscreteDistribution>& noises,
                      const std::vector<ThetaPair>& pairs, double tol) {
  if (!problem.obs_space.is_discrete()) throw std::invalid_argument("check_isi: needs discrete observations");
  Accumulator acc("ISI", L, tol);
  for (const auto& noise : noises) {
    const EstimationProblem aug = augment_superfluous(problem, noise);
    std::string name = "coin(";
    name += std::to_string(noise.masses.size() > 1 ? noise.masses[1] : 0.0) + ")";
    for (const auto& [t1, t2] : pairs) acc.add(problem.label, t1, t2, name, L(problem, t1, t2), L(aug, t1, t2));
  }
  return acc.finish();
}

// ---------------------------------------------------------------------------
// IIA alternatives
// ---------------------------------------------------------------------------

EstimationProblem iia_alternative(const EstimationProblem& problem, const Vector& theta1, const Vector& theta2) {
  auto base = std::make_shared<const EstimationProblem>(problem);
  EstimationProblem alt = problem;
  alt.label = problem.label + "+alternative";

  if (problem.finite_theta()) {
    const auto i1 = problem.theta_index(theta1), i2 = problem.theta_index(theta2);
    if (!i1 || !i2) throw std::invalid_argument("iia_alternative: pair not in the parameter set");
    std::optional<std::size_t> other;
    for (std::size_t i = 0; i < problem.theta_points.size() && !other; ++i) {
      if (i != *i1 && i != *i2) other = i;
    }
    if (!other) throw std::invalid_argument("iia_alternative: needs a third hypothesis");
    const Vector moved = problem.theta_points[*other];
    const Vector anchor = theta2;
    auto is_moved = [moved](const Vector& t) { return (t - moved).norm() <= 1e-12; };
    alt.likelihood = [base, anchor, is_moved](const Vector& t, const Vector& x) {
      const double own = base->likelihood(t, x);
      return is_moved(t) ? 0.5 * (own + base->likelihood(anchor, x)) : own;
    };
    if (problem.masses) {
      alt.masses = [base, anchor, is_moved](const Vector& t) -> Vector {
        const Vector own = base->likelihood_masses(t);
        return is_moved(t) ? Vector(0.5 * (own + base->likelihood_masses(anchor))) : own;
      };
    }
    alt.notes.push_back("likelihood of " + format_point(moved) + " moved halfway to " + format_point(anchor));
    return alt;
  }

  if (problem.theta_dim() != 1) {
    throw std::invalid_argument("iia_alternative: continuous parameter spaces must be one-dimensional");
  }
  const double lo = problem.theta_space.lower()[0], hi = problem.theta_space.upper()[0];
  const double w = 0.04 * (hi - lo);
  const double a = theta1[0], b = theta2[0];
  std::vector<double> admissible;
  for (int i = 0; i <= 100; ++i) {
    const double c = lo + w + (hi - lo - 2.0 * w) * i / 100.0;
    if (std::abs(c - a) >= 1.5 * w && std::abs(c - b) >= 1.5 * w) admissible.push_back(c);
  }
  if (admissible.empty()) throw std::invalid_argument("iia_alternative: no room for a prior bump");
  const double near = *std::min_element(admissible.begin(), admissible.end(),
                                        [b](double u, double v) { return std::abs(u - b) < std::abs(v - b); });
  double far = near;
  for (double c : admissible) {
    if (std::abs(c - near) >= 2.0 * w && std::abs(c - b) > std::abs(far - b)) far = c;
  }
  if (far == near) throw std::invalid_argument("iia_alternative: no room for a second prior bump");
  double floor = kInf;
  for (double c : {near, far}) {
    for (int i = 0; i <= 64; ++i) floor = std::min(floor, problem.prior(scalar(c - w + 2.0 * w * i / 64.0)));
  }
  const double eps = 0.5 * floor;
  auto bump = [w](double t, double c) {
    const double d = std::abs(t - c);
    return d < w ? 0.5 * (1.0 + std::cos(std::numbers::pi * d / w)) : 0.0;
  };
  alt.prior = [base, eps, near, far, bump](const Vector& t) {
    const double p = base->prior(t);
    return p + eps * (bump(t[0], near) - bump(t[0], far));
  };
  alt.notes.push_back("prior mass moved from a bump at " + std::to_string(far) + " to one at " + std::to_string(near));
  return alt;
}

// ---------------------------------------------------------------------------
// Discriminativity
// ---------------------------------------------------------------------------

DiscriminativityResult discriminativity_probe(const Loss& L, const EstimationProblem& problem,
                                              const std::vector<Vector>& theta_grid,
                                              const std::vector<double>& radius_schedule) {
  DiscriminativityResult out;
  Accumulator acc("discriminativity", L, 0.0);
  double worst = kInf;
  for (const auto& t : theta_grid) {
    const BoundLoss second = L.bind(problem, t);
    std::vector<double> first_vals, second_vals;
    for (const auto& s : theta_grid) {
      first_vals.push_back(L(problem, t, s));
      second_vals.push_back(second(s));
    }
    for (double r : radius_schedule) {
      DiscriminativityRow row;
      row.theta = t;
      row.radius = r;
      row.min_first = row.min_second = kInf;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < theta_grid.size(); ++j) {
        if ((theta_grid[j] - t).norm() <= r) continue;
        if (std::min(first_vals[j], second_vals[j]) < std::min(row.min_first, row.min_second)) arg = j;
        row.min_first = std::min(row.min_first, first_vals[j]);
        row.min_second = std::min(row.min_second, second_vals[j]);
      }
      if (row.min_first == kInf) continue;
      const double m = std::min(row.min_first, row.min_second);
      ++acc.report.probes;
      if (m < worst) {
        worst = m;
        acc.report.witness = Witness{problem.label, t, theta_grid[arg], "radius " + std::to_string(r), m, m};
      }
      if (!(m > 0.0)) out.pass = false;
      out.rows.push_back(row);
    }
  }
  acc.report.max_discrepancy = worst;
  acc.report.verdict = out.pass ? AxiomReport::Verdict::satisfied_on_probes : AxiomReport::Verdict::violated;
  acc.report.notes.push_back("max_discrepancy holds the smallest loss outside the probe balls");
  out.report = acc.report;
  return out;
}

// ---------------------------------------------------------------------------
// Default suite
// ---------------------------------------------------------------------------

std::vector<ThetaPair> default_pairs(const EstimationProblem& problem) {
  std::vector<ThetaPair> pairs;
  if (problem.finite_theta()) {
    for (const auto& a : problem.theta_points) {
      for (const auto& b : problem.theta_points) {
        if (pairs.size() < 10 && (a - b).norm() > 0.0) pairs.emplace_back(a, b);
      }
    }
    return pairs;
  }
  static const double fr[10][2] = {{0.2, 0.4}, {0.4, 0.2},   {0.1, 0.9}, {0.3, 0.35}, {0.5, 0.7},
                                   {0.7, 0.6}, {0.15, 0.85}, {0.45, 0.55}, {0.8, 0.3}, {0.6, 0.65}};
  const Box& box = problem.theta_space;
  const int M = problem.theta_dim();
  for (const auto& f : fr) {
    Vector a(M), b(M);
    for (int i = 0; i < M; ++i) {
      const double fa = std::fmod(f[0] + 0.37 * i, 1.0), fb = std::fmod(f[1] + 0.37 * i, 1.0);
      a[i] = box.lower()[i] + box.width()[i] * std::clamp(fa, 0.05, 0.95);
      b[i] = box.lower()[i] + box.width()[i] * std::clamp(fb, 0.05, 0.95);
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<Diffeomorphism> default_parameter_transforms(const EstimationProblem& problem) {
  const bool positive = problem.finite_theta()
                            ? std::all_of(problem.theta_points.begin(), problem.theta_points.end(),
                                          [](const Vector& v) { return (v.array() > 0.0).all(); })
                            : (problem.theta_space.lower().array() > 0.0).all();
  return {transforms::identity(), transforms::affine(2.0, 1.0),
          positive ? transforms::cube() : transforms::cubic_plus_linear()};
}

std::vector<Diffeomorphism> default_observation_transforms(const EstimationProblem& problem) {
  if (problem.obs_space.is_discrete()) {
    return {transforms::support_permutation(problem.obs_space.support()), transforms::affine(2.0, 0.0)};
  }
  return {transforms::affine(2.0, 0.0), transforms::affine(0.5, 1.0)};
}

std::vector<DiscreteDistribution> default_noises() {
  return {DiscreteDistribution::coin(0.5), DiscreteDistribution::coin(0.8)};
}

std::vector<AxiomReport> default_suite(const Loss& L, const EstimationProblem& problem, double tol) {
  if (tol <= 0.0) tol = problem.obs_space.is_discrete() ? 1e-9 : 1e-6;
  const auto pairs = default_pairs(problem);
  std::vector<AxiomReport> out;
  out.push_back(check_irp(L, problem, default_parameter_transforms(problem), pairs, tol));
  out.push_back(check_iro(L, problem, default_observation_transforms(problem), pairs, tol));
  out.push_back(check_iia(L, problem, pairs, tol));
  if (problem.obs_space.is_discrete()) {
    out.push_back(check_isi(L, problem, default_noises(), pairs, tol));
  } else {
    out.back().notes.push_back("ISI not checked: continuous observations");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Necessity experiments
// ---------------------------------------------------------------------------

namespace {

struct Oracle {
  std::vector<Vector> points;
  double spacing = 0.0;
};

// Dense-grid argmax on an interval, independent of grid_argmax.
Oracle dense_oracle(const std::function<double(double)>& objective, double lo, double hi, int n = 20001) {
  Oracle o;
  o.spacing = (hi - lo) / (n - 1);
  double best = -kInf;
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    vals[i] = objective(lo + o.spacing * i);
    best = std::max(best, vals[i]);
  }
  for (int i = 0; i < n; ++i) {
    if (vals[i] >= best * (1.0 - 1e-12)) {
      o.points.push_back(scalar(lo + o.spacing * i));
      break;
    }
  }
  return o;
}

// Closed-form squared Hellinger distance between n Bernoulli trials.
double bernoulli_hellinger(int n, double p, double q) {
  return 1.0 - std::pow(std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q)), n);
}

// Length of {q in [lo, hi] : H(q, theta) <= t} by bisection on each side.
double sublevel_length(int n, double theta, double t, double lo, double hi) {
  auto edge = [&](double end) {
    if (bernoulli_hellinger(n, end, theta) <= t) return end;
    double in = theta, out = end;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (in + out);
      (bernoulli_hellinger(n, mid, theta) <= t ? in : out) = mid;
    }
    return in;
  };
  return edge(hi) - edge(lo);
}

NecessityRun run_prediction(const std::string& predicted, const EstimationProblem& problem, const Observation& x,
                            const Loss& L, const Oracle& oracle, const NecessityOptions& opts) {
  NecessityRun run;
  run.problem = problem.label;
  run.predicted = predicted;
  run.oracle = oracle.points;
  const RiskAverseResult res =
      risk_averse_estimate(problem, L, attenuations::truncated_quadratic(), opts.schedule, x, opts.grid);
  run.diverged = res.limit.diverged;
  run.estimate = res.limit.limit.points;
  run.distance = set_distance(run.estimate, run.oracle);
  run.tolerance = opts.tolerance_cells * std::max(oracle.spacing, res.limit.limit.cell_size);
  run.matches = !run.diverged && run.distance <= run.tolerance;
  return run;
}

void judge_axioms(NecessityExperiment& e) {
  bool designated_seen = false, others_clean = true;
  for (const auto& r : e.reports) {
    if (r.axiom == e.axiom) {
      designated_seen = designated_seen || r.violated();
    } else if (r.violated()) {
      others_clean = false;
      e.notes.push_back("unexpected " + r.axiom + " violation by " + r.loss_name);
    }
  }
  // Every loss of the experiment must show the designated violation somewhere.
  for (const auto& name : e.losses) {
    bool seen = false;
    for (const auto& r : e.reports) seen = seen || (r.loss_name == name && r.axiom == e.axiom && r.violated());
    if (!seen) {
      designated_seen = false;
      e.notes.push_back(name + " did not violate " + e.axiom);
    }
  }
  e.single_violation = designated_seen && others_clean;
}

void append(std::vector<AxiomReport>& to, std::vector<AxiomReport> from) {
  for (auto& r : from) to.push_back(std::move(r));
}

void finish(NecessityExperiment& e) {
  judge_axioms(e);
  e.pass = e.single_violation && !e.runs.empty() &&
           std::all_of(e.runs.begin(), e.runs.end(), [](const NecessityRun& r) { return r.matches; });
}

json run_json(const NecessityRun& r) {
  return {{"problem", r.problem},         {"predicted", r.predicted}, {"estimate", points_json(r.estimate)},
          {"oracle", points_json(r.oracle)}, {"distance", r.distance},   {"tolerance", r.tolerance},
          {"diverged", r.diverged},        {"matches", r.matches}};
}

constexpr int kTrials = 10;
constexpr int kSuccesses = 3;

EstimationProblem necessity_problem(const std::string& kind) {
  if (kind == "gaussian") return builtin_problem("gaussian_mean");
  json params = {{"n", kTrials}, {"eps", 0.05}};
  if (kind == "beta") params["prior"] = {{"type", "beta"}, {"a", 2}, {"b", 2}};
  return builtin_problem("binomial_restricted", params);
}

double binomial_kernel(double p) { return std::pow(p, kSuccesses) * std::pow(1.0 - p, kTrials - kSuccesses); }

}  // namespace

json NecessityExperiment::to_json() const {
  json j;
  j["name"] = name;
  j["axiom"] = axiom;
  j["losses"] = losses;
  j["single_violation"] = single_violation;
  j["pass"] = pass;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(r.to_json());
  j["runs"] = json::array();
  for (const auto& r : runs) j["runs"].push_back(run_json(r));
  j["notes"] = notes;
  return j;
}

json NecessityReport::to_json() const {
  json j;
  j["experiments"] = json::array();
  for (const auto& e : experiments) j["experiments"].push_back(e.to_json());
  j["summary"] = {{"passed", passed}, {"total", experiments.size()}};
  return j;
}

NecessityExperiment necessity_experiment(const std::string& axiom, const NecessityOptions& opts) {
  NecessityExperiment e;
  e.axiom = axiom;
  const EstimationProblem bin = necessity_problem("uniform");
  const Observation x = bernoulli_sequence(kTrials, kSuccesses);
  const double lo = bin.theta_space.lower()[0], hi = bin.theta_space.upper()[0];

  if (axiom == "IRP") {
    e.name = "parameter representation";
    const EstimationProblem gauss = necessity_problem("gaussian");
    const EstimationProblem beta = necessity_problem("beta");
    const Loss quad = quadratic_loss(), wml = weighted_ml_loss();
    e.losses = {quad.name, wml.name};
    append(e.reports, default_suite(quad, gauss));
    append(e.reports, default_suite(quad, bin));
    append(e.reports, default_suite(wml, beta));
    append(e.reports, default_suite(wml, gauss));
    // Conjugate posterior at x = 1 is N(1/2, 1/2), truncated to [-4, 4].
    const Oracle fmap = dense_oracle([](double t) { return std::exp(-(t - 0.5) * (t - 0.5)); }, -4.0, 4.0, 40001);
    e.runs.push_back(run_prediction("f-MAP", gauss, scalar(1.0), quad, fmap, opts));
    const Oracle ml = dense_oracle(binomial_kernel, lo, hi);
    e.runs.push_back(run_prediction("ML", beta, x, wml, ml, opts));
  } else if (axiom == "IRO") {
    e.name = "observation representation";
    const Loss seq = sequential_mass_loss();
    e.losses = {seq.name};
    append(e.reports, default_suite(seq, bin));
    // H = 2n is constant, so the prediction is the f-MAP (uniform prior).
    const Oracle fmap = dense_oracle(binomial_kernel, lo, hi);
    e.runs.push_back(run_prediction("generalized WF with constant H (f-MAP)", bin, x, seq, fmap, opts));
  } else if (axiom == "IIA") {
    e.name = "irrelevant alternatives";
    const Loss h = hellinger_sq_loss();
    const double t = default_iia_threshold(h, bin);
    const Loss L = iia_violating_loss(h, h, t);
    e.losses = {L.name};
    e.notes.push_back("threshold t = " + std::to_string(t));
    append(e.reports, default_suite(L, bin));
    // f(theta|x) / (P(theta) sqrt(n / (4 theta (1 - theta)))) with uniform prior.
    auto objective = [&](double th) {
      const double P = sublevel_length(kTrials, th, t, lo, hi) / (hi - lo);
      return binomial_kernel(th) * std::sqrt(th * (1.0 - th)) / P;
    };
    e.runs.push_back(run_prediction("P(theta)^M-weighted WF", bin, x, L, dense_oracle(objective, lo, hi), opts));
  } else if (axiom == "ISI") {
    e.name = "superfluous information";
    const Loss g = semicontinuous_g_loss(weight_function("1+2t"), "1+2t");
    e.losses = {g.name};
    append(e.reports, default_suite(g, bin));
    auto objective = [](double th) { return binomial_kernel(th) / (1.0 + 2.0 * th); };
    e.runs.push_back(run_prediction("argmax f(theta|x)/F(theta)", bin, x, g, dense_oracle(objective, lo, hi), opts));
  } else {
    throw std::invalid_argument("unknown axiom '" + axiom + "'");
  }
  finish(e);
  return e;
}

NecessityReport necessity_suite(const NecessityOptions& opts) {
  NecessityReport out;
  for (const char* axiom : {"IRP", "IRO", "IIA", "ISI"}) {
    out.experiments.push_back(necessity_experiment(axiom, opts));
    if (out.experiments.back().pass) ++out.passed;
  }
  return out;
}

}  // namespace riskaverse
