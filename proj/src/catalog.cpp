#include "riskaverse/catalog.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace riskaverse {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& id, const std::string& what) {
  throw std::invalid_argument(id + ": " + what);
}

double number(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
  return params.at(key).get<double>();
}

int integer(const json& params, const char* key, int fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number_integer()) {
    throw std::invalid_argument(std::string("parameter '") + key + "' must be an integer");
  }
  return params.at(key).get<int>();
}

void reject_unknown(const std::string& id, const json& params, std::initializer_list<const char*> allowed) {
  if (!params.is_object()) bad(id, "params must be an object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) bad(id, "unknown parameter '" + it.key() + "'");
  }
}

Vector to_vector(const json& j) {
  if (j.is_number()) return scalar(j.get<double>());
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a number or a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("expected numeric array entries");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

struct PriorSpec {
  std::string type = "uniform";
  double a = 1.0;
  double b = 1.0;
};

PriorSpec parse_prior(const std::string& id, const json& params) {
  PriorSpec spec;
  if (!params.contains("prior")) return spec;
  const json& p = params.at("prior");
  if (p.is_string()) {
    spec.type = p.get<std::string>();
  } else if (p.is_object()) {
    spec.type = p.value("type", std::string("uniform"));
    spec.a = p.value("a", 1.0);
    spec.b = p.value("b", 1.0);
  } else {
    bad(id, "prior must be a name or an object");
  }
  if (spec.type != "uniform" && spec.type != "beta") bad(id, "unknown prior '" + spec.type + "'");
  if (spec.type == "beta" && !(spec.a > 0.0 && spec.b > 0.0)) bad(id, "beta prior needs a, b > 0");
  return spec;
}

// Bernoulli-sequence family on [lower, upper] with support {0,1}^n listed in
// lexicographic order (first trial most significant).
EstimationProblem bernoulli_family(const std::string& id, int n, double lower, double upper, const PriorSpec& prior) {
  if (n < 1 || n > 16) bad(id, "n must lie in [1, 16]");
  if (!(lower >= 0.0 && upper <= 1.0 && lower < upper)) bad(id, "need 0 <= lower < upper <= 1");

  EstimationProblem p;
  p.label = id + "(n=" + std::to_string(n) + ")";
  p.theta_space = Box::interval(lower, upper);

  const std::size_t size = std::size_t{1} << n;
  std::vector<Vector> support;
  support.reserve(size);
  auto popcounts = std::make_shared<std::vector<int>>(size);
  for (std::size_t i = 0; i < size; ++i) {
    Vector x(n);
    for (int j = 0; j < n; ++j) x[j] = static_cast<double>((i >> (n - 1 - j)) & 1u);
    support.push_back(std::move(x));
    (*popcounts)[i] = std::popcount(i);
  }
  p.obs_space = ObservationSpace::discrete(std::move(support));

  p.likelihood = [n](const Vector& theta, const Vector& x) {
    const double q = theta[0];
    int s = 0;
    for (int j = 0; j < x.size(); ++j) s += x[j] != 0.0 ? 1 : 0;
    return std::pow(q, s) * std::pow(1.0 - q, n - s);
  };
  p.masses = [n, popcounts](const Vector& theta) {
    const double q = theta[0];
    std::vector<double> by_count(n + 1);
    for (int s = 0; s <= n; ++s) by_count[s] = std::pow(q, s) * std::pow(1.0 - q, n - s);
    Vector m(static_cast<Eigen::Index>(popcounts->size()));
    for (std::size_t i = 0; i < popcounts->size(); ++i) m[static_cast<Eigen::Index>(i)] = by_count[(*popcounts)[i]];
    return m;
  };

  if (prior.type == "uniform") {
    const double density = 1.0 / (upper - lower);
    p.prior = [density](const Vector&) { return density; };
    p.notes.push_back("uniform prior");
  } else {
    const double a = prior.a, b = prior.b;
    auto kernel = [a, b](const Vector& t) { return std::pow(t[0], a - 1.0) * std::pow(1.0 - t[0], b - 1.0); };
    QuadratureOptions q;
    q.rel_tol = 1e-12;
    q.max_cells = 20000;
    const QuadratureResult z = integrate(kernel, p.theta_space, q);
    if (!z.converged || !(z.value > 0.0)) bad(id, "beta prior cannot be normalized on the parameter space");
    const double norm = z.value;
    p.prior = [kernel, norm](const Vector& t) { return kernel(t) / norm; };
    p.notes.push_back("beta prior, normalized on the parameter space");
  }
  return p;
}

EstimationProblem make_bernoulli_trials(const json& params) {
  const std::string id = "bernoulli_trials";
  reject_unknown(id, params, {"n", "lower", "upper", "prior"});
  if (!params.contains("n")) bad(id, "missing parameter 'n'");
  return bernoulli_family(id, integer(params, "n", 0), number(params, "lower", 0.05), number(params, "upper", 0.95),
                          parse_prior(id, params));
}

EstimationProblem make_binomial_restricted(const json& params) {
  const std::string id = "binomial_restricted";
  reject_unknown(id, params, {"n", "eps", "prior"});
  if (!params.contains("n")) bad(id, "missing parameter 'n'");
  const double eps = number(params, "eps", 0.05);
  if (!(eps > 0.0 && eps < 0.5)) bad(id, "eps must lie in (0, 1/2)");
  EstimationProblem p = bernoulli_family(id, integer(params, "n", 0), eps, 0.5, parse_prior(id, params));
  p.label = id + "(n=" + std::to_string(integer(params, "n", 0)) + ", eps=" + std::to_string(eps) + ")";
  return p;
}

EstimationProblem make_finite_categorical(const json& params) {
  const std::string id = "finite_categorical";
  reject_unknown(id, params, {"theta_points", "probs", "prior"});
  if (!params.contains("theta_points") || !params.contains("probs")) bad(id, "need theta_points and probs");
  const json& tp = params.at("theta_points");
  const json& pr = params.at("probs");
  if (!tp.is_array() || tp.empty()) bad(id, "theta_points must be a nonempty array");
  if (!pr.is_array() || pr.size() != tp.size()) bad(id, "probs needs one row per theta point");

  EstimationProblem p;
  for (const auto& t : tp) p.theta_points.push_back(to_vector(t));
  const std::size_t k = pr.front().size();
  if (k < 1) bad(id, "empty probability row");
  auto table = std::make_shared<std::vector<Vector>>();
  for (const auto& row : pr) {
    Vector r = to_vector(row);
    if (static_cast<std::size_t>(r.size()) != k) bad(id, "probability rows differ in length");
    if (r.minCoeff() < 0.0) bad(id, "negative probability");
    table->push_back(std::move(r));
  }

  auto masses_prior = std::make_shared<std::vector<double>>();
  if (!params.contains("prior") || params.at("prior") == "uniform") {
    masses_prior->assign(tp.size(), 1.0 / static_cast<double>(tp.size()));
  } else if (params.at("prior").is_array()) {
    const Vector m = to_vector(params.at("prior"));
    if (static_cast<std::size_t>(m.size()) != tp.size()) bad(id, "prior needs one mass per theta point");
    masses_prior->assign(m.data(), m.data() + m.size());
  } else {
    bad(id, "prior must be \"uniform\" or a list of masses");
  }

  std::vector<Vector> support;
  for (std::size_t i = 0; i < k; ++i) support.push_back(scalar(static_cast<double>(i)));
  p.label = id + "(" + std::to_string(tp.size()) + " hypotheses)";
  p.theta_space = bounding_box(p.theta_points);
  p.obs_space = ObservationSpace::discrete(std::move(support));

  const auto points = std::make_shared<std::vector<Vector>>(p.theta_points);
  auto locate = [points](const Vector& theta) -> std::size_t {
    for (std::size_t i = 0; i < points->size(); ++i) {
      if ((*points)[i].size() == theta.size() && ((*points)[i] - theta).cwiseAbs().maxCoeff() <= 1e-12) return i;
    }
    throw std::invalid_argument("theta " + format_point(theta) + " is not one of the hypotheses");
  };
  p.prior = [locate, masses_prior](const Vector& theta) { return (*masses_prior)[locate(theta)]; };
  p.masses = [locate, table](const Vector& theta) { return (*table)[locate(theta)]; };
  p.likelihood = [locate, table, k](const Vector& theta, const Vector& x) {
    const double c = x[0];
    if (c < 0 || c >= static_cast<double>(k) || c != std::floor(c)) return 0.0;
    return (*table)[locate(theta)][static_cast<Eigen::Index>(c)];
  };
  return p;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

EstimationProblem make_gaussian_mean(const json& params) {
  const std::string id = "gaussian_mean";
  reject_unknown(id, params, {"sigma", "prior_mean", "prior_sd", "lower", "upper", "dim"});
  const double sigma = number(params, "sigma", 1.0);
  const double mu = number(params, "prior_mean", 0.0);
  const double sd = number(params, "prior_sd", 1.0);
  const double lower = number(params, "lower", -4.0);
  const double upper = number(params, "upper", 4.0);
  const int dim = integer(params, "dim", 1);
  if (!(sigma > 0.0) || !(sd > 0.0)) bad(id, "sigma and prior_sd must be positive");
  if (!(lower < upper)) bad(id, "need lower < upper");
  if (dim < 1 || dim > 2) bad(id, "dim must be 1 or 2");

  EstimationProblem p;
  p.label = id + "(sigma=" + std::to_string(sigma) + ", dim=" + std::to_string(dim) + ")";
  p.theta_space = Box::cube(dim, lower, upper);
  // Initial cells of width 2 sigma (1-D) or 4 sigma (2-D) resolve every
  // likelihood bump wherever its centre lies.
  const double xlo = lower - 12.0 * sigma, xhi = upper + 12.0 * sigma;
  const double cell = (dim == 1 ? 2.0 : 4.0) * sigma;
  std::vector<std::vector<double>> cuts(dim);
  for (int d = 0; d < dim; ++d) {
    for (double c = xlo + cell; c < xhi - 1e-9 * cell; c += cell) cuts[d].push_back(c);
  }
  p.obs_space = ObservationSpace::continuous(Box::cube(dim, xlo, xhi), {}, std::move(cuts));

  const double mass1 = normal_cdf((upper - mu) / sd) - normal_cdf((lower - mu) / sd);
  if (!(mass1 > 0.0)) bad(id, "prior has no mass on the parameter space");
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  p.prior = [=](const Vector& theta) {
    double d = 1.0;
    for (int i = 0; i < theta.size(); ++i) {
      const double z = (theta[i] - mu) / sd;
      d *= inv_sqrt_2pi * std::exp(-0.5 * z * z) / (sd * mass1);
    }
    return d;
  };
  p.likelihood = [=](const Vector& theta, const Vector& x) {
    double d = 1.0;
    for (int i = 0; i < theta.size(); ++i) {
      const double z = (x[i] - theta[i]) / sigma;
      d *= inv_sqrt_2pi * std::exp(-0.5 * z * z) / sigma;
    }
    return d;
  };
  p.notes.push_back("normal prior truncated to the parameter box");
  return p;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  return {"finite_categorical", "bernoulli_trials", "binomial_restricted", "gaussian_mean"};
}

EstimationProblem builtin_problem(const std::string& catalog_id, const json& params) {
  EstimationProblem p;
  if (catalog_id == "finite_categorical") {
    p = make_finite_categorical(params);
  } else if (catalog_id == "bernoulli_trials") {
    p = make_bernoulli_trials(params);
  } else if (catalog_id == "binomial_restricted") {
    p = make_binomial_restricted(params);
  } else if (catalog_id == "gaussian_mean") {
    p = make_gaussian_mean(params);
  } else {
    throw std::invalid_argument("unknown problem id '" + catalog_id + "'");
  }
  p.validate();
  return p;
}

Observation bernoulli_sequence(int n, int successes) {
  if (successes < 0 || successes > n) throw std::invalid_argument("successes must lie in [0, n]");
  Vector x = Vector::Zero(n);
  x.head(successes).setOnes();
  return x;
}

Observation parse_observation(const EstimationProblem& problem, const json& spec) {
  Observation x;
  if (spec.is_number() || spec.is_array()) {
    x = to_vector(spec);
  } else if (!spec.is_object()) {
    throw std::invalid_argument("observation must be an object");
  } else if (spec.contains("successes")) {
    if (!problem.obs_space.is_discrete()) throw std::invalid_argument("'successes' needs Bernoulli observations");
    if (!spec.at("successes").is_number_integer()) throw std::invalid_argument("'successes' must be an integer");
    x = bernoulli_sequence(problem.obs_dim(), spec.at("successes").get<int>());
  } else if (spec.contains("index")) {
    if (!problem.obs_space.is_discrete()) throw std::invalid_argument("'index' needs discrete observations");
    const auto i = spec.at("index").get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= problem.obs_space.size()) {
      throw std::invalid_argument("observation index out of range");
    }
    x = problem.obs_space.support()[static_cast<std::size_t>(i)];
  } else if (spec.contains("value")) {
    x = to_vector(spec.at("value"));
  } else {
    throw std::invalid_argument("observation needs one of value, index, successes");
  }
  problem.check_observation(x);
  return x;
}

}  // namespace riskaverse
