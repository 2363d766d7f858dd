#include "doctest.h"
#include "riskaverse/catalog.hpp"
#include "riskaverse/estimators.hpp"

#include <cmath>

using namespace riskaverse;
using nlohmann::json;

namespace {

// Posterior equal to the prior at x = 0: every hypothesis gives x = 0 mass 0.5.
EstimationProblem five_points(const std::vector<double>& prior) {
  return builtin_problem("finite_categorical", {{"theta_points", {0, 1, 2, 3, 4}},
                                                {"probs",
                                                 {{0.5, 0.5, 0.0},
                                                  {0.5, 0.4, 0.1},
                                                  {0.5, 0.3, 0.2},
                                                  {0.5, 0.2, 0.3},
                                                  {0.5, 0.1, 0.4}}},
                                                {"prior", prior}});
}

// Two symmetric modes at +-0.5 on [-1, 1].
EstimationProblem bimodal() {
  EstimationProblem p;
  p.label = "bimodal";
  p.theta_space = Box::interval(-1.0, 1.0);
  p.obs_space = ObservationSpace::discrete({scalar(0), scalar(1)});
  p.prior = [](const Vector&) { return 0.5; };
  p.likelihood = [](const Vector& t, const Vector& x) {
    const double d = std::abs(t[0]) - 0.5;
    const double m = 0.1 + 0.8 * std::exp(-d * d / 0.02);
    return x[0] == 0.0 ? m : 1.0 - m;
  };
  return p;
}

bool near(const SetEstimate& e, double v, double tol) { return e.size() == 1 && std::abs(e.points[0][0] - v) <= tol; }

}  // namespace

TEST_CASE("map estimate") {
  auto two = builtin_problem("finite_categorical", {{"theta_points", {0, 1}}, {"probs", {{0.8, 0.2}, {0.3, 0.7}}}});
  auto m = map_estimate(two, scalar(1));
  CHECK(m.size() == 1);
  CHECK(m.points[0][0] == 1.0);
  CHECK(m.value == doctest::Approx(7.0 / 9.0));

  auto flat = five_points({0.2, 0.2, 0.2, 0.2, 0.2});
  CHECK(map_estimate(flat, scalar(0)).size() == 5);
  auto peaked = five_points({0.1, 0.2, 0.4, 0.2, 0.1});
  auto pm = map_estimate(peaked, scalar(0));
  CHECK(pm.size() == 1);
  CHECK(pm.points[0][0] == 2.0);

  CHECK_THROWS_AS(map_estimate(builtin_problem("gaussian_mean"), scalar(0)), std::invalid_argument);
  CHECK_THROWS_AS(fmap_estimate(peaked, scalar(0)), std::invalid_argument);
}

TEST_CASE("f-MAP estimate") {
  CHECK(near(fmap_estimate(builtin_problem("gaussian_mean"), scalar(1.0)), 0.5, 1e-6));
  auto r = builtin_problem("binomial_restricted", {{"n", 10}});
  CHECK(near(fmap_estimate(r, bernoulli_sequence(10, 3)), 0.3, 1e-6));
  auto two = fmap_estimate(bimodal(), scalar(0));
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two.points[0][0] + 0.5) <= 1e-6);
  CHECK(std::abs(two.points[1][0] - 0.5) <= 1e-6);
}

TEST_CASE("ML estimate") {
  auto b = builtin_problem("bernoulli_trials", {{"n", 10}});
  CHECK(near(ml_estimate(b, bernoulli_sequence(10, 3)), 0.3, 1e-6));
  auto r = builtin_problem("binomial_restricted", {{"n", 10}});
  CHECK(near(ml_estimate(r, bernoulli_sequence(10, 0)), 0.05, 0.0));
  auto g = builtin_problem("gaussian_mean");
  CHECK(near(ml_estimate(g, scalar(0.7)), 0.7, 1e-6));
}

TEST_CASE("WF estimate") {
  auto b = builtin_problem("bernoulli_trials", {{"n", 10}});
  auto wf = wf_estimate(b, bernoulli_sequence(10, 3));
  CHECK(near(wf, 3.5 / 11.0, 1e-6));
  auto g = builtin_problem("gaussian_mean");
  auto gw = wf_estimate(g, scalar(1.0));
  auto gf = fmap_estimate(g, scalar(1.0));
  CHECK(set_distance(gw.points, gf.points) <= gf.cell_size);
  auto r = builtin_problem("binomial_restricted", {{"n", 10}});
  CHECK(near(wf_estimate(r, bernoulli_sequence(10, 0)), 0.05, 0.0));

  // The end points carry no posterior mass, so their singular Fisher
  // information never matters.
  auto full = builtin_problem("bernoulli_trials", {{"n", 10}, {"lower", 0.0}, {"upper", 1.0}});
  auto fw = wf_estimate(full, bernoulli_sequence(10, 3));
  CHECK(near(fw, 3.5 / 11.0, 1e-6));
}

TEST_CASE("generalized WF") {
  auto b = builtin_problem("bernoulli_trials", {{"n", 10}});
  const Observation x = bernoulli_sequence(10, 3);
  auto wf = wf_estimate(b, x);
  auto h = generalized_wf(b, x, hellinger_sq_loss());
  CHECK(set_distance(h.points, wf.points) <= wf.coarse_cell_size);
  CHECK(set_distance(h.points, wf.points) <= 1e-5);
  auto q = generalized_wf(b, x, quadratic_loss());
  CHECK(set_distance(q.points, fmap_estimate(b, x).points) <= 1e-6);

  auto beta = builtin_problem("binomial_restricted", {{"n", 10}, {"prior", {{"type", "beta"}, {"a", 2}, {"b", 2}}}});
  auto w = generalized_wf(beta, x, weighted_ml_loss());
  CHECK(set_distance(w.points, ml_estimate(beta, x).points) <= 1e-5);
}

TEST_CASE("expected gain") {
  auto two = builtin_problem("finite_categorical", {{"theta_points", {0, 1}}, {"probs", {{0.8, 0.2}, {0.3, 0.7}}}});
  Posterior post(two, scalar(1));
  auto A = attenuations::truncated_quadratic();
  const Loss q = quadratic_loss();
  CHECK(expected_gain(post, q, A, 0.5, scalar(1)) == doctest::Approx(7.0 / 9.0 + 2.0 / 9.0 * 0.25).epsilon(1e-15));
  CHECK(expected_gain(post, q, A, 1e-12, scalar(0)) == doctest::Approx(1.0));
  CHECK(expected_gain(post, q, A, 2.0, scalar(0)) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(neighbourhood_mass(post, q, A, 0.5, scalar(0)) == doctest::Approx(1.0));
  CHECK(neighbourhood_mass(post, q, A, 2.0, scalar(0)) == doctest::Approx(2.0 / 9.0));

  // Continuous: against brute-force quadrature over the whole box.
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  const Observation x = bernoulli_sequence(6, 2);
  Posterior pr(r, x);
  const Loss h = hellinger_sq_loss();
  for (double k : {1.0, 16.0, 4096.0}) {
    for (double t : {0.06, 0.3, 0.5}) {
      const BoundLoss b = h.bind(r, scalar(t));
      QuadratureOptions o;
      o.rel_tol = 1e-12;
      o.max_cells = 200000;
      o.initial_splits = 4000;
      const double direct =
          integrate([&](const Vector& s) { return pr.weight(s) * A(k * b(s)); }, r.theta_space, o).value;
      CHECK(expected_gain(pr, h, A, k, scalar(t)) == doctest::Approx(direct).epsilon(1e-7));
    }
  }
  CHECK(expected_gain(pr, h, A, 1e-9, scalar(0.3)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("posterior mean") {
  auto full = builtin_problem("bernoulli_trials", {{"n", 10}, {"lower", 0.0}, {"upper", 1.0}});
  CHECK(posterior_mean(full, bernoulli_sequence(10, 3))[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(std::abs(posterior_mean(bimodal(), scalar(0))[0]) <= 1e-10);
  CHECK(std::abs(posterior_mean(builtin_problem("gaussian_mean", {{"lower", -1}, {"upper", 1}}), scalar(0))[0]) <=
        1e-10);
}

TEST_CASE("k schedule") {
  auto s = KSchedule::geometric();
  CHECK(s.k_values.size() == 13);
  CHECK(s.k_values.back() == std::pow(4.0, 12));
  CHECK_NOTHROW(s.validate());
  const KSchedule short_schedule{{1, 2}}, flat{{1, 2, 2, 3}};
  CHECK_THROWS_AS(short_schedule.validate(), std::invalid_argument);
  CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
}

TEST_CASE("risk-averse limit on a finite problem") {
  auto p = five_points({0.1, 0.15, 0.4, 0.25, 0.1});
  for (const auto& A : {attenuations::truncated_quadratic(), attenuations::raised_cosine()}) {
    auto res = risk_averse_estimate(p, hellinger_sq_loss(), A, KSchedule::geometric(), scalar(0));
    CHECK_FALSE(res.limit.diverged);
    CHECK(set_distance(res.limit.limit.points, {scalar(2)}) == 0.0);
    CHECK(res.trace.monotonicity_violation() == 0.0);
  }
  const KSchedule short_schedule{{1, 2}};
  CHECK_THROWS_AS(risk_averse_estimate(p, hellinger_sq_loss(), attenuations::raised_cosine(), short_schedule, scalar(0)),
                  std::invalid_argument);
}

TEST_CASE("risk-averse limit on a Gaussian mean") {
  auto g = builtin_problem("gaussian_mean");
  GridSpec grid;
  grid.refinement_rounds = 5;
  auto res = risk_averse_estimate(g, quadratic_loss(), attenuations::truncated_quadratic(),
                                  KSchedule::geometric(4.0, 2, 8), scalar(1.0), grid);
  CHECK_FALSE(res.limit.diverged);
  CHECK(set_distance(res.limit.limit.points, {scalar(0.5)}) <= 1e-2);
  CHECK(res.trace.monotonicity_violation() <= 1e-12);
}
