#include "doctest.h"
#include "riskaverse/catalog.hpp"
#include "riskaverse/losses.hpp"

#include <cmath>

using namespace riskaverse;
using nlohmann::json;

namespace {

EstimationProblem one_trial() { return builtin_problem("bernoulli_trials", {{"n", 1}}); }

}  // namespace

TEST_CASE("hellinger and f-divergences on one trial") {
  auto b = one_trial();
  const Vector p = scalar(0.2), q = scalar(0.7);
  const double h = 1.0 - (std::sqrt(0.14) + std::sqrt(0.24));
  CHECK(hellinger_sq(b, p, q) == doctest::Approx(h).epsilon(1e-14));
  CHECK(hellinger_sq(b, p, p) == 0.0);
  CHECK(std::abs(f_divergence(f_functions::hellinger(), b, p, q) - h) <= 1e-12);
  CHECK(f_divergence(f_functions::total_variation(), b, p, q) == doctest::Approx(0.5).epsilon(1e-14));
  // chi^2/2 = sum (p - q)^2 / q / 2
  CHECK(f_divergence(f_functions::chi_squared(), b, p, q) ==
        doctest::Approx(0.5 * (0.25 / 0.3 + 0.25 / 0.7)).epsilon(1e-13));
  CHECK(f_divergence(f_functions::kullback_leibler(), b, p, q) ==
        doctest::Approx(0.2 * std::log(0.2 / 0.7) + 0.8 * std::log(0.8 / 0.3)).epsilon(1e-13));

  auto L = hellinger_sq_loss();
  CHECK(L.likelihood_based);
  CHECK(L.bind(b, q)(p) == L(b, p, q));
}

TEST_CASE("f-divergence with disjoint mass") {
  auto c = builtin_problem("finite_categorical", {{"theta_points", {0, 1}}, {"probs", {{1.0, 0.0}, {0.5, 0.5}}}});
  // q = (1, 0), p = (0.5, 0.5): the second atom uses the slope at infinity.
  CHECK(f_divergence(f_functions::total_variation(), c, scalar(1), scalar(0)) == doctest::Approx(0.5));
  CHECK(std::isinf(f_divergence(f_functions::kullback_leibler(), c, scalar(1), scalar(0))));
  CHECK(hellinger_sq(c, scalar(1), scalar(0)) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("hellinger on continuous observations") {
  auto g = builtin_problem("gaussian_mean", json::object());
  // Unit-variance normals: 1 - exp(-d^2 / 8).
  for (double d : {0.1, 1.0, 3.0}) {
    CHECK(hellinger_sq(g, scalar(0.0), scalar(d)) == doctest::Approx(1.0 - std::exp(-d * d / 8.0)).epsilon(1e-9));
  }
}

TEST_CASE("F-function validation and linear bounds") {
  CHECK_NOTHROW(f_functions::hellinger().validate());
  CHECK_NOTHROW(f_functions::kullback_leibler().validate());
  FFunction bad{"concave", [](double r) { return std::sqrt(r) - 1.0; }, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  FFunction offset{"offset", [](double r) { return r; }, 1.0};
  CHECK_THROWS_AS(offset.validate(), std::invalid_argument);

  std::vector<double> unit, wide;
  for (int i = 0; i <= 100; ++i) unit.push_back(i / 100.0);
  for (int i = 0; i <= 1000; ++i) wide.push_back(i / 10.0);
  CHECK(linear_bound_check(f_functions::hellinger(), 0.0, 1.0, unit).pass);
  CHECK(linear_bound_check(f_functions::hellinger(), 1.0, 1.0, wide).pass);
  auto kl = linear_bound_check(f_functions::kullback_leibler(), 1.0, 1.0, wide);
  CHECK_FALSE(kl.pass);
  CHECK(kl.worst_r == 100.0);
}

TEST_CASE("parameter-space losses") {
  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  CHECK(quadratic_loss()(r, scalar(0.2), scalar(0.5)) == doctest::Approx(0.09));
  CHECK(quadratic_loss()(r, vec({1, 2}), vec({4, -2})) == doctest::Approx(25.0));
  // Uniform prior on [0.05, 0.5] has density 1/0.45.
  CHECK(weighted_ml_loss()(r, scalar(0.2), scalar(0.5)) == doctest::Approx(0.09 / (0.45 * 0.45)).epsilon(1e-14));
  CHECK(weighted_ml_loss().bind(r, scalar(0.5))(scalar(0.2)) == weighted_ml_loss()(r, scalar(0.2), scalar(0.5)));

  auto beta = builtin_problem("binomial_restricted", {{"n", 4}, {"prior", {{"type", "beta"}, {"a", 2}, {"b", 2}}}});
  const double w = beta.prior(scalar(0.3));
  CHECK(weighted_ml_loss()(beta, scalar(0.1), scalar(0.3)) == doctest::Approx(w * w * 0.04).epsilon(1e-14));
}

TEST_CASE("IRO counterexample losses") {
  auto c = builtin_problem("finite_categorical", {{"theta_points", {0, 1}}, {"probs", {{0.2, 0.8}, {0.5, 0.5}}}});
  // q (p - q)^2 summed: 0.5 * 0.09 * 2.
  CHECK(iro_violating_mass_loss()(c, scalar(0), scalar(1)) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK_THROWS_AS(iro_violating_loss()(c, scalar(0), scalar(1)), std::invalid_argument);

  auto b = builtin_problem("bernoulli_trials", {{"n", 5}});
  auto seq = sequential_mass_loss();
  for (auto [p, q] : {std::pair{0.2, 0.7}, std::pair{0.5, 0.55}, std::pair{0.9, 0.1}}) {
    CHECK(seq(b, scalar(p), scalar(q)) == doctest::Approx(5.0 * (p - q) * (p - q)).epsilon(1e-12));
    CHECK(seq.bind(b, scalar(q))(scalar(p)) == seq(b, scalar(p), scalar(q)));
  }
  // Relabeling the support breaks the coordinate structure.
  auto cyc = transform_observations(b, transforms::support_permutation(b.obs_space.support()));
  CHECK(std::abs(seq(cyc, scalar(0.2), scalar(0.7)) - 5.0 * 0.25) > 1e-3);
}

TEST_CASE("IIA counterexample by enumeration") {
  auto c = builtin_problem("finite_categorical", {{"theta_points", {0, 1, 2}},
                                                  {"probs", {{0.7, 0.2, 0.1}, {0.5, 0.3, 0.2}, {0.1, 0.2, 0.7}}},
                                                  {"prior", {0.5, 0.3, 0.2}}});
  const Loss h = hellinger_sq_loss();
  const std::vector<double> prior = {0.5, 0.3, 0.2};
  const double t = h(c, scalar(0), scalar(1)) * 1.01;
  auto L = iia_violating_loss(h, h, t);
  for (int j = 0; j < 3; ++j) {
    double mass = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (h(c, scalar(i), scalar(j)) <= t) mass += prior[i];
    }
    CHECK(iia_weight_mass(h, c, scalar(j), t) == doctest::Approx(mass).epsilon(1e-15));
    for (int i = 0; i < 3; ++i) {
      CHECK(L(c, scalar(i), scalar(j)) == doctest::Approx(mass * mass * h(c, scalar(i), scalar(j))).epsilon(1e-14));
    }
  }
  CHECK(iia_weight_mass(h, c, scalar(0), t) == doctest::Approx(0.8));
  CHECK(iia_weight_mass(h, c, scalar(2), t) == doctest::Approx(0.2));

  // Saturated threshold: the weight mass is one and the base loss comes back.
  auto sat = iia_violating_loss(h, h, 10.0);
  CHECK(sat(c, scalar(0), scalar(2)) == doctest::Approx(h(c, scalar(0), scalar(2))).epsilon(1e-14));
  CHECK_THROWS_AS(iia_violating_loss(h, h, 0.0), std::invalid_argument);
}

TEST_CASE("IIA weight mass on a continuous parameter") {
  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  const Loss q = quadratic_loss();
  // {theta : (theta - 0.3)^2 <= 0.01} is [0.2, 0.4], prior mass 0.2 / 0.45.
  CHECK(iia_weight_mass(q, r, scalar(0.3), 0.01) == doctest::Approx(0.2 / 0.45).epsilon(1e-9));
  // Clipped at the lower end: [0.05, 0.15].
  CHECK(iia_weight_mass(q, r, scalar(0.05), 0.01) == doctest::Approx(0.1 / 0.45).epsilon(1e-9));
  CHECK(iia_weight_mass(q, r, scalar(0.3), 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  const double t = default_iia_threshold(q, r);
  CHECK(t > 0.0);
  CHECK(t < 0.45 * 0.45);
}

TEST_CASE("semicontinuous G-loss") {
  auto r = builtin_problem("binomial_restricted", {{"n", 4}, {"eps", 0.05}});
  auto one = semicontinuous_g_loss(weight_function("one"), "one");
  CHECK(one(r, scalar(0.2), scalar(0.4)) == doctest::Approx(0.02).epsilon(1e-10));
  auto two_t = semicontinuous_g_loss(weight_function("2t"), "2t");
  CHECK(two_t(r, scalar(0.3), scalar(0.5)) == doctest::Approx(0.0128).epsilon(1e-10));
  CHECK(two_t.bind(r, scalar(0.5))(scalar(0.3)) == doctest::Approx(0.0128).epsilon(1e-10));
  CHECK(one.designed_violation == "ISI");

  for (int n = 1; n <= 6; ++n) {
    auto b = builtin_problem("binomial_restricted", {{"n", n}});
    for (double p : {0.1, 0.25, 0.4}) {
      const Vector m = b.likelihood_masses(scalar(p));
      CHECK(std::abs(recover_p(b, m, RecoveryMode::fixed_functional) - p) <= 1e-9);
      CHECK(std::abs(recover_p(b, m, RecoveryMode::family_recalibrated) - p) <= 1e-9);
    }
  }

  // An uninformative coin moves the fixed functional but not the recalibrated one.
  auto aug = augment_superfluous(r, DiscreteDistribution::coin(0.7));
  // (A coin with heads probability p or 1 - p leaves p fixed, so probe 0.2.)
  const Vector m = aug.likelihood_masses(scalar(0.2));
  CHECK(std::abs(recover_p(aug, m, RecoveryMode::fixed_functional) - 0.2) > 1e-3);
  CHECK(std::abs(recover_p(aug, m, RecoveryMode::family_recalibrated) - 0.2) <= 1e-9);

  auto wide = builtin_problem("bernoulli_trials", {{"n", 3}});
  auto recal = semicontinuous_g_loss(weight_function("one"), "one", RecoveryMode::family_recalibrated);
  CHECK_THROWS_AS(recal(wide, scalar(0.2), scalar(0.4)), std::invalid_argument);
  // Beyond 1/2 the fixed functional folds p onto 1 - p.
  CHECK(one(wide, scalar(0.2), scalar(0.8)) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(semicontinuous_g_loss([](double t) { return t - 0.25; }), std::invalid_argument);

  // Representation of the parameter does not enter.
  auto cubed = reparameterize(r, transforms::cube());
  CHECK(two_t(cubed, scalar(0.027), scalar(0.125)) == doctest::Approx(0.0128).epsilon(1e-8));
}

TEST_CASE("loss configuration") {
  CHECK(loss_from_config("hellinger_sq").name == "hellinger_sq");
  CHECK(loss_from_config("f_divergence", {{"F", "tv"}}).name == "f_divergence(total_variation)");
  CHECK(loss_from_config("semicontinuous_g", {{"weight", "1+2t"}, {"recovery", "recalibrated"}}).designed_violation.empty());
  CHECK_THROWS_AS(loss_from_config("nope"), std::invalid_argument);
  CHECK_THROWS_AS(loss_from_config("semicontinuous_g", {{"recovery", "maybe"}}), std::invalid_argument);
}

TEST_CASE("attenuations") {
  auto q = attenuations::truncated_quadratic();
  CHECK_NOTHROW(validate_attenuation(q));
  CHECK_NOTHROW(validate_attenuation(attenuations::raised_cosine()));
  CHECK(q(0.5) == 0.25);
  CHECK(q(1.5) == 0.0);

  Attenuation hard{"hard", [](double a) { return a < 1.0 ? 1.0 - a : 0.0; }, 1.0};
  CHECK_THROWS_AS(validate_attenuation(hard), std::invalid_argument);
  Attenuation bump{"bump", [](double a) { return a < 1.0 ? (1.0 - a) * (1.0 - a) + (a > 0.4 && a < 0.5 ? 0.5 : 0.0) : 0.0; }, 1.0};
  CHECK_THROWS_AS(validate_attenuation(bump), std::invalid_argument);
  Attenuation scaled{"scaled", [](double a) { return 0.9 * (a < 1.0 ? (1.0 - a) * (1.0 - a) : 0.0); }, 1.0};
  CHECK_THROWS_AS(validate_attenuation(scaled), std::invalid_argument);

  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  CHECK(gain_k(q, quadratic_loss(), 50.0, r, scalar(0.2), scalar(0.3)) == doctest::Approx(0.25));
  CHECK(gain_k(q, quadratic_loss(), 200.0, r, scalar(0.2), scalar(0.3)) == 0.0);
}

TEST_CASE("likelihood-ratio profile") {
  Vector P = vec({0.2, 0.8}), Q = vec({0.5, 0.5});
  auto c = rn_profile(P, Q);
  CHECK(c.values == std::vector<double>{0.4, 1.6});
  CHECK(c.breakpoints == std::vector<double>{0.5, 1.0});
  CHECK(c.integral() == doctest::Approx(1.0).epsilon(1e-15));

  // Equal ratios merge, zero-Q atoms drop out.
  auto m = rn_profile(vec({0.1, 0.1, 0.8, 0.0}), vec({0.25, 0.25, 0.0, 0.5}));
  CHECK(m.values == std::vector<double>{0.0, 0.4});
  CHECK(m.breakpoints == std::vector<double>{0.5, 1.0});

  // Invariant under relabeling the support.
  auto b = builtin_problem("bernoulli_trials", {{"n", 3}});
  auto cyc = transform_observations(b, transforms::support_permutation(b.obs_space.support(), 3));
  CHECK(rn_profile(b, scalar(0.2), scalar(0.6)) == rn_profile(cyc, scalar(0.2), scalar(0.6)));
  CHECK_THROWS_AS(rn_profile(vec({1.0}), vec({0.5, 0.5})), std::invalid_argument);
}
