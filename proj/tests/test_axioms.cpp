#include "doctest.h"
#include "riskaverse/axioms.hpp"
#include "riskaverse/catalog.hpp"

#include <cmath>

using namespace riskaverse;
using nlohmann::json;

namespace {

EstimationProblem three_points() {
  return builtin_problem("finite_categorical", {{"theta_points", {0, 1, 2}},
                                                {"probs", {{0.7, 0.2, 0.1}, {0.5, 0.3, 0.2}, {0.1, 0.2, 0.7}}},
                                                {"prior", {0.5, 0.3, 0.2}}});
}

}  // namespace

TEST_CASE("IRP checks") {
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  const std::vector<ThetaPair> pairs = {{scalar(0.2), scalar(0.4)}, {scalar(0.1), scalar(0.45)}};
  auto h = check_irp(hellinger_sq_loss(), r, {transforms::cube()}, pairs, 1e-9);
  CHECK_FALSE(h.violated());
  CHECK(h.max_discrepancy <= 1e-9);

  auto q = check_irp(quadratic_loss(), r, {transforms::cube()}, pairs, 1e-9);
  CHECK(q.violated());
  REQUIRE(q.witness);
  CHECK(std::abs(q.witness->after - q.witness->before) == doctest::Approx(q.max_discrepancy));
  // Hand instance: |0.2 - 0.4|^2 against |0.008 - 0.064|^2.
  CHECK(q.max_discrepancy >= std::abs(0.04 - 0.056 * 0.056) - 1e-12);

  auto id = check_irp(quadratic_loss(), r, {transforms::identity()}, pairs, 0.0);
  CHECK_FALSE(id.violated());
  CHECK(id.max_discrepancy == 0.0);
}

TEST_CASE("IRO checks") {
  auto b = builtin_problem("bernoulli_trials", {{"n", 3}});
  const std::vector<ThetaPair> pairs = {{scalar(0.2), scalar(0.7)}, {scalar(0.5), scalar(0.6)}};
  auto relabel = transforms::support_permutation(b.obs_space.support(), 3);
  auto h = check_iro(hellinger_sq_loss(), b, {relabel}, pairs, 0.0);
  CHECK_FALSE(h.violated());
  CHECK(h.max_discrepancy == 0.0);
  CHECK(check_iro(sequential_mass_loss(), b, {relabel}, pairs, 1e-9).violated());

  auto g = builtin_problem("gaussian_mean");
  const std::vector<ThetaPair> gp = {{scalar(0.0), scalar(1.0)}, {scalar(-2.0), scalar(0.5)}};
  CHECK(check_iro(hellinger_sq_loss(), g, {transforms::affine(2.0, 0.0)}, gp, 1e-6).max_discrepancy <= 1e-6);
  auto v = check_iro(iro_violating_loss(), g, {transforms::affine(2.0, 0.0)}, gp, 1e-6);
  CHECK(v.violated());
  // Densities halve under y = 2x, so the cubic integral drops to a quarter.
  CHECK(v.witness->after == doctest::Approx(v.witness->before / 4.0).epsilon(1e-6));
}

TEST_CASE("IIA checks") {
  auto c = three_points();
  auto alt = iia_alternative(c, scalar(0), scalar(1));
  CHECK(alt.likelihood_masses(scalar(2)) != c.likelihood_masses(scalar(2)));
  CHECK(alt.likelihood_masses(scalar(1)) == c.likelihood_masses(scalar(1)));

  CHECK_FALSE(check_iia(hellinger_sq_loss(), c, alt, scalar(0), scalar(1), 0.0).violated());
  CHECK_FALSE(check_iia(quadratic_loss(), c, alt, scalar(0), scalar(1), 0.0).violated());

  // Enumeration oracle: with t just above H(0, 1), hypothesis 2 joins the
  // sublevel set of theta2 = 1 only in the alternative problem.
  const Loss h = hellinger_sq_loss();
  const double t = 1.01 * std::max(h(c, scalar(0), scalar(1)), h(alt, scalar(2), scalar(1)));
  const Loss L = iia_violating_loss(h, h, t);
  double mass_a = 0.0, mass_b = 0.0;
  const std::vector<double> prior = {0.5, 0.3, 0.2};
  for (int i = 0; i < 3; ++i) {
    if (h(c, scalar(i), scalar(1)) <= t) mass_a += prior[i];
    if (h(alt, scalar(i), scalar(1)) <= t) mass_b += prior[i];
  }
  REQUIRE(mass_a != mass_b);
  auto rep = check_iia(L, c, alt, scalar(0), scalar(1), 1e-12);
  CHECK(rep.violated());
  CHECK(rep.witness->before == doctest::Approx(mass_a * mass_a * h(c, scalar(0), scalar(1))));
  CHECK(rep.witness->after == doctest::Approx(mass_b * mass_b * h(c, scalar(0), scalar(1))));

  // Problems that disagree at the pair are rejected.
  CHECK_THROWS_AS(check_iia(h, c, alt, scalar(0), scalar(2), 0.0), std::invalid_argument);

  // Continuous alternative keeps prior and likelihood at the pair.
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  auto ralt = iia_alternative(r, scalar(0.2), scalar(0.3));
  CHECK(ralt.prior(scalar(0.2)) == r.prior(scalar(0.2)));
  CHECK(ralt.prior(scalar(0.3)) == r.prior(scalar(0.3)));
  CHECK(integrate_box(ralt.prior, ralt.theta_space, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  bool differs = false;
  for (int i = 0; i <= 100; ++i) differs = differs || ralt.prior(scalar(0.05 + 0.0045 * i)) != r.prior(scalar(0.05 + 0.0045 * i));
  CHECK(differs);
}

TEST_CASE("ISI checks") {
  auto b = builtin_problem("bernoulli_trials", {{"n", 4}});
  const auto pairs = default_pairs(b);
  auto h = check_isi(hellinger_sq_loss(), b, default_noises(), pairs, 1e-12);
  CHECK_FALSE(h.violated());

  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  auto fixed = semicontinuous_g_loss(weight_function("1+2t"), "1+2t");
  auto recal = semicontinuous_g_loss(weight_function("1+2t"), "1+2t", RecoveryMode::family_recalibrated);
  CHECK(check_isi(fixed, r, default_noises(), default_pairs(r), 1e-9).violated());
  CHECK_FALSE(check_isi(recal, r, default_noises(), default_pairs(r), 1e-9).violated());
  CHECK_THROWS_AS(check_isi(hellinger_sq_loss(), builtin_problem("gaussian_mean"), default_noises(), pairs, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("discriminativity probe") {
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  std::vector<Vector> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(scalar(0.05 + 0.0225 * i));
  const std::vector<double> radii = {0.01, 0.05, 0.2};
  CHECK(discriminativity_probe(hellinger_sq_loss(), r, grid, radii).pass);
  CHECK(discriminativity_probe(quadratic_loss(), r, grid, radii).pass);

  Loss planted = hellinger_sq_loss();
  planted.name = "planted";
  planted.binder = nullptr;
  planted.eval = [](const EstimationProblem& p, const Vector& a, const Vector& b) {
    const bool pair = std::abs(a[0] - 0.095) < 1e-9 && std::abs(b[0] - 0.32) < 1e-9;
    return pair ? 0.0 : hellinger_sq(p, a, b);
  };
  auto res = discriminativity_probe(planted, r, grid, radii);
  CHECK_FALSE(res.pass);
  CHECK(res.report.violated());
  REQUIRE(res.report.witness);
  CHECK(res.report.witness->theta1[0] == doctest::Approx(0.095));
}

TEST_CASE("Hellinger passes the default suite on every built-in problem") {
  std::vector<EstimationProblem> problems = {
      three_points(), builtin_problem("bernoulli_trials", {{"n", 4}}), builtin_problem("binomial_restricted", {{"n", 6}}),
      builtin_problem("gaussian_mean")};
  for (const auto& p : problems) {
    for (const auto& rep : default_suite(hellinger_sq_loss(), p)) {
      INFO(p.label << " " << rep.axiom << " " << rep.max_discrepancy);
      CHECK_FALSE(rep.violated());
    }
  }
}

TEST_CASE("sensitivity of well-behaved losses") {
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  for (const auto& L : {hellinger_sq_loss(), f_divergence_loss(f_functions::chi_squared())}) {
    CHECK(loss_hessian(r, L, scalar(0.3)).entries.norm() > 0.0);
  }
}

TEST_CASE("report serialization") {
  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  auto rep = check_irp(quadratic_loss(), r, {transforms::affine(2.0, 1.0)}, default_pairs(r), 1e-9);
  json j = rep.to_json();
  CHECK(j["verdict"] == "violated");
  CHECK(j["witness"]["theta1"].size() == 1);
  CHECK(j["axiom"] == "IRP");
}
