#include "doctest.h"
#include "riskaverse/catalog.hpp"
#include "riskaverse/information.hpp"

#include <cmath>

using namespace riskaverse;
using nlohmann::json;

TEST_CASE("Fisher information closed forms") {
  auto b10 = builtin_problem("bernoulli_trials", {{"n", 10}});
  CHECK(fisher_information(b10, scalar(0.5)).entries(0, 0) == doctest::Approx(40.0).epsilon(1e-3 / 40.0));
  auto b1 = builtin_problem("bernoulli_trials", {{"n", 1}});
  auto I1 = fisher_information(b1, scalar(0.2));
  CHECK(std::abs(I1.entries(0, 0) - 6.25) <= 1e-3);
  CHECK(I1.method == InfoMatrix::Method::exact_discrete);
  CHECK_FALSE(I1.one_sided);

  auto g = builtin_problem("gaussian_mean", json::object());
  for (double t : {-3.0, 0.0, 1.7}) {
    auto I = fisher_information(g, scalar(t));
    CHECK(std::abs(I.entries(0, 0) - 1.0) <= 1e-6);
    CHECK(I.method == InfoMatrix::Method::quadrature);
  }
  auto g2 = builtin_problem("gaussian_mean", {{"dim", 2}, {"sigma", 2.0}});
  auto I2 = fisher_information(g2, vec({0.3, -1.0}));
  CHECK(std::abs(I2.entries(0, 0) - 0.25) <= 1e-6);
  CHECK(std::abs(I2.entries(0, 1)) <= 1e-6);
  CHECK(std::abs(I2.entries(1, 1) - 0.25) <= 1e-6);
}

TEST_CASE("Fisher additivity over trials") {
  auto b1 = builtin_problem("bernoulli_trials", {{"n", 1}});
  for (int n : {2, 5, 9}) {
    auto bn = builtin_problem("bernoulli_trials", {{"n", n}});
    for (double p : {0.1, 0.35, 0.8}) {
      const double one = fisher_information(b1, scalar(p)).entries(0, 0);
      CHECK(fisher_information(bn, scalar(p)).entries(0, 0) == doctest::Approx(n * one).epsilon(1e-6));
    }
  }
}

TEST_CASE("Fisher information near a face") {
  auto r = builtin_problem("binomial_restricted", {{"n", 4}});
  auto I = fisher_information(r, scalar(0.5));
  CHECK(I.one_sided);
  CHECK_FALSE(I.notes.empty());
  CHECK(I.entries(0, 0) == doctest::Approx(16.0).epsilon(1e-3));
}

TEST_CASE("Fisher covariance under reparameterization") {
  auto r = builtin_problem("binomial_restricted", {{"n", 6}});
  auto c = reparameterize(r, transforms::cube());
  for (double t : {0.1, 0.25, 0.4}) {
    const double I = fisher_information(r, scalar(t)).entries(0, 0);
    const double Ic = fisher_information(c, scalar(t * t * t)).entries(0, 0);
    CHECK(Ic == doctest::Approx(I / (9.0 * std::pow(t, 4))).epsilon(1e-3));
  }
}

TEST_CASE("loss Hessians") {
  auto b1 = builtin_problem("bernoulli_trials", {{"n", 1}});
  CHECK(std::abs(loss_hessian(b1, quadratic_loss(), scalar(0.3)).entries(0, 0) - 2.0) <= 1e-6);
  CHECK(std::abs(loss_hessian(b1, hellinger_sq_loss(), scalar(0.5)).entries(0, 0) - 1.0) <= 1e-3);
  // 2 sum_x q (dP/dp)^2 with dP/dp = +-1: 2.
  CHECK(std::abs(loss_hessian(b1, iro_violating_mass_loss(), scalar(0.5)).entries(0, 0) - 2.0) <= 1e-3);
  CHECK(loss_hessian(b1, hellinger_sq_loss(), scalar(0.5)).positive_definite());

  auto g2 = builtin_problem("gaussian_mean", {{"dim", 2}});
  auto H = loss_hessian(g2, quadratic_loss(), vec({0.1, 0.2}));
  CHECK(std::abs(H.entries(0, 0) - 2.0) <= 1e-6);
  CHECK(std::abs(H.entries(0, 1)) <= 1e-6);
}

TEST_CASE("gamma fit") {
  std::vector<Vector> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(scalar(0.1 * i));
  auto b5 = builtin_problem("bernoulli_trials", {{"n", 5}});
  auto h = gamma_fit(b5, hellinger_sq_loss(), grid);
  CHECK(std::abs(h.gamma - 0.25) <= 1e-3);
  CHECK(h.max_residual <= 1e-3);
  CHECK(h.rows.size() == 9);
  for (const auto& row : h.rows) CHECK(std::abs(row.gamma - 0.25) <= 1e-3);

  auto chi = gamma_fit(b5, f_divergence_loss(f_functions::chi_squared()), grid);
  CHECK(std::abs(chi.gamma - 1.0) <= 1e-3);
  auto tvless = gamma_fit(b5, f_divergence_loss(f_functions::kullback_leibler()), grid);
  CHECK(std::abs(tvless.gamma - 1.0) <= 1e-3);

  auto q = gamma_fit(b5, quadratic_loss(), grid);
  CHECK(q.max_residual > 0.1);

  // Singular points are excluded, not fatal.
  auto b01 = builtin_problem("bernoulli_trials", {{"n", 2}, {"lower", 0.0}, {"upper", 1.0}});
  auto ex = gamma_fit(b01, hellinger_sq_loss(), {scalar(0.0), scalar(0.5)});
  CHECK(ex.excluded.size() == 1);
  CHECK(ex.rows.size() == 1);
  CHECK_THROWS_AS(gamma_fit(b01, hellinger_sq_loss(), {scalar(0.0)}), NumericalError);
}
