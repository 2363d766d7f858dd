#include "doctest.h"
#include "riskaverse/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace riskaverse;

TEST_CASE("quadrature: constant and monomials") {
  const Box unit = Box::interval(0.0, 1.0);
  CHECK(integrate_box([](const Vector&) { return 1.0; }, unit, 1e-12) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate_box([](const Vector& t) { return t[0] * t[0]; }, unit, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("quadrature: single cell is exact up to degree 22") {
  QuadratureOptions opts;
  opts.max_cells = 1;
  opts.rel_tol = 1.0;
  auto r = integrate([](const Vector& t) { return std::pow(t[0], 22); }, Box::interval(0.0, 1.0), opts);
  CHECK(r.cells == 1);
  CHECK(r.value == doctest::Approx(1.0 / 23.0).epsilon(1e-14));
}

TEST_CASE("quadrature: normal density matches erf") {
  auto phi = [](const Vector& t) { return std::exp(-0.5 * t[0] * t[0]) / std::sqrt(2.0 * std::numbers::pi); };
  const double oracle = std::erf(8.0 / std::sqrt(2.0));
  CHECK(std::abs(integrate_box(phi, Box::interval(-8.0, 8.0), 1e-11) - oracle) < 1e-9);
}

TEST_CASE("quadrature: two dimensions and breakpoints") {
  const Box sq = Box::cube(2, 0.0, 1.0);
  CHECK(integrate_box([](const Vector& t) { return t[0] * t[1]; }, sq, 1e-12) == doctest::Approx(0.25));
  QuadratureOptions opts;
  opts.breakpoints = {{0.3}};
  auto step = [](const Vector& t) { return t[0] < 0.3 ? 1.0 : 2.0; };
  auto r = integrate(step, Box::interval(0.0, 1.0), opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("quadrature: non-finite integrand throws") {
  CHECK_THROWS_AS(integrate_box([](const Vector&) { return std::nan(""); }, Box::interval(0, 1), 1e-6),
                  NumericalError);
}

TEST_CASE("invariant_sum is independent of order") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> terms;
  for (int i = 0; i < 500; ++i) terms.push_back(std::ldexp(u(rng), static_cast<int>(i % 40) - 20));
  const double a = invariant_sum(terms);
  for (int rep = 0; rep < 5; ++rep) {
    std::shuffle(terms.begin(), terms.end(), rng);
    CHECK(invariant_sum(terms) == a);
  }
  std::vector<double> small = {0.1, 0.2, 0.3};
  CHECK(invariant_sum(small) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("grid_argmax: quadratic peak") {
  auto est = grid_argmax([](const Vector& t) { return -(t[0] - 0.3) * (t[0] - 0.3); }, Box::interval(0, 1),
                         GridSpec{});
  REQUIRE(est.size() == 1);
  CHECK(std::abs(est.points[0][0] - 0.3) <= est.cell_size);
  CHECK_FALSE(est.plateau);
}

TEST_CASE("grid_argmax: off-grid peak is refined") {
  auto est = grid_argmax([](const Vector& t) { return -std::pow(t[0] - 0.31415, 2); }, Box::interval(0, 1),
                         GridSpec{});
  REQUIRE(est.size() == 1);
  CHECK(std::abs(est.points[0][0] - 0.31415) <= est.cell_size);
  CHECK(est.cell_size < 1e-6);
}

TEST_CASE("grid_argmax: constant gives plateau") {
  auto est = grid_argmax([](const Vector&) { return 2.0; }, Box::interval(0, 1), GridSpec{});
  CHECK(est.plateau);
  CHECK(est.size() >= 3);
  for (const auto& p : est.points) CHECK(Box::interval(0, 1).contains(p));
}

TEST_CASE("grid_argmax: two symmetric peaks") {
  auto f = [](const Vector& t) { return -std::min(std::abs(t[0] - 0.2), std::abs(t[0] - 0.8)); };
  auto est = grid_argmax(f, Box::interval(0, 1), GridSpec{});
  REQUIRE(est.size() == 2);
  CHECK(std::abs(est.points[0][0] - 0.2) <= est.cell_size);
  CHECK(std::abs(est.points[1][0] - 0.8) <= est.cell_size);
}

TEST_CASE("grid_argmax: boundary maximum and excluded points") {
  auto est = grid_argmax([](const Vector& t) { return -t[0]; }, Box::interval(0.05, 0.5), GridSpec{});
  REQUIRE(est.size() == 1);
  CHECK(est.points[0][0] == 0.05);
  auto ex = grid_argmax(
      [](const Vector& t) { return t[0] < 0.5 ? -std::numeric_limits<double>::infinity() : -t[0]; },
      Box::interval(0, 1), GridSpec{});
  REQUIRE(ex.size() == 1);
  CHECK(ex.points[0][0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("grid_argmax: two dimensions") {
  auto f = [](const Vector& t) { return -std::pow(t[0] - 0.37, 2) - 2.0 * std::pow(t[1] + 0.21, 2); };
  auto est = grid_argmax(f, Box::cube(2, -1, 1), GridSpec{});
  REQUIRE(est.size() == 1);
  CHECK(std::abs(est.points[0][0] - 0.37) <= est.cell_size);
  CHECK(std::abs(est.points[0][1] + 0.21) <= est.cell_size);
}

TEST_CASE("grid_argmax: values respect the plateau tolerance") {
  auto f = [](const Vector& t) { return std::cos(6.0 * t[0]) * std::exp(-t[0]); };
  auto est = grid_argmax(f, Box::interval(-2, 3), GridSpec{});
  for (double v : est.values) CHECK(v >= (1.0 - est.plateau_tol) * est.value - 1e-15);
}

TEST_CASE("finite_argmax keeps ties") {
  std::vector<Vector> c = {scalar(0), scalar(1), scalar(2)};
  std::vector<double> v = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(finite_argmax(c, v).size() == 3);
  std::vector<double> w = {0.1, 0.4, 0.2};
  auto e = finite_argmax(c, w);
  REQUIRE(e.size() == 1);
  CHECK(e.points[0][0] == 1.0);
}

TEST_CASE("finite_diff_hessian") {
  auto q = [](const Vector& t) { return t[0] * t[0] + 3.0 * t[1] * t[1]; };
  auto h = finite_diff_hessian(q, Vector::Zero(2), 1e-3);
  CHECK(h.hessian(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(h.hessian(1, 1) == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(std::abs(h.hessian(0, 1)) < 1e-6);

  auto lin = finite_diff_hessian([](const Vector& t) { return 3.0 * t[0] - t[1]; }, vec({0.4, 0.2}), 1e-3);
  CHECK(lin.hessian.cwiseAbs().maxCoeff() < 1e-6);

  auto one = finite_diff_hessian([](const Vector& t) { return 2.0 * std::pow(t[0] - 0.5, 2); }, scalar(0.5), 1e-3);
  CHECK(std::abs(one.hessian(0, 0) - 4.0) < 1e-6);

  auto mixed = finite_diff_hessian([](const Vector& t) { return t[0] * t[1] + std::pow(t[0], 3); }, vec({0.5, 0.5}),
                                   1e-4);
  CHECK(mixed.hessian(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mixed.hessian(0, 0) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("finite_diff_hessian near a face") {
  const Box b = Box::interval(0, 1);
  auto cubic = [](const Vector& t) { return std::pow(t[0], 3); };
  auto h = finite_diff_hessian(cubic, scalar(0.0), 1e-3, b);
  CHECK(h.one_sided);
  CHECK(std::abs(h.hessian(0, 0) - 0.0) < 1e-2);
  auto shrunk = finite_diff_hessian(cubic, scalar(0.9995), 1e-3, b);
  CHECK_FALSE(shrunk.one_sided);
  CHECK(shrunk.hessian(0, 0) == doctest::Approx(6 * 0.9995).epsilon(1e-6));
}

TEST_CASE("ray_crossing") {
  auto f = [](const Vector& t) { return t[0] * t[0]; };
  const double t = ray_crossing(f, scalar(0.0), scalar(1.0), 0.25, 10.0);
  CHECK(t == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ray_crossing(f, scalar(0.0), scalar(1.0), 500.0, 10.0) == 10.0);
}

namespace {
SetEstimate single(double x) {
  SetEstimate e;
  e.points = {scalar(x)};
  e.values = {1.0};
  e.value = 1.0;
  return e;
}
}  // namespace

TEST_CASE("setlim_detect") {
  std::vector<SetEstimate> constant(5, single(0.3));
  auto a = setlim_detect(constant, 1e-6, 3);
  CHECK_FALSE(a.diverged);
  REQUIRE(a.limit.size() == 1);
  CHECK(a.limit.points[0][0] == 0.3);

  std::vector<SetEstimate> conv;
  for (int k = 10; k <= 20; ++k) conv.push_back(single(0.3 + 1.0 / k));
  auto b = setlim_detect(conv, 0.01, 3);
  CHECK_FALSE(b.diverged);
  REQUIRE(b.limit.size() == 1);
  CHECK(std::abs(b.limit.points[0][0] - 0.3) < 0.06);

  std::vector<SetEstimate> alt;
  for (int i = 0; i < 8; ++i) alt.push_back(single(i % 2 ? 0.8 : 0.2));
  auto c = setlim_detect(alt, 0.01, 4);
  CHECK(c.diverged);

  std::vector<SetEstimate> short_list(2, single(0.3));
  CHECK_THROWS_AS(setlim_detect(short_list, 0.01, 3), std::invalid_argument);
}

TEST_CASE("setlim_detect ignores appended duplicates") {
  std::vector<SetEstimate> t;
  for (int k = 1; k <= 6; ++k) t.push_back(single(0.5 + 1e-3 / k));
  auto base = setlim_detect(t, 1e-3, 3);
  for (int extra = 0; extra < 4; ++extra) {
    t.push_back(t.back());
    auto r = setlim_detect(t, 1e-3, 3);
    CHECK(r.diverged == base.diverged);
    REQUIRE(r.limit.size() == base.limit.size());
    CHECK(r.limit.points[0] == base.limit.points[0]);
  }
}

TEST_CASE("setlim_detect accepts a sequence that becomes constant") {
  std::vector<SetEstimate> t = {single(0.9), single(0.7), single(0.1), single(0.1), single(0.1), single(0.1)};
  auto r = setlim_detect(t, 1e-6, 3);
  CHECK_FALSE(r.diverged);
  REQUIRE(r.limit.size() == 1);
  CHECK(r.limit.points[0][0] == 0.1);
}
