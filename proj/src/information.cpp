#include "riskaverse/information.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace riskaverse {

namespace {

double narrowest_side(const EstimationProblem& p) { return p.theta_space.width().minCoeff(); }

// Stencil for coordinate i: evaluation points theta_plus/theta_minus and the
// spacing between them.
struct Stencil {
  Vector plus;
  Vector minus;
  double span = 0.0;
  bool one_sided = false;
};

Stencil score_stencil(const Box& box, const Vector& theta, int i, double step) {
  const double up = box.upper()[i] - theta[i];
  const double down = theta[i] - box.lower()[i];
  Stencil s;
  s.plus = theta;
  s.minus = theta;
  const double room = std::min(up, down);
  if (room >= 0.1 * step) {
    const double h = std::min(step, room);
    s.plus[i] += h;
    s.minus[i] -= h;
    s.span = 2.0 * h;
  } else if (up >= down) {
    const double h = std::min(step, up);
    s.plus[i] += h;
    s.span = h;
    s.one_sided = true;
  } else {
    const double h = std::min(step, down);
    s.minus[i] -= h;
    s.span = h;
    s.one_sided = true;
  }
  return s;
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity(); }

}  // namespace

double InfoMatrix::min_eigenvalue() const {
  if (!entries.allFinite()) return std::numeric_limits<double>::quiet_NaN();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (entries + entries.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double InfoMatrix::determinant() const { return entries.determinant(); }

bool InfoMatrix::positive_definite() const {
  if (!entries.allFinite()) return false;
  const double lam = min_eigenvalue();
  return lam > 0.0 && determinant() > 0.0;
}

double default_score_step(const EstimationProblem& problem) { return 1e-4 * narrowest_side(problem); }
double default_hessian_step(const EstimationProblem& problem) { return 1e-3 * narrowest_side(problem); }

InfoMatrix fisher_information(const EstimationProblem& problem, const Vector& theta, double step) {
  if (problem.finite_theta()) throw std::invalid_argument("fisher_information: needs a continuous parameter space");
  if (step <= 0.0) step = default_score_step(problem);
  const Box& box = problem.theta_space;
  if (!box.contains(theta, 1e-12)) throw std::invalid_argument("fisher_information: theta outside the parameter space");
  const int M = problem.theta_dim();

  InfoMatrix out;
  out.theta = theta;
  out.entries = Matrix::Zero(M, M);
  std::vector<Stencil> stencils;
  for (int i = 0; i < M; ++i) {
    stencils.push_back(score_stencil(box, theta, i, step));
    if (stencils.back().one_sided) out.one_sided = true;
    if (stencils.back().span < (stencils.back().one_sided ? step : 2.0 * step)) {
      out.notes.push_back("step shrunk near the boundary in coordinate " + std::to_string(i));
    }
  }
  if (out.one_sided) out.notes.push_back("one-sided score differences (first order)");

  if (problem.obs_space.is_discrete()) {
    out.method = InfoMatrix::Method::exact_discrete;
    const Vector P = problem.likelihood_masses(theta);
    const std::size_t n = problem.obs_space.size();
    std::vector<Vector> scores;
    for (const auto& s : stencils) {
      const Vector a = problem.likelihood_masses(s.plus), b = problem.likelihood_masses(s.minus);
      Vector score(static_cast<Eigen::Index>(n));
      for (Eigen::Index x = 0; x < score.size(); ++x) {
        // An atom with no mass at theta that gains mass nearby makes the
        // information infinite.
        if (P[x] > 0.0) {
          score[x] = (safe_log(a[x]) - safe_log(b[x])) / s.span;
        } else {
          score[x] = a[x] > 0.0 || b[x] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
      }
      scores.push_back(std::move(score));
    }
    std::vector<double> terms(n);
    for (int i = 0; i < M; ++i) {
      for (int j = i; j < M; ++j) {
        for (std::size_t x = 0; x < n; ++x) {
          const auto e = static_cast<Eigen::Index>(x);
          const double si = scores[i][e], sj = scores[j][e];
          if (P[e] > 0.0) {
            terms[x] = P[e] * si * sj;
          } else {
            terms[x] = std::isinf(si) || std::isinf(sj) ? std::numeric_limits<double>::infinity() : 0.0;
          }
        }
        out.entries(i, j) = out.entries(j, i) = invariant_sum(terms);
      }
    }
  } else {
    out.method = InfoMatrix::Method::quadrature;
    for (int i = 0; i < M; ++i) {
      for (int j = i; j < M; ++j) {
        auto integrand = [&](const Vector& x) {
          const double f = problem.likelihood(theta, x);
          if (!(f > 0.0)) return 0.0;
          auto score = [&](const Stencil& s) {
            return (safe_log(problem.likelihood(s.plus, x)) - safe_log(problem.likelihood(s.minus, x))) / s.span;
          };
          const double si = score(stencils[i]);
          const double sj = i == j ? si : score(stencils[j]);
          return f * si * sj;
        };
        QuadratureResult r = integrate_observations(problem.obs_space, integrand, 1e-10);
        if (!r.converged) out.notes.push_back("Fisher quadrature did not reach its tolerance");
        out.entries(i, j) = out.entries(j, i) = r.value;
      }
    }
  }
  if (!out.entries.allFinite()) throw NumericalError("fisher_information: non-finite score at " + format_point(theta));
  return out;
}

InfoMatrix loss_hessian(const EstimationProblem& problem, const Loss& L, const Vector& theta, double step) {
  if (problem.finite_theta()) throw std::invalid_argument("loss_hessian: needs a continuous parameter space");
  if (step <= 0.0) step = default_hessian_step(problem);
  const BoundLoss bound = L.bind(problem, theta);
  HessianResult h = finite_diff_hessian(bound, theta, step, problem.theta_space);
  InfoMatrix out;
  out.theta = theta;
  out.method = InfoMatrix::Method::finite_difference;
  out.entries = h.hessian;
  out.one_sided = h.one_sided;
  if (h.one_sided) out.notes.push_back("one-sided Hessian stencil (first order)");
  const double lam = out.min_eigenvalue();
  if (lam < -1e-6) {
    out.notes.push_back("loss Hessian is not positive semidefinite (min eigenvalue " + std::to_string(lam) + ")");
  }
  return out;
}

GammaFit gamma_fit(const EstimationProblem& problem, const Loss& L, const std::vector<Vector>& theta_grid,
                   double score_step, double hessian_step) {
  GammaFit fit;
  std::vector<double> num, den;
  for (const auto& theta : theta_grid) {
    InfoMatrix I;
    try {
      I = fisher_information(problem, theta, score_step);
    } catch (const NumericalError& e) {
      fit.excluded.push_back(theta);
      fit.notes.push_back(std::string("excluded ") + format_point(theta) + ": " + e.what());
      continue;
    }
    if (!I.positive_definite()) {
      fit.excluded.push_back(theta);
      fit.notes.push_back("excluded " + format_point(theta) + ": singular Fisher matrix");
      continue;
    }
    InfoMatrix H = loss_hessian(problem, L, theta, hessian_step);
    GammaRow row;
    row.theta = theta;
    row.fisher = I.entries;
    row.hessian = H.entries;
    const double hi = (H.entries.array() * I.entries.array()).sum();
    const double ii = I.entries.squaredNorm();
    row.gamma = hi / ii;
    num.push_back(hi);
    den.push_back(ii);
    fit.rows.push_back(std::move(row));
  }
  if (fit.rows.empty()) throw NumericalError("gamma_fit: every grid point has a singular Fisher matrix");
  fit.gamma = invariant_sum(num) / invariant_sum(den);
  for (auto& row : fit.rows) {
    row.residual = (row.hessian - fit.gamma * row.fisher).norm() / (std::abs(fit.gamma) * row.fisher.norm());
    fit.max_residual = std::max(fit.max_residual, row.residual);
  }
  return fit;
}

}  // namespace riskaverse
