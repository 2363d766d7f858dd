#pragma once
// Probe-based checks of the four loss axioms, discriminativity, and the
// counterexample experiments showing each axiom is needed.

#include "riskaverse/estimators.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riskaverse {

using ThetaPair = std::pair<Vector, Vector>;

struct Witness {
  std::string problem;
  Vector theta1;
  Vector theta2;
  std::string transform;
  double before = 0.0;
  double after = 0.0;
};

struct AxiomReport {
  enum class Verdict { satisfied_on_probes, violated };

  std::string axiom;
  std::string loss_name;
  Verdict verdict = Verdict::satisfied_on_probes;
  /// The probe with the largest discrepancy; always present when violated.
  std::optional<Witness> witness;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  std::size_t probes = 0;
  std::vector<std::string> notes;

  bool violated() const { return verdict == Verdict::violated; }
  nlohmann::json to_json() const;
};

/// L(theta1, theta2) on the problem against L(F(theta1), F(theta2)) on the
/// reparameterized problem.
AxiomReport check_irp(const Loss& L, const EstimationProblem& problem, const std::vector<Diffeomorphism>& transforms,
                      const std::vector<ThetaPair>& pairs, double tol);
/// L on the problem against L on the problem observed through each G.
AxiomReport check_iro(const Loss& L, const EstimationProblem& problem,
                      const std::vector<Diffeomorphism>& obs_transforms, const std::vector<ThetaPair>& pairs,
                      double tol);
/// L(theta1, theta2) on two problems that agree at theta1 and theta2 (prior
/// and likelihood) but differ elsewhere. Throws std::invalid_argument when
/// they do not agree at the two points.
AxiomReport check_iia(const Loss& L, const EstimationProblem& problem_a, const EstimationProblem& problem_b,
                      const Vector& theta1, const Vector& theta2, double tol);
/// Merges per-pair IIA checks built with iia_alternative.
AxiomReport check_iia(const Loss& L, const EstimationProblem& problem, const std::vector<ThetaPair>& pairs,
                      double tol);
/// L on the problem against L after appending independent noise.
AxiomReport check_isi(const Loss& L, const EstimationProblem& problem, const std::vector<DiscreteDistribution>& noises,
                      const std::vector<ThetaPair>& pairs, double tol);

/// A problem agreeing with `problem` at theta1 and theta2 and differing
/// elsewhere. Finite parameter sets: the likelihood of another hypothesis is
/// moved halfway towards that of theta2. One-dimensional continuous spaces:
/// prior mass is shifted between two bumps away from theta1 and theta2, one
/// near theta2 and one far from it.
EstimationProblem iia_alternative(const EstimationProblem& problem, const Vector& theta1, const Vector& theta2);

struct DiscriminativityRow {
  Vector theta;
  double radius = 0.0;
  /// min over grid points outside B(theta, radius) of L(theta, .) and L(., theta).
  double min_first = 0.0;
  double min_second = 0.0;
};

struct DiscriminativityResult {
  bool pass = true;
  std::vector<DiscriminativityRow> rows;
  AxiomReport report;
};

DiscriminativityResult discriminativity_probe(const Loss& L, const EstimationProblem& problem,
                                              const std::vector<Vector>& theta_grid,
                                              const std::vector<double>& radius_schedule);

/// Ten deterministic parameter pairs (all ordered pairs, up to ten, on a
/// finite parameter set).
std::vector<ThetaPair> default_pairs(const EstimationProblem& problem);
/// identity, affine and a cubic map (theta^3 on positive spaces, theta^3 +
/// theta otherwise).
std::vector<Diffeomorphism> default_parameter_transforms(const EstimationProblem& problem);
/// Support relabeling and scaling for discrete observations; scaling and an
/// affine shift for continuous ones.
std::vector<Diffeomorphism> default_observation_transforms(const EstimationProblem& problem);
/// Fair and biased (0.8) coins.
std::vector<DiscreteDistribution> default_noises();

/// All four checks with the default transforms, pairs and noises. ISI is
/// skipped (and noted) for continuous observations.
std::vector<AxiomReport> default_suite(const Loss& L, const EstimationProblem& problem, double tol = 0.0);

struct NecessityOptions {
  GridSpec grid;
  KSchedule schedule = KSchedule::geometric();
  double tolerance_cells = 1.0;
};

struct NecessityRun {
  std::string problem;
  std::string predicted;
  std::vector<Vector> estimate;
  std::vector<Vector> oracle;
  double distance = 0.0;
  double tolerance = 0.0;
  bool diverged = false;
  bool matches = false;
};

struct NecessityExperiment {
  std::string name;
  std::string axiom;
  std::vector<std::string> losses;
  std::vector<AxiomReport> reports;
  /// Exactly the designated axiom is violated, on every checked problem.
  bool single_violation = false;
  std::vector<NecessityRun> runs;
  bool pass = false;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

struct NecessityReport {
  std::vector<NecessityExperiment> experiments;
  int passed = 0;

  nlohmann::json to_json() const;
};

/// The four counterexample experiments: IRP (quadratic and prior-weighted
/// quadratic losses), IRO (sequential mass loss), IIA (prior-mass-weighted
/// Hellinger) and ISI (semi-continuous G-loss).
NecessityReport necessity_suite(const NecessityOptions& opts = {});

/// Individual experiments, by axiom name.
NecessityExperiment necessity_experiment(const std::string& axiom, const NecessityOptions& opts = {});

}  // namespace riskaverse
