#pragma once
// Built-in estimation problems, configured from JSON parameter maps.

#include "riskaverse/problem.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace riskaverse {

/// Known ids: finite_categorical, bernoulli_trials, binomial_restricted,
/// gaussian_mean. Throws std::invalid_argument on unknown ids or bad params.
EstimationProblem builtin_problem(const std::string& catalog_id, const nlohmann::json& params = nlohmann::json::object());

std::vector<std::string> catalog_ids();

/// Resolves an observation given either as {"value": number | [numbers]},
/// {"index": i} into the support, or {"successes": s} for Bernoulli trials
/// (expanded to the sequence with s leading ones; the order is irrelevant to
/// every estimator since s is sufficient).
Observation parse_observation(const EstimationProblem& problem, const nlohmann::json& spec);

/// Sequence of n trials whose first s entries are 1.
Observation bernoulli_sequence(int n, int successes);

}  // namespace riskaverse
