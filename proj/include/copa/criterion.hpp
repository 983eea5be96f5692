#pragma once

#include <optional>
#include <span>
#include <vector>

#include "copa/core.hpp"

namespace copa {

// Weighted p-norm with the weights inside the absolute value:
//   (sum_k |w_k u_k|^p)^(1/p),   max_k |w_k u_k| for p = inf.
// Throws Error(usage) on a length mismatch.
double copa_norm(std::span<const double> u, const CriterionConfig& config);

// The textbook weighted p-norm (sum_k w_k |u_k|^p)^(1/p). Its p = inf limit
// is max_k |u_k| and ignores the weights.
double standard_weighted_pnorm(std::span<const double> u, const CriterionConfig& config);

// Simple additive weighting over max-normalized objectives (lower is better).
std::vector<double> saw_scores(const Population& population, std::span<const double> weights);

// Multiplicative exponent weighting: prod_k maxnorm_k^w_k (lower is better).
std::vector<double> mew_scores(const Population& population, std::span<const double> weights);

struct EigenOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 10'000;
};

struct Eigenpair {
    std::vector<double> vector;  // non-negative, sums to 1
    double value = 0.0;
    std::size_t iterations = 0;
};

// Power iteration from the uniform vector. Throws Error(data,
// "eigen_not_converged") carrying the last residual when the budget runs out.
Eigenpair principal_eigenvector(const Matrix& a, const EigenOptions& options = {});

// Reciprocal pairwise-comparison matrix on Saaty's 1..9 scale built from the
// logarithms of a strictly positive column.
Matrix ahp_comparison_matrix(std::span<const double> z);

// Per-objective AHP priority vectors (column k sums to 1) computed from the
// max-normalized population. Lower priority is better.
Matrix ahp_priorities(const Population& population);

// sum_k w_k v_{k,i} over ahp_priorities (lower is better).
std::vector<double> ahp_scores(const Population& population, std::span<const double> weights);

// A criterion that switches weights depending on raw objective values. A rule
// without a guard is the default and always matches.
struct PiecewiseRule {
    std::optional<ConstraintRule> guard;
    CriterionConfig config;
};

// copa_norm(u) under the first rule whose guard holds on `raw`. Throws
// Error(usage, "no_matching_rule") when nothing matches.
double piecewise_criterion(std::span<const double> u, std::span<const double> raw,
                           std::span<const PiecewiseRule> rules, const std::vector<ObjectiveSpec>& specs);

// Index of the rule piecewise_criterion would apply.
std::size_t matching_rule(std::span<const double> raw, std::span<const PiecewiseRule> rules,
                          const std::vector<ObjectiveSpec>& specs);

}  // namespace copa
