#include "copa/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "copa/normalize.hpp"

namespace copa {

namespace {

void check_length(std::span<const double> u, const CriterionConfig& config) {
    if (u.size() != config.weights.size()) {
        throw Error(ErrorCode::usage, "length_mismatch",
                    "vector has " + std::to_string(u.size()) + " entries but " +
                        std::to_string(config.weights.size()) + " weights were given");
    }
}

void check_weights(const Population& population, std::span<const double> weights) {
    if (weights.size() != population.num_objectives()) {
        throw Error(ErrorCode::usage, "length_mismatch",
                    std::to_string(weights.size()) + " weights for " +
                        std::to_string(population.num_objectives()) + " objectives");
    }
}

// (sum_k c_k x_k^p)^(1/p) for x_k >= 0, factoring out the largest term so
// that x^p does not underflow for large p.
double scaled_power_mean(std::span<const double> x, std::span<const double> coef, double p) {
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += coef[k] * x[k];
        return s;
    }
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (coef[k] > 0.0) m = std::max(m, x[k]);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (coef[k] > 0.0) s += coef[k] * std::pow(x[k] / m, p);
    return m * std::pow(s, 1.0 / p);
}

}  // namespace

double copa_norm(std::span<const double> u, const CriterionConfig& config) {
    check_length(u, config);
    std::vector<double> scaled(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) scaled[k] = std::abs(config.weights[k] * u[k]);
    if (config.p.is_infinite()) return scaled.empty() ? 0.0 : *std::max_element(scaled.begin(), scaled.end());
    const std::vector<double> ones(u.size(), 1.0);
    return scaled_power_mean(scaled, ones, config.p.value());
}

double standard_weighted_pnorm(std::span<const double> u, const CriterionConfig& config) {
    check_length(u, config);
    std::vector<double> magnitude(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) magnitude[k] = std::abs(u[k]);
    if (config.p.is_infinite())
        return magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
    return scaled_power_mean(magnitude, config.weights, config.p.value());
}

std::vector<double> saw_scores(const Population& population, std::span<const double> weights) {
    check_weights(population, weights);
    const auto z = baseline_normalize(population, NormalizationMethod::maxnorm).values;
    std::vector<double> out(population.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = 0; k < weights.size(); ++k) out[i] += weights[k] * z(i, k);
    return out;
}

std::vector<double> mew_scores(const Population& population, std::span<const double> weights) {
    check_weights(population, weights);
    const auto z = baseline_normalize(population, NormalizationMethod::maxnorm).values;
    std::vector<double> out(population.size(), 1.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = 0; k < weights.size(); ++k) out[i] *= std::pow(z(i, k), weights[k]);
    return out;
}

Eigenpair principal_eigenvector(const Matrix& a, const EigenOptions& options) {
    const auto n = a.rows();
    if (n == 0 || a.cols() != n) throw Error(ErrorCode::data, "not_square", "eigenvector needs a non-empty square matrix");

    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    double lambda = 0.0;
    double step = 0.0;

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = a.row(i);
            next[i] = std::inner_product(r.begin(), r.end(), v.begin(), 0.0);
        }
        // v sums to 1 and A is positive, so the sum of A v estimates lambda.
        lambda = std::accumulate(next.begin(), next.end(), 0.0);
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw Error(ErrorCode::data, "not_positive", "eigenvector iteration needs a positive matrix");
        step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= lambda;
            step = std::max(step, std::abs(next[i] - v[i]));
        }
        v.swap(next);
        if (step <= options.tolerance) return Eigenpair{std::move(v), lambda, it};
    }
    std::ostringstream os;
    os << "power iteration did not converge after " << options.max_iterations
       << " iterations (last step " << step << ")";
    throw Error(ErrorCode::data, "eigen_not_converged", os.str());
}

Matrix ahp_comparison_matrix(std::span<const double> z) {
    const auto n = z.size();
    Matrix a(n, n, 1.0);
    if (n == 0) return a;
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    const double spread = std::log(*hi) - std::log(*lo);
    if (spread == 0.0) return a;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (z[i] >= z[j]) {
                a(i, j) = (std::log(z[i]) - std::log(z[j])) / spread * (9.0 - 1.0) + 1.0;
                a(j, i) = 1.0 / a(i, j);
            }
        }
    }
    return a;
}

Matrix ahp_priorities(const Population& population) {
    const auto n = population.size();
    const auto z = baseline_normalize(population, NormalizationMethod::maxnorm).values;
    Matrix v(n, population.num_objectives());
    for (std::size_t k = 0; k < population.num_objectives(); ++k) {
        const auto column = z.column(k);
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        if (*lo == *hi) {
            for (std::size_t i = 0; i < n; ++i) v(i, k) = 1.0 / static_cast<double>(n);
            continue;
        }
        const auto pair = principal_eigenvector(ahp_comparison_matrix(column));
        for (std::size_t i = 0; i < n; ++i) v(i, k) = pair.vector[i];
    }
    return v;
}

std::vector<double> ahp_scores(const Population& population, std::span<const double> weights) {
    check_weights(population, weights);
    const auto v = ahp_priorities(population);
    std::vector<double> out(population.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = 0; k < weights.size(); ++k) out[i] += weights[k] * v(i, k);
    return out;
}

std::size_t matching_rule(std::span<const double> raw, std::span<const PiecewiseRule> rules,
                          const std::vector<ObjectiveSpec>& specs) {
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const auto& guard = rules[r].guard;
        if (!guard) return r;
        const auto it = std::find_if(specs.begin(), specs.end(),
                                     [&](const ObjectiveSpec& s) { return s.name == guard->objective_name; });
        if (it == specs.end()) {
            throw Error(ErrorCode::usage, "unknown_objective",
                        "rule guard references unknown objective '" + guard->objective_name + "'");
        }
        const auto k = static_cast<std::size_t>(it - specs.begin());
        if (k >= raw.size()) throw Error(ErrorCode::usage, "length_mismatch", "raw vector shorter than objective list");
        if (guard->holds(raw[k])) return r;
    }
    throw Error(ErrorCode::usage, "no_matching_rule", "no piecewise rule matches and no default rule was given");
}

double piecewise_criterion(std::span<const double> u, std::span<const double> raw,
                           std::span<const PiecewiseRule> rules, const std::vector<ObjectiveSpec>& specs) {
    return copa_norm(u, rules[matching_rule(raw, rules, specs)].config);
}

}  // namespace copa
