#pragma once

// Shared helpers for the unit and acceptance suites: random population
// generators and brute-force oracles that deliberately avoid the library's
// own code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "copa/core.hpp"

namespace copa::testing {

inline Population make_population(const std::vector<std::vector<double>>& rows,
                                  std::vector<Direction> directions = {}) {
    const auto k = rows.empty() ? 0 : rows.front().size();
    if (directions.empty()) directions.assign(k, Direction::minimize);
    std::vector<ObjectiveSpec> specs;
    for (std::size_t c = 0; c < k; ++c) specs.push_back({"f" + std::to_string(c + 1), directions[c], {}});
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back("m" + std::to_string(i));
    return build_population(std::move(ids), std::move(specs), rows);
}

// Uniform population in [0,1)^k with random directions when `mixed`.
inline Population random_population(std::mt19937_64& rng, std::size_t n, std::size_t k, bool mixed = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& r : rows)
        for (auto& v : r) v = u(rng);
    std::vector<Direction> dirs(k, Direction::minimize);
    if (mixed)
        for (auto& d : dirs) d = coin(rng) ? Direction::maximize : Direction::minimize;
    return make_population(rows, dirs);
}

// Values drawn from a small grid so ties are common.
inline Population random_tied_population(std::mt19937_64& rng, std::size_t n, std::size_t k, int levels) {
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& r : rows)
        for (auto& v : r) v = static_cast<double>(pick(rng));
    return make_population(rows);
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t k, bool strictly_positive) {
    std::uniform_real_distribution<double> u(strictly_positive ? 0.01 : 0.0, 1.0);
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& x : w) s += (x = u(rng));
    for (auto& x : w) x /= s;
    return w;
}

// û_i = (1/N) #{j : y_j strictly better than y_i}, evaluated pairwise.
inline std::vector<double> brute_rank(const std::vector<double>& col, Direction d) {
    const auto n = col.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (d == Direction::minimize ? col[j] < col[i] : col[j] > col[i]) ++c;
        out[i] = static_cast<double>(c) / static_cast<double>(n);
    }
    return out;
}

// Direct (sum_k |w_k u_k|^p)^(1/p) with no rescaling.
inline double direct_weighted_norm(const std::vector<double>& u, const std::vector<double>& w, double p) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += std::pow(std::abs(w[k] * u[k]), p);
    return std::pow(s, 1.0 / p);
}

// Pareto front by exhaustive pairwise comparison on sign-adjusted values.
inline std::vector<std::size_t> brute_front(const Population& p) {
    const auto n = p.size();
    const auto k = p.num_objectives();
    auto cost = [&](std::size_t i, std::size_t c) {
        const double v = p.scores()(i, c);
        return p.objectives()[c].direction == Direction::minimize ? v : -v;
    };
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j) {
            if (i == j) continue;
            bool all_le = true;
            bool any_lt = false;
            for (std::size_t c = 0; c < k; ++c) {
                all_le = all_le && cost(j, c) <= cost(i, c);
                any_lt = any_lt || cost(j, c) < cost(i, c);
            }
            dominated = all_le && any_lt;
        }
        if (!dominated) front.push_back(i);
    }
    return front;
}

// Directory holding the bundled fixtures, injected by CMake.
inline std::string fixture(const std::string& name) { return std::string(COPA_FIXTURE_DIR) + "/" + name; }

}  // namespace copa::testing
