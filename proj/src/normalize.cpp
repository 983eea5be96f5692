#include "copa/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace copa {

namespace {

void rank_column(const Population& population, std::size_t k, TiePolicy ties, Matrix& out) {
    const auto n = population.size();
    const auto dir = population.objectives()[k].direction;
    const auto col = population.column(k);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return strictly_better(col[a], col[b], dir); });

    const auto nd = static_cast<double>(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && col[order[end]] == col[order[start]]) ++end;
        // Every model in [start, end) has exactly `start` strictly better peers.
        const double r = ties == TiePolicy::strict_less
                             ? static_cast<double>(start)
                             : static_cast<double>(start) + static_cast<double>(end - start - 1) / 2.0;
        for (std::size_t j = start; j < end; ++j) out(order[j], k) = r / nd;
        start = end;
    }
}

const std::vector<double>& pick(const std::optional<std::vector<double>>& override_values,
                                const std::vector<double>& fallback, std::size_t k_count, const char* what) {
    if (!override_values) return fallback;
    if (override_values->size() != k_count) {
        throw Error(ErrorCode::usage, "invalid_reference",
                    std::string(what) + " override has " + std::to_string(override_values->size()) +
                        " entries, expected " + std::to_string(k_count));
    }
    return *override_values;
}

}  // namespace

double empirical_cdf(std::span<const double> sample, double x) {
    if (sample.empty()) return 0.0;
    const auto below = std::count_if(sample.begin(), sample.end(), [x](double v) { return v < x; });
    return static_cast<double>(below) / static_cast<double>(sample.size());
}

NormalizedMatrix rank_transform(const Population& population, TiePolicy ties) {
    NormalizedMatrix out{Matrix(population.size(), population.num_objectives()), NormalizationMethod::rank, {}};
    for (std::size_t k = 0; k < population.num_objectives(); ++k) rank_column(population, k, ties, out.values);
    return out;
}

NormalizedMatrix ccdf_transform(const Population& population) {
    auto out = rank_transform(population);
    out.method = NormalizationMethod::ccdf;
    for (std::size_t i = 0; i < out.values.rows(); ++i)
        for (double& v : out.values.row(i)) v = 1.0 - v;
    return out;
}

NormalizedMatrix baseline_normalize(const Population& population, NormalizationMethod method,
                                    const ReferencePoints& refs) {
    const auto n = population.size();
    const auto k_count = population.num_objectives();
    const auto extremes = ideal_nadir(population);
    const auto& ideal = pick(refs.ideal, extremes.ideal, k_count, "ideal");
    const auto& nadir = pick(refs.nadir, extremes.nadir, k_count, "nadir");
    const auto& scores = population.scores();

    NormalizedMatrix out{Matrix(n, k_count), method, {}};
    for (std::size_t k = 0; k < k_count; ++k) {
        const auto& spec = population.objectives()[k];
        const double sign = spec.direction == Direction::minimize ? 1.0 : -1.0;
        switch (method) {
            case NormalizationMethod::delta: {
                if (ideal[k] == 0.0) {
                    throw Error(ErrorCode::data, "delta_zero_ideal",
                                "delta normalization divides by the ideal value, which is 0 for objective '" +
                                    spec.name + "'");
                }
                for (std::size_t i = 0; i < n; ++i)
                    out.values(i, k) = sign * (scores(i, k) - ideal[k]) / std::abs(ideal[k]);
                break;
            }
            case NormalizationMethod::minmax: {
                const double span = nadir[k] - ideal[k];
                if (span == 0.0) {
                    out.constant_columns.push_back(k);
                    for (std::size_t i = 0; i < n; ++i) out.values(i, k) = 0.0;
                } else {
                    for (std::size_t i = 0; i < n; ++i) out.values(i, k) = (scores(i, k) - ideal[k]) / span;
                }
                break;
            }
            case NormalizationMethod::maxnorm: {
                for (std::size_t i = 0; i < n; ++i) {
                    if (!(scores(i, k) > 0.0)) {
                        throw Error(ErrorCode::data, "maxnorm_non_positive",
                                    "max-normalization needs strictly positive scores; objective '" + spec.name +
                                        "' has a non-positive value at row " + std::to_string(i + 1));
                    }
                }
                // The ideal of a strictly positive column is its min (minimize) or max (maximize).
                for (std::size_t i = 0; i < n; ++i) {
                    out.values(i, k) = spec.direction == Direction::minimize ? scores(i, k) / extremes.ideal[k]
                                                                             : extremes.ideal[k] / scores(i, k);
                }
                break;
            }
            case NormalizationMethod::raw: {
                for (std::size_t i = 0; i < n; ++i) out.values(i, k) = sign * scores(i, k);
                break;
            }
            case NormalizationMethod::rank:
            case NormalizationMethod::ccdf:
                throw Error(ErrorCode::usage, "invalid_method",
                            std::string(to_string(method)) + " is not a baseline normalization");
        }
    }
    return out;
}

NormalizedMatrix normalize(const Population& population, NormalizationMethod method, const ReferencePoints& refs) {
    switch (method) {
        case NormalizationMethod::rank: return rank_transform(population);
        case NormalizationMethod::ccdf: return ccdf_transform(population);
        default: return baseline_normalize(population, method, refs);
    }
}

}  // namespace copa
