#pragma once

#include <optional>
#include <span>
#include <vector>

#include "copa/core.hpp"

namespace copa {

// How models with identical raw values are ranked.
enum class TiePolicy {
    strict_less,  // count of strictly better models; ties share the lowest rank
    average,      // mid-rank of the tied block
};

// Fraction of `sample` strictly below `x`.
double empirical_cdf(std::span<const double> sample, double x);

// Per column, the fraction of models strictly better than each model. The
// best model(s) map to 0 and values lie in [0, (N-1)/N].
NormalizedMatrix rank_transform(const Population& population, TiePolicy ties = TiePolicy::strict_less);

// Optional per-objective replacements for the population ideal/nadir.
struct ReferencePoints {
    std::optional<std::vector<double>> ideal;
    std::optional<std::vector<double>> nadir;
};

// delta:   (y - ideal) / |ideal|, sign-adjusted so 0 is best
// minmax:  (y - ideal) / (nadir - ideal); constant columns become 0
// maxnorm: y / min for minimize columns, max / y for maximize columns
// raw:     y for minimize columns, -y for maximize columns
NormalizedMatrix baseline_normalize(const Population& population, NormalizationMethod method,
                                    const ReferencePoints& refs = {});

// 1 - rank_transform; higher is better, the best model maps to 1.
NormalizedMatrix ccdf_transform(const Population& population);

// Dispatches on `method`.
NormalizedMatrix normalize(const Population& population, NormalizationMethod method,
                           const ReferencePoints& refs = {});

}  // namespace copa
