#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copa/core.hpp"
#include "copa/criterion.hpp"
#include "copa/normalize.hpp"

namespace copa {

// How a normalized vector is collapsed to a scalar.
enum class Aggregator {
    copa,            // copa_norm on the chosen normalization
    weighted_pnorm,  // standard_weighted_pnorm on the chosen normalization
    saw,             // simple additive weighting on max-normalized scores
    ahp,             // analytic hierarchy process priorities
    mew,             // multiplicative exponent weighting on max-normalized scores
};

std::string_view to_string(Aggregator a);

struct SelectionSpec {
    NormalizationMethod normalization = NormalizationMethod::rank;
    Aggregator aggregator = Aggregator::copa;
    CriterionConfig criterion = CriterionConfig::uniform(Exponent::infinity(), 1);
    // Only honored by the copa aggregator; overrides `criterion` per model.
    std::vector<PiecewiseRule> piecewise;
    ReferencePoints refs;

    // Maps a method name (rank, delta, minmax, maxnorm, raw, saw, ahp, mew)
    // onto normalization + aggregator. ccdf is rejected: it is a reporting
    // transform where higher is better.
    static SelectionSpec from_method(std::string_view method, CriterionConfig criterion);
    std::string method_name() const;
};

// Two criterion values closer than this (relative) count as tied.
inline constexpr double kTieTolerance = 1e-12;

// The weight-independent half of a selection: the normalized matrix the
// criterion is applied to, computed once on the full population.
class Evaluator {
public:
    Evaluator(const Population& population, const SelectionSpec& spec);

    const Population& population() const noexcept { return *population_; }
    // Values fed to the aggregator: û for rank, max-normalized scores for
    // saw/mew, AHP priorities for ahp.
    const NormalizedMatrix& normalized() const noexcept { return normalized_; }
    const std::vector<bool>& front_mask() const noexcept { return front_; }
    const SelectionSpec& spec() const noexcept { return spec_; }

    double score(std::size_t row, const CriterionConfig& config) const;
    // Secondary key for ties: copa_norm with p = 8 on the same vector.
    double tiebreak(std::size_t row, const CriterionConfig& config) const;

    // Feasibility mask; throws Error(usage) for constraints naming unknown objectives.
    std::vector<bool> feasible(const std::vector<ConstraintRule>& constraints) const;

    SelectionResult select(const CriterionConfig& config, const std::vector<ConstraintRule>& constraints) const;
    SelectionResult select(const CriterionConfig& config, const std::vector<bool>& feasible_mask,
                           const std::vector<ConstraintRule>& constraints) const;

private:
    const Population* population_;
    SelectionSpec spec_;
    NormalizedMatrix normalized_;
    std::vector<bool> front_;
};

// Feasible model minimizing the criterion; ties go to the smaller p = 8 value,
// then the lower row index. Normalization always uses every model, feasible
// or not. Throws Error(infeasible) when constraints exclude every model.
SelectionResult select_best(const Population& population, const SelectionSpec& spec,
                            const std::vector<ConstraintRule>& constraints = {});

// alpha -> weights: alpha on the focus objective, (1 - alpha)/(K - 1) on each
// of the others.
struct AlphaMapping {
    std::size_t focus_objective = 0;

    std::vector<double> weights(double alpha, std::size_t num_objectives) const;
};

struct SweepEntry {
    double lo = 0.0;
    double hi = 0.0;
    double representative_alpha = 0.0;  // midpoint of [lo, hi]
    std::size_t grid_points = 0;
    SelectionResult selection;          // evaluated at the grid alpha nearest the midpoint
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::size_t grid_size = 0;
    Exponent p = Exponent::infinity();
    std::string method;
    std::vector<double> alphas;             // the grid
    std::vector<std::size_t> grid_selection;  // selected row per grid alpha
};

// Evaluates select_best on an evenly spaced alpha grid over [0, 1] and groups
// consecutive equal selections. Interval boundaries sit halfway between grid
// points, so the entries partition [0, 1].
SweepResult sweep_alpha(const Population& population, const SelectionSpec& spec, std::size_t grid_size,
                        const AlphaMapping& mapping, const std::vector<ConstraintRule>& constraints = {});

struct RankTable {
    std::vector<std::string> model_ids;
    std::vector<std::string> criteria;
    std::vector<std::vector<double>> values;  // [model][criterion]
    std::vector<std::vector<int>> ranks;      // [model][criterion], 1 = best
};

// Ranks every model under each labelled criterion. Labels:
//   copa:p=<p|inf>    rank normalization + copa_norm
//   pnorm:p=<p|inf>   rank normalization + standard weighted p-norm
//   delta-mean        arithmetic mean of delta-normalized objectives
//   raw:<objective>   the raw objective alone
//   saw | ahp | mew   decision-making baselines
// `weights` defaults to uniform. Ties are broken by the rank-normalized
// copa p = 8 value, then by row index.
RankTable rank_methods(const Population& population, const std::vector<std::string>& criteria,
                       std::optional<std::vector<double>> weights = std::nullopt);

}  // namespace copa
