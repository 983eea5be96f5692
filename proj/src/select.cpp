#include "copa/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copa/pareto.hpp"

namespace copa {

namespace {

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

CriterionConfig tiebreak_config(const CriterionConfig& config) { return CriterionConfig{Exponent(8.0), config.weights, false}; }

std::string join_constraints(const std::vector<ConstraintRule>& constraints) {
    std::string out;
    for (const auto& c : constraints) {
        if (!out.empty()) out += ", ";
        out += c.to_string();
    }
    return out;
}

}  // namespace

std::string_view to_string(Aggregator a) {
    switch (a) {
        case Aggregator::copa: return "copa";
        case Aggregator::weighted_pnorm: return "pnorm";
        case Aggregator::saw: return "saw";
        case Aggregator::ahp: return "ahp";
        case Aggregator::mew: return "mew";
    }
    return "?";
}

SelectionSpec SelectionSpec::from_method(std::string_view method, CriterionConfig criterion) {
    SelectionSpec spec;
    spec.criterion = std::move(criterion);
    if (method == "saw" || method == "ahp" || method == "mew") {
        spec.normalization = NormalizationMethod::maxnorm;
        spec.aggregator = method == "saw" ? Aggregator::saw : method == "ahp" ? Aggregator::ahp : Aggregator::mew;
        return spec;
    }
    spec.normalization = parse_normalization(method);
    if (spec.normalization == NormalizationMethod::ccdf) {
        throw Error(ErrorCode::usage, "invalid_method",
                    "ccdf is a higher-is-better reporting transform and cannot drive a selection; use rank");
    }
    return spec;
}

std::string SelectionSpec::method_name() const {
    switch (aggregator) {
        case Aggregator::saw:
        case Aggregator::ahp:
        case Aggregator::mew: return std::string(to_string(aggregator));
        case Aggregator::weighted_pnorm: return "pnorm-" + std::string(to_string(normalization));
        case Aggregator::copa: break;
    }
    return std::string(to_string(normalization));
}

Evaluator::Evaluator(const Population& population, const SelectionSpec& spec)
    : population_(&population), spec_(spec), front_(pareto_mask(population)) {
    switch (spec.aggregator) {
        case Aggregator::copa:
        case Aggregator::weighted_pnorm:
            normalized_ = normalize(population, spec.normalization, spec.refs);
            break;
        case Aggregator::saw:
        case Aggregator::mew:
            normalized_ = baseline_normalize(population, NormalizationMethod::maxnorm);
            break;
        case Aggregator::ahp:
            normalized_ = NormalizedMatrix{ahp_priorities(population), NormalizationMethod::maxnorm, {}};
            break;
    }
    if (!spec.piecewise.empty()) {
        for (const auto& rule : spec.piecewise) {
            if (rule.config.weights.size() != population.num_objectives())
                throw Error(ErrorCode::usage, "length_mismatch", "piecewise rule weights do not match objective count");
        }
    }
}

double Evaluator::score(std::size_t row, const CriterionConfig& config) const {
    const auto u = normalized_.values.row(row);
    switch (spec_.aggregator) {
        case Aggregator::copa:
            if (!spec_.piecewise.empty())
                return piecewise_criterion(u, population_->row(row), spec_.piecewise, population_->objectives());
            return copa_norm(u, config);
        case Aggregator::weighted_pnorm: return standard_weighted_pnorm(u, config);
        case Aggregator::saw:
        case Aggregator::ahp: {
            double s = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k) s += config.weights[k] * u[k];
            return s;
        }
        case Aggregator::mew: {
            double s = 1.0;
            for (std::size_t k = 0; k < u.size(); ++k) s *= std::pow(u[k], config.weights[k]);
            return s;
        }
    }
    return 0.0;
}

double Evaluator::tiebreak(std::size_t row, const CriterionConfig& config) const {
    return copa_norm(normalized_.values.row(row), tiebreak_config(config));
}

std::vector<bool> Evaluator::feasible(const std::vector<ConstraintRule>& constraints) const {
    std::vector<bool> mask(population_->size(), true);
    for (const auto& c : constraints) {
        const auto k = population_->objective_index(c.objective_name);
        if (!k) {
            throw Error(ErrorCode::usage, "unknown_objective",
                        "constraint references unknown objective '" + c.objective_name + "'");
        }
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (!c.holds(population_->scores()(i, *k))) mask[i] = false;
    }
    return mask;
}

SelectionResult Evaluator::select(const CriterionConfig& config, const std::vector<ConstraintRule>& constraints) const {
    return select(config, feasible(constraints), constraints);
}

SelectionResult Evaluator::select(const CriterionConfig& config, const std::vector<bool>& feasible_mask,
                                  const std::vector<ConstraintRule>& constraints) const {
    if (config.weights.size() != population_->num_objectives()) {
        throw Error(ErrorCode::usage, "length_mismatch",
                    std::to_string(config.weights.size()) + " weights for " +
                        std::to_string(population_->num_objectives()) + " objectives");
    }
    std::optional<std::size_t> best;
    double best_score = std::numeric_limits<double>::infinity();
    double best_tiebreak = std::numeric_limits<double>::infinity();
    bool tied = false;

    for (std::size_t i = 0; i < population_->size(); ++i) {
        if (!feasible_mask[i]) continue;
        const double s = score(i, config);
        if (!best) {
            best = i;
            best_score = s;
            continue;
        }
        if (nearly_equal(s, best_score)) {
            tied = true;
            const double t = tiebreak(i, config);
            if (std::isinf(best_tiebreak)) best_tiebreak = tiebreak(*best, config);
            if (t < best_tiebreak && !nearly_equal(t, best_tiebreak)) {
                best = i;
                best_score = std::min(best_score, s);
                best_tiebreak = t;
            }
        } else if (s < best_score) {
            best = i;
            best_score = s;
            best_tiebreak = std::numeric_limits<double>::infinity();
            tied = false;
        }
    }
    if (!best) {
        throw Error(ErrorCode::infeasible, "no_feasible_model",
                    "no feasible model: every model violates at least one of [" + join_constraints(constraints) + "]");
    }

    SelectionResult r;
    r.model_index = *best;
    r.model_id = population_->model_ids()[*best];
    r.criterion_value = score(*best, config);
    const auto raw = population_->row(*best);
    r.raw_vector.assign(raw.begin(), raw.end());
    const auto u = normalized_.values.row(*best);
    r.normalized_vector.assign(u.begin(), u.end());
    r.is_pareto_optimal = front_[*best];
    r.tie_broken = tied;
    return r;
}

SelectionResult select_best(const Population& population, const SelectionSpec& spec,
                            const std::vector<ConstraintRule>& constraints) {
    const Evaluator evaluator(population, spec);
    return evaluator.select(spec.criterion, constraints);
}

std::vector<double> AlphaMapping::weights(double alpha, std::size_t num_objectives) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::usage, "invalid_alpha", "alpha must lie in [0, 1]");
    if (focus_objective >= num_objectives)
        throw Error(ErrorCode::usage, "invalid_focus", "focus objective index out of range");
    if (num_objectives == 1) return {1.0};
    std::vector<double> w(num_objectives, (1.0 - alpha) / static_cast<double>(num_objectives - 1));
    w[focus_objective] = alpha;
    return w;
}

SweepResult sweep_alpha(const Population& population, const SelectionSpec& spec, std::size_t grid_size,
                        const AlphaMapping& mapping, const std::vector<ConstraintRule>& constraints) {
    if (grid_size < 2) throw Error(ErrorCode::usage, "invalid_grid", "sweep grid needs at least 2 points");
    const Evaluator evaluator(population, spec);
    const auto mask = evaluator.feasible(constraints);
    const auto k_count = population.num_objectives();
    const auto step = 1.0 / static_cast<double>(grid_size - 1);

    SweepResult out;
    out.grid_size = grid_size;
    out.p = spec.criterion.p;
    out.method = spec.method_name();
    out.alphas.resize(grid_size);
    out.grid_selection.resize(grid_size);

    auto config_at = [&](double alpha) {
        return CriterionConfig{spec.criterion.p, mapping.weights(alpha, k_count), false};
    };

    for (std::size_t g = 0; g < grid_size; ++g) {
        out.alphas[g] = g + 1 == grid_size ? 1.0 : static_cast<double>(g) * step;
        out.grid_selection[g] = evaluator.select(config_at(out.alphas[g]), mask, constraints).model_index;
    }

    std::size_t start = 0;
    while (start < grid_size) {
        std::size_t end = start;
        while (end + 1 < grid_size && out.grid_selection[end + 1] == out.grid_selection[start]) ++end;

        SweepEntry e;
        e.lo = start == 0 ? 0.0 : (out.alphas[start - 1] + out.alphas[start]) / 2.0;
        e.hi = end + 1 == grid_size ? 1.0 : (out.alphas[end] + out.alphas[end + 1]) / 2.0;
        e.representative_alpha = (e.lo + e.hi) / 2.0;
        e.grid_points = end - start + 1;

        std::size_t nearest = start;
        for (std::size_t g = start; g <= end; ++g) {
            if (std::abs(out.alphas[g] - e.representative_alpha) < std::abs(out.alphas[nearest] - e.representative_alpha))
                nearest = g;
        }
        e.selection = evaluator.select(config_at(out.alphas[nearest]), mask, constraints);
        out.entries.push_back(std::move(e));
        start = end + 1;
    }
    return out;
}

namespace {

std::string after_prefix(const std::string& label, std::string_view prefix) {
    return label.substr(prefix.size());
}

std::vector<double> evaluate_column(const Population& population, const std::string& label,
                                    const std::vector<double>& weights, const NormalizedMatrix& ranks) {
    const auto n = population.size();
    std::vector<double> out(n);
    if (label.rfind("copa:p=", 0) == 0 || label.rfind("pnorm:p=", 0) == 0) {
        const bool is_copa = label[0] == 'c';
        const auto p = Exponent::parse(after_prefix(label, is_copa ? "copa:p=" : "pnorm:p="));
        const CriterionConfig config{p, weights, false};
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = is_copa ? copa_norm(ranks.values.row(i), config) : standard_weighted_pnorm(ranks.values.row(i), config);
        }
        return out;
    }
    if (label == "delta-mean") {
        const auto delta = baseline_normalize(population, NormalizationMethod::delta);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = delta.values.row(i);
            out[i] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
        }
        return out;
    }
    if (label.rfind("raw:", 0) == 0) {
        const auto name = after_prefix(label, "raw:");
        const auto k = population.objective_index(name);
        if (!k) throw Error(ErrorCode::usage, "unknown_objective", "unknown objective '" + name + "'");
        const double sign = population.objectives()[*k].direction == Direction::minimize ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) out[i] = sign * population.scores()(i, *k);
        return out;
    }
    if (label == "saw") return saw_scores(population, weights);
    if (label == "mew") return mew_scores(population, weights);
    if (label == "ahp") return ahp_scores(population, weights);
    throw Error(ErrorCode::usage, "invalid_criterion", "unknown ranking criterion '" + label + "'");
}

}  // namespace

RankTable rank_methods(const Population& population, const std::vector<std::string>& criteria,
                       std::optional<std::vector<double>> weights) {
    if (criteria.empty()) throw Error(ErrorCode::usage, "invalid_criterion", "rank table needs at least one criterion");
    const auto n = population.size();
    const auto config = weights ? CriterionConfig::make(Exponent(8.0), std::move(*weights))
                                : CriterionConfig::uniform(Exponent(8.0), population.num_objectives());
    if (config.weights.size() != population.num_objectives()) {
        throw Error(ErrorCode::usage, "length_mismatch", "rank weights do not match objective count");
    }
    const auto ranks = rank_transform(population);

    std::vector<double> secondary(n);
    for (std::size_t i = 0; i < n; ++i) secondary[i] = copa_norm(ranks.values.row(i), config);

    RankTable table;
    table.model_ids = population.model_ids();
    table.criteria = criteria;
    table.values.assign(n, std::vector<double>(criteria.size()));
    table.ranks.assign(n, std::vector<int>(criteria.size()));

    for (std::size_t c = 0; c < criteria.size(); ++c) {
        std::vector<double> column;
        try {
            column = evaluate_column(population, criteria[c], config.weights, ranks);
        } catch (const Error& e) {
            throw Error(e.code(), e.key(), "criterion column '" + criteria[c] + "': " + e.what());
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (!nearly_equal(column[a], column[b])) return column[a] < column[b];
            if (!nearly_equal(secondary[a], secondary[b])) return secondary[a] < secondary[b];
            return a < b;
        });
        for (std::size_t pos = 0; pos < n; ++pos) {
            table.ranks[order[pos]][c] = static_cast<int>(pos + 1);
            table.values[order[pos]][c] = column[order[pos]];
        }
    }
    return table;
}

}  // namespace copa
