#include "copa/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace copa {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void validate_specs(const std::vector<ObjectiveSpec>& specs) {
    if (specs.empty()) throw Error(ErrorCode::data, "no_objectives", "population needs at least one objective");
    std::unordered_set<std::string> seen;
    for (const auto& spec : specs) {
        if (spec.name.empty()) throw Error(ErrorCode::data, "empty_objective_name", "objective name must be non-empty");
        if (!seen.insert(spec.name).second)
            throw Error(ErrorCode::data, "duplicate_objective", "duplicate objective name '" + spec.name + "'");
    }
}

void validate_ids(const std::vector<std::string>& ids) {
    if (ids.empty()) throw Error(ErrorCode::data, "empty_population", "population needs at least one model");
    std::unordered_set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw Error(ErrorCode::data, "duplicate_model", "duplicate model id '" + id + "'");
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::minimize ? "minimize" : "maximize"; }

Direction parse_direction(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "minimize" || t == "min") return Direction::minimize;
    if (t == "maximize" || t == "max") return Direction::maximize;
    throw Error(ErrorCode::usage, "invalid_direction", "unknown direction '" + std::string(text) + "'");
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

std::optional<std::size_t> Population::objective_index(std::string_view name) const {
    for (std::size_t k = 0; k < objectives_.size(); ++k)
        if (objectives_[k].name == name) return k;
    return std::nullopt;
}

std::optional<std::size_t> Population::model_index(std::string_view id) const {
    for (std::size_t i = 0; i < model_ids_.size(); ++i)
        if (model_ids_[i] == id) return i;
    return std::nullopt;
}

bool operator==(const Population& a, const Population& b) {
    if (a.model_ids_ != b.model_ids_ || a.scores_ != b.scores_) return false;
    if (a.objectives_.size() != b.objectives_.size()) return false;
    for (std::size_t k = 0; k < a.objectives_.size(); ++k) {
        const auto& x = a.objectives_[k];
        const auto& y = b.objectives_[k];
        if (x.name != y.name || x.direction != y.direction || x.display_unit != y.display_unit) return false;
    }
    return true;
}

Population build_population(std::vector<std::string> model_ids, std::vector<ObjectiveSpec> specs,
                            const std::vector<std::vector<double>>& scores) {
    if (scores.size() != model_ids.size()) {
        throw Error(ErrorCode::data, "dimension_mismatch",
                    "dimension mismatch: " + std::to_string(model_ids.size()) + " model ids but " +
                        std::to_string(scores.size()) + " score rows");
    }
    Matrix m(scores.size(), specs.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].size() != specs.size()) {
            throw Error(ErrorCode::data, "dimension_mismatch",
                        "dimension mismatch at row " + std::to_string(i + 1) + ": expected " +
                            std::to_string(specs.size()) + " scores, got " + std::to_string(scores[i].size()));
        }
        std::copy(scores[i].begin(), scores[i].end(), m.row(i).begin());
    }
    return build_population(std::move(model_ids), std::move(specs), std::move(m));
}

Population build_population(std::vector<std::string> model_ids, std::vector<ObjectiveSpec> specs, Matrix scores) {
    validate_specs(specs);
    validate_ids(model_ids);
    if (scores.rows() != model_ids.size() || scores.cols() != specs.size()) {
        throw Error(ErrorCode::data, "dimension_mismatch",
                    "dimension mismatch: score matrix is " + std::to_string(scores.rows()) + "x" +
                        std::to_string(scores.cols()) + ", expected " + std::to_string(model_ids.size()) + "x" +
                        std::to_string(specs.size()));
    }
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        for (std::size_t k = 0; k < scores.cols(); ++k) {
            if (!std::isfinite(scores(i, k))) {
                throw Error(ErrorCode::data, "non_finite_score",
                            "non-finite score at row " + std::to_string(i + 1) + ", column '" + specs[k].name + "'");
            }
        }
    }
    Population p;
    p.model_ids_ = std::move(model_ids);
    p.objectives_ = std::move(specs);
    p.scores_ = std::move(scores);
    return p;
}

IdealNadir ideal_nadir(const Population& population) {
    const auto k_count = population.num_objectives();
    IdealNadir out{std::vector<double>(k_count), std::vector<double>(k_count)};
    for (std::size_t k = 0; k < k_count; ++k) {
        const auto col = population.column(k);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        if (population.objectives()[k].direction == Direction::minimize) {
            out.ideal[k] = *lo;
            out.nadir[k] = *hi;
        } else {
            out.ideal[k] = *hi;
            out.nadir[k] = *lo;
        }
    }
    return out;
}

std::string_view to_string(NormalizationMethod m) {
    switch (m) {
        case NormalizationMethod::rank: return "rank";
        case NormalizationMethod::delta: return "delta";
        case NormalizationMethod::minmax: return "minmax";
        case NormalizationMethod::maxnorm: return "maxnorm";
        case NormalizationMethod::ccdf: return "ccdf";
        case NormalizationMethod::raw: return "raw";
    }
    return "?";
}

NormalizationMethod parse_normalization(std::string_view text) {
    const auto t = lower(trim(text));
    for (auto m : {NormalizationMethod::rank, NormalizationMethod::delta, NormalizationMethod::minmax,
                   NormalizationMethod::maxnorm, NormalizationMethod::ccdf, NormalizationMethod::raw}) {
        if (t == to_string(m)) return m;
    }
    throw Error(ErrorCode::usage, "invalid_method", "unknown normalization method '" + std::string(text) + "'");
}

Exponent::Exponent(double p) : p_(p), infinite_(false) {
    if (std::isinf(p) && p > 0) {
        infinite_ = true;
        p_ = 0.0;
        return;
    }
    if (!(p >= 1.0)) {
        std::ostringstream os;
        os << "exponent p must satisfy p >= 1, got " << p;
        throw Error(ErrorCode::usage, "invalid_p", os.str());
    }
}

double Exponent::value() const noexcept { return infinite_ ? std::numeric_limits<double>::infinity() : p_; }

std::string Exponent::to_string() const {
    if (infinite_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << p_;
    return os.str();
}

Exponent Exponent::parse(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "inf" || t == "infinity" || t == "∞") return infinity();
    const auto v = parse_double(t);
    if (!v) throw Error(ErrorCode::usage, "invalid_p", "cannot parse exponent '" + std::string(text) + "'");
    return Exponent(*v);
}

CriterionConfig CriterionConfig::make(Exponent p, std::vector<double> weights) {
    if (weights.empty()) throw Error(ErrorCode::usage, "invalid_weights", "weight vector is empty");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw Error(ErrorCode::usage, "invalid_weights", "weights must be finite and non-negative");
        sum += w;
    }
    if (sum <= 0.0) throw Error(ErrorCode::usage, "invalid_weights", "weights sum to zero");
    CriterionConfig c{p, std::move(weights), false};
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        for (double& w : c.weights) w /= sum;
        c.weights_renormalized = true;
    }
    return c;
}

CriterionConfig CriterionConfig::uniform(Exponent p, std::size_t k) {
    return CriterionConfig{p, std::vector<double>(k, 1.0 / static_cast<double>(k)), false};
}

std::string_view to_string(Comparator c) {
    switch (c) {
        case Comparator::less_equal: return "<=";
        case Comparator::greater_equal: return ">=";
        case Comparator::less: return "<";
        case Comparator::greater: return ">";
    }
    return "?";
}

bool ConstraintRule::holds(double value) const noexcept {
    switch (comparator) {
        case Comparator::less_equal: return value <= threshold;
        case Comparator::greater_equal: return value >= threshold;
        case Comparator::less: return value < threshold;
        case Comparator::greater: return value > threshold;
    }
    return false;
}

std::string ConstraintRule::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << objective_name << copa::to_string(comparator) << threshold;
    return os.str();
}

ConstraintRule ConstraintRule::parse(std::string_view text) {
    const auto pos = text.find_first_of("<>");
    if (pos == std::string_view::npos || pos == 0) {
        throw Error(ErrorCode::usage, "invalid_constraint",
                    "constraint must look like name<=value, got '" + std::string(text) + "'");
    }
    ConstraintRule rule;
    rule.objective_name = std::string(trim(text.substr(0, pos)));
    const bool strict = !(pos + 1 < text.size() && text[pos + 1] == '=');
    if (text[pos] == '<')
        rule.comparator = strict ? Comparator::less : Comparator::less_equal;
    else
        rule.comparator = strict ? Comparator::greater : Comparator::greater_equal;
    const auto rest = text.substr(pos + (strict ? 1 : 2));
    const auto v = parse_double(trim(rest));
    if (rule.objective_name.empty() || !v || !std::isfinite(*v)) {
        throw Error(ErrorCode::usage, "invalid_constraint",
                    "constraint must look like name<=value, got '" + std::string(text) + "'");
    }
    rule.threshold = *v;
    return rule;
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace copa
