#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace copa {

// Error categories double as CLI exit codes and map onto HTTP statuses.
enum class ErrorCode : int {
    usage = 1,       // bad flag, config, or request parameter
    data = 2,        // malformed or unusable input data
    infeasible = 3,  // constraints removed every model
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string key, const std::string& message)
        : std::runtime_error(message), code_(code), key_(std::move(key)) {}

    ErrorCode code() const noexcept { return code_; }
    // Stable machine-readable identifier, e.g. "dimension_mismatch".
    const std::string& key() const noexcept { return key_; }

private:
    ErrorCode code_;
    std::string key_;
};

enum class Direction { minimize, maximize };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

// True when `a` is strictly better than `b` under `d`.
constexpr bool strictly_better(double a, double b, Direction d) noexcept {
    return d == Direction::minimize ? a < b : a > b;
}

struct ObjectiveSpec {
    std::string name;
    Direction direction = Direction::minimize;
    std::optional<std::string> display_unit;
};

// Dense row-major matrix. Rows are models, columns are objectives.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Immutable snapshot of N models scored on K objectives. Scores are kept in
// their original units; directions are applied by consumers.
class Population {
public:
    std::size_t size() const noexcept { return scores_.rows(); }
    std::size_t num_objectives() const noexcept { return scores_.cols(); }

    const std::vector<std::string>& model_ids() const noexcept { return model_ids_; }
    const std::vector<ObjectiveSpec>& objectives() const noexcept { return objectives_; }
    const Matrix& scores() const noexcept { return scores_; }

    std::span<const double> row(std::size_t i) const { return scores_.row(i); }
    std::vector<double> column(std::size_t k) const { return scores_.column(k); }

    std::optional<std::size_t> objective_index(std::string_view name) const;
    std::optional<std::size_t> model_index(std::string_view id) const;

    friend Population build_population(std::vector<std::string> model_ids,
                                       std::vector<ObjectiveSpec> specs,
                                       const std::vector<std::vector<double>>& scores);
    friend Population build_population(std::vector<std::string> model_ids,
                                       std::vector<ObjectiveSpec> specs, Matrix scores);

    friend bool operator==(const Population& a, const Population& b);

private:
    Population() = default;

    std::vector<std::string> model_ids_;
    std::vector<ObjectiveSpec> objectives_;
    Matrix scores_;
};

// Validates and assembles a population. Throws Error(data) on dimension
// mismatch, non-finite scores, duplicate ids, or duplicate/empty names.
Population build_population(std::vector<std::string> model_ids, std::vector<ObjectiveSpec> specs,
                            const std::vector<std::vector<double>>& scores);
Population build_population(std::vector<std::string> model_ids, std::vector<ObjectiveSpec> specs,
                            Matrix scores);

struct IdealNadir {
    std::vector<double> ideal;
    std::vector<double> nadir;
};

// Componentwise best (ideal) and worst (nadir) values, direction-aware.
IdealNadir ideal_nadir(const Population& population);

enum class NormalizationMethod { rank, delta, minmax, maxnorm, ccdf, raw };

std::string_view to_string(NormalizationMethod m);
NormalizationMethod parse_normalization(std::string_view text);

struct NormalizedMatrix {
    Matrix values;
    NormalizationMethod method = NormalizationMethod::rank;
    // Columns that were constant under minmax and were mapped to zero.
    std::vector<std::size_t> constant_columns;
};

// Exponent of the p-norm; infinity is a distinct state rather than a large
// float so the Tchebycheff case is evaluated exactly.
class Exponent {
public:
    explicit Exponent(double p);
    static Exponent infinity() noexcept { return Exponent(); }

    bool is_infinite() const noexcept { return infinite_; }
    // Undefined (returns +inf) when is_infinite().
    double value() const noexcept;

    std::string to_string() const;
    static Exponent parse(std::string_view text);

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    Exponent() : p_(0.0), infinite_(true) {}
    double p_;
    bool infinite_;
};

inline constexpr double kWeightSumTolerance = 1e-9;

struct CriterionConfig {
    Exponent p = Exponent(1.0);
    std::vector<double> weights;
    // Set when the supplied weights did not sum to 1 and were rescaled.
    bool weights_renormalized = false;

    // Validates p >= 1 and non-negative weights; rescales to sum 1 when
    // the sum drifts beyond kWeightSumTolerance.
    static CriterionConfig make(Exponent p, std::vector<double> weights);
    static CriterionConfig uniform(Exponent p, std::size_t k);
};

enum class Comparator { less_equal, greater_equal, less, greater };

std::string_view to_string(Comparator c);

struct ConstraintRule {
    std::string objective_name;
    Comparator comparator = Comparator::less_equal;
    double threshold = 0.0;

    bool holds(double value) const noexcept;
    std::string to_string() const;

    // Parses "name<=value", "name>=value", "name<value", "name>value".
    static ConstraintRule parse(std::string_view text);
};

struct SelectionResult {
    std::size_t model_index = 0;
    std::string model_id;
    double criterion_value = 0.0;
    std::vector<double> raw_vector;
    std::vector<double> normalized_vector;
    bool is_pareto_optimal = false;
    // True when another feasible model had an equal criterion value.
    bool tie_broken = false;
};

// Locale-independent strict double parse of the whole string.
std::optional<double> parse_double(std::string_view text);

}  // namespace copa
