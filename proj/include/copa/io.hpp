#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "copa/core.hpp"
#include "copa/normalize.hpp"
#include "copa/select.hpp"

namespace copa {

// ---------------------------------------------------------------- ingestion

struct LoadOptions {
    // Objectives to extract, matched to CSV headers by name. When empty,
    // every non-id column becomes a minimize objective.
    std::vector<ObjectiveSpec> objectives;
    // Drop rows with missing cells instead of failing.
    bool drop_incomplete = false;
};

struct LoadReport {
    Population population;
    std::size_t dropped_rows = 0;
    std::vector<std::string> warnings;
};

// Parses comma-delimited UTF-8 text with a mandatory header row. A first
// column headed "model" (any case) supplies model ids; otherwise ids are the
// 1-based data row numbers. Missing cells are empty or one of NA, N/A, NaN,
// null, none. Numbers use a dot decimal separator regardless of locale.
LoadReport parse_population_csv(std::string_view text, const LoadOptions& options = {});
LoadReport load_population_csv(const std::filesystem::path& path, const LoadOptions& options = {});

// Renders a population as CSV with shortest round-trip number formatting.
std::string population_to_csv(const Population& population);

// ------------------------------------------------------------ configuration

struct ObjectiveConfig {
    ObjectiveSpec spec;
    std::optional<double> ideal;
    std::optional<double> nadir;
};

enum class OutputFormat { table, structured };

OutputFormat parse_format(std::string_view text);

// Everything a run can be configured with; CLI flags override fields.
struct RunConfig {
    std::vector<ObjectiveConfig> objectives;
    std::string method = "rank";
    Exponent p = Exponent::infinity();
    std::optional<std::vector<double>> weights;
    std::optional<double> alpha;
    std::optional<std::string> focus;
    std::vector<ConstraintRule> constraints;
    std::size_t grid = 50;
    OutputFormat format = OutputFormat::table;
    bool drop_incomplete = false;
    std::vector<std::string> criteria;

    static RunConfig from_json(const nlohmann::json& doc);
    static RunConfig load(const std::filesystem::path& path);

    LoadOptions load_options() const;
};

// A RunConfig checked against a concrete population.
struct ResolvedRun {
    SelectionSpec spec;
    AlphaMapping mapping;
    std::vector<ConstraintRule> constraints;
};

// Validates every objective reference in `config` against `population` and
// builds the selection inputs. Weights come from `alpha` when set, then from
// `weights`, else uniform.
ResolvedRun resolve(const RunConfig& config, const Population& population);

// ------------------------------------------------------------------ reports

struct SelectionReport {
    SelectionResult result;
    std::vector<std::string> objectives;
    std::string method;
    Exponent p = Exponent::infinity();
    std::vector<double> weights;
    std::vector<ConstraintRule> constraints;
    // 100 * û of the selected model on the full-population rank transform.
    std::vector<double> top_percent;
};

SelectionReport make_selection_report(const Population& population, const SelectionSpec& spec,
                                      const SelectionResult& result,
                                      const std::vector<ConstraintRule>& constraints);

struct FrontReport {
    std::vector<std::string> objectives;
    std::vector<std::size_t> indices;
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> raw;
    std::vector<std::vector<double>> cdf;  // rank-transform coordinates
};

FrontReport make_front_report(const Population& population);

struct SweepReport {
    SweepResult sweep;
    std::vector<std::string> objectives;
    std::string focus;
};

struct NormalizedReport {
    NormalizedMatrix matrix;
    std::vector<std::string> objectives;
    std::vector<std::string> model_ids;
};

using Report = std::variant<SelectionReport, SweepReport, RankTable, FrontReport, NormalizedReport, Population>;

nlohmann::json to_json(const Report& report);
std::string render_table(const Report& report);

// Deterministic serialization. Structured output is pretty-printed JSON with
// sorted keys and shortest round-trip numbers; table output uses 6
// significant digits. Throws Error(data, "write_failed") on a bad stream.
void export_report(const Report& report, OutputFormat format, std::ostream& out);
std::string export_report(const Report& report, OutputFormat format);

Population population_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------- synthetic

// Samples y1 ~ U(0.02, 0.2) and sets
//   y2 = 0.25 cos(39 y1^0.85) - ln(y1) - 0.46.
// Uniform draws take the top 53 bits of std::mt19937_64(seed), so output is
// identical on every platform. Both objectives are minimized.
Population generate_synthetic_front(std::size_t n, std::uint64_t seed);

// Picks `n` distinct rows uniformly (partial Fisher-Yates on mt19937_64),
// keeping their original order.
Population subsample(const Population& population, std::size_t n, std::uint64_t seed);

}  // namespace copa
