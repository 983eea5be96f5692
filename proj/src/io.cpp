#include "copa/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "copa/pareto.hpp"

namespace copa {

using nlohmann::json;

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

bool is_missing(std::string_view cell) {
    const auto t = lower(trim(cell));
    return t.empty() || t == "na" || t == "n/a" || t == "nan" || t == "null" || t == "none";
}

// RFC 4180 records: quoted fields may hold commas, doubled quotes, newlines.
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;

    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !field.empty()) {
                    row.push_back(std::move(field));
                    rows.push_back(std::move(row));
                }
                row.clear();
                field.clear();
                any = false;
                break;
            default: field += c; any = true;
        }
    }
    if (quoted) throw Error(ErrorCode::data, "csv_unterminated_quote", "unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_significant(double v, int digits = 6) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(digits) << v;
    return os.str();
}

json exponent_json(const Exponent& p) {
    if (p.is_infinite()) return "inf";
    return p.value();
}

Exponent exponent_from_json(const json& v) {
    if (v.is_string()) return Exponent::parse(v.get<std::string>());
    if (v.is_number()) return Exponent(v.get<double>());
    throw Error(ErrorCode::usage, "invalid_p", "p must be a number or \"inf\"");
}

std::vector<std::string> objective_names(const Population& population) {
    std::vector<std::string> names;
    for (const auto& o : population.objectives()) names.push_back(o.name);
    return names;
}

json selection_json(const SelectionResult& r) {
    return json{{"model_index", r.model_index},         {"model_id", r.model_id},
                {"criterion_value", r.criterion_value}, {"raw_vector", r.raw_vector},
                {"normalized_vector", r.normalized_vector}, {"is_pareto_optimal", r.is_pareto_optimal},
                {"tie_broken", r.tie_broken}};
}

json constraints_json(const std::vector<ConstraintRule>& constraints) {
    json out = json::array();
    for (const auto& c : constraints) out.push_back(c.to_string());
    return out;
}

json population_json(const Population& p) {
    json objectives = json::array();
    for (const auto& o : p.objectives()) {
        json spec{{"name", o.name}, {"direction", std::string(to_string(o.direction))}};
        if (o.display_unit) spec["unit"] = *o.display_unit;
        objectives.push_back(std::move(spec));
    }
    json scores = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto row = p.row(i);
        scores.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return json{{"kind", "population"}, {"model_ids", p.model_ids()}, {"objectives", objectives}, {"scores", scores}};
}

struct JsonVisitor {
    json operator()(const SelectionReport& r) const {
        json doc = selection_json(r.result);
        doc["kind"] = "selection";
        doc["objectives"] = r.objectives;
        doc["method"] = r.method;
        doc["p"] = exponent_json(r.p);
        doc["weights"] = r.weights;
        doc["constraints"] = constraints_json(r.constraints);
        doc["top_percent"] = r.top_percent;
        return doc;
    }
    json operator()(const SweepReport& r) const {
        json intervals = json::array();
        for (const auto& e : r.sweep.entries) {
            json item = selection_json(e.selection);
            item["lo"] = e.lo;
            item["hi"] = e.hi;
            item["alpha"] = e.representative_alpha;
            item["grid_points"] = e.grid_points;
            intervals.push_back(std::move(item));
        }
        return json{{"kind", "sweep"},         {"objectives", r.objectives},   {"focus", r.focus},
                    {"method", r.sweep.method}, {"p", exponent_json(r.sweep.p)}, {"grid_size", r.sweep.grid_size},
                    {"intervals", intervals}};
    }
    json operator()(const RankTable& t) const {
        json models = json::array();
        for (std::size_t i = 0; i < t.model_ids.size(); ++i)
            models.push_back(json{{"model_id", t.model_ids[i]}, {"ranks", t.ranks[i]}, {"values", t.values[i]}});
        return json{{"kind", "rank_table"}, {"criteria", t.criteria}, {"models", models}};
    }
    json operator()(const FrontReport& f) const {
        json models = json::array();
        for (std::size_t i = 0; i < f.indices.size(); ++i) {
            models.push_back(json{{"model_index", f.indices[i]},
                                  {"model_id", f.model_ids[i]},
                                  {"raw_vector", f.raw[i]},
                                  {"cdf_vector", f.cdf[i]}});
        }
        return json{{"kind", "front"}, {"objectives", f.objectives}, {"models", models}};
    }
    json operator()(const NormalizedReport& n) const {
        json values = json::array();
        for (std::size_t i = 0; i < n.matrix.values.rows(); ++i) {
            const auto row = n.matrix.values.row(i);
            values.push_back(std::vector<double>(row.begin(), row.end()));
        }
        return json{{"kind", "normalized"},
                    {"method", std::string(to_string(n.matrix.method))},
                    {"objectives", n.objectives},
                    {"model_ids", n.model_ids},
                    {"values", values},
                    {"constant_columns", n.matrix.constant_columns}};
    }
    json operator()(const Population& p) const { return population_json(p); }
};

// Aligned text table: first column left-aligned, the rest right-aligned.
std::string layout(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());

    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c > 0) os << "  ";
            if (c == 0)
                os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
            else
                os << std::right << std::setw(static_cast<int>(width[c])) << r[c];
        }
        os << '\n';
    };
    emit(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    emit(rule);
    for (const auto& r : rows) emit(r);
    return os.str();
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_significant(v[i]);
    }
    return out;
}

struct TableVisitor {
    std::string operator()(const SelectionReport& r) const {
        std::ostringstream os;
        os << "selected " << r.result.model_id << " (row " << r.result.model_index << ")  method " << r.method
           << "  p " << r.p.to_string() << "  criterion " << format_significant(r.result.criterion_value)
           << (r.result.is_pareto_optimal ? "  pareto-optimal" : "  dominated")
           << (r.result.tie_broken ? "  tie-broken" : "") << '\n';
        if (!r.constraints.empty()) {
            os << "constraints:";
            for (const auto& c : r.constraints) os << ' ' << c.to_string();
            os << '\n';
        }
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < r.objectives.size(); ++k) {
            rows.push_back({r.objectives[k], format_significant(r.weights[k]), format_significant(r.result.raw_vector[k]),
                            format_significant(r.result.normalized_vector[k]), format_significant(r.top_percent[k])});
        }
        os << layout({"objective", "weight", "raw", "normalized", "top-%"}, rows);
        return os.str();
    }
    std::string operator()(const SweepReport& r) const {
        std::ostringstream os;
        os << "sweep over alpha on '" << r.focus << "'  method " << r.sweep.method << "  p " << r.sweep.p.to_string()
           << "  grid " << r.sweep.grid_size << '\n';
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : r.sweep.entries) {
            rows.push_back({format_significant(e.lo), format_significant(e.hi), std::to_string(e.grid_points),
                            e.selection.model_id, join_numbers(e.selection.raw_vector),
                            join_numbers(e.selection.normalized_vector)});
        }
        os << layout({"alpha_lo", "alpha_hi", "points", "model", "raw", "normalized"}, rows);
        return os.str();
    }
    std::string operator()(const RankTable& t) const {
        std::vector<std::string> header{"model"};
        header.insert(header.end(), t.criteria.begin(), t.criteria.end());
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < t.model_ids.size(); ++i) {
            std::vector<std::string> r{t.model_ids[i]};
            for (int rank : t.ranks[i]) r.push_back(std::to_string(rank));
            rows.push_back(std::move(r));
        }
        return layout(header, rows);
    }
    std::string operator()(const FrontReport& f) const {
        std::vector<std::string> header{"model"};
        for (const auto& o : f.objectives) header.push_back(o);
        for (const auto& o : f.objectives) header.push_back("cdf:" + o);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < f.indices.size(); ++i) {
            std::vector<std::string> r{f.model_ids[i]};
            for (double v : f.raw[i]) r.push_back(format_significant(v));
            for (double v : f.cdf[i]) r.push_back(format_significant(v));
            rows.push_back(std::move(r));
        }
        return layout(header, rows);
    }
    std::string operator()(const NormalizedReport& n) const {
        std::vector<std::string> header{"model"};
        header.insert(header.end(), n.objectives.begin(), n.objectives.end());
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < n.model_ids.size(); ++i) {
            std::vector<std::string> r{n.model_ids[i]};
            for (double v : n.matrix.values.row(i)) r.push_back(format_significant(v));
            rows.push_back(std::move(r));
        }
        std::string out = layout(header, rows);
        for (auto k : n.matrix.constant_columns) out += "warning: column '" + n.objectives[k] + "' is constant\n";
        return out;
    }
    std::string operator()(const Population& p) const {
        std::vector<std::string> header{"model"};
        for (const auto& o : p.objectives()) header.push_back(o.name);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::vector<std::string> r{p.model_ids()[i]};
            for (double v : p.row(i)) r.push_back(format_significant(v));
            rows.push_back(std::move(r));
        }
        return layout(header, rows);
    }
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

}  // namespace

LoadReport parse_population_csv(std::string_view text, const LoadOptions& options) {
    const auto records = split_csv(text);
    if (records.empty()) throw Error(ErrorCode::data, "empty_file", "input is empty (a header row is required)");

    const auto& header = records.front();
    const bool has_id = !header.empty() && lower(trim(header.front())) == "model";
    const std::size_t first_value = has_id ? 1 : 0;

    std::vector<ObjectiveSpec> specs;
    std::vector<std::size_t> source_columns;
    std::vector<std::string> warnings;
    std::size_t dropped = 0;

    if (options.objectives.empty()) {
        for (std::size_t c = first_value; c < header.size(); ++c) {
            specs.push_back({std::string(trim(header[c])), Direction::minimize, {}});
            source_columns.push_back(c);
        }
    } else {
        for (const auto& spec : options.objectives) {
            const auto it = std::find_if(header.begin() + static_cast<std::ptrdiff_t>(first_value), header.end(),
                                         [&](const std::string& h) { return trim(h) == spec.name; });
            if (it == header.end())
                throw Error(ErrorCode::data, "missing_column", "declared objective column '" + spec.name + "' not found");
            specs.push_back(spec);
            source_columns.push_back(static_cast<std::size_t>(it - header.begin()));
        }
        for (std::size_t c = first_value; c < header.size(); ++c) {
            if (std::find(source_columns.begin(), source_columns.end(), c) == source_columns.end())
                warnings.push_back("ignoring undeclared column '" + std::string(trim(header[c])) + "'");
        }
    }

    std::vector<std::string> ids;
    std::vector<double> values;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const auto line = std::to_string(r + 1);
        if (rec.size() != header.size()) {
            throw Error(ErrorCode::data, "ragged_row",
                        "row " + line + " has " + std::to_string(rec.size()) + " cells, header has " +
                            std::to_string(header.size()));
        }
        std::vector<double> row;
        bool incomplete = false;
        for (std::size_t k = 0; k < source_columns.size(); ++k) {
            const auto& cell = rec[source_columns[k]];
            if (is_missing(cell)) {
                if (!options.drop_incomplete) {
                    throw Error(ErrorCode::data, "missing_value",
                                "missing value '" + cell + "' at line " + line + ", column '" + specs[k].name + "'");
                }
                incomplete = true;
                break;
            }
            const auto v = parse_double(trim(cell));
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::data, "parse_error",
                            "cannot parse number '" + cell + "' at line " + line + ", column '" + specs[k].name + "'");
            }
            row.push_back(*v);
        }
        if (incomplete) {
            ++dropped;
            continue;
        }
        ids.push_back(has_id ? std::string(trim(rec.front())) : std::to_string(r));
        values.insert(values.end(), row.begin(), row.end());
    }
    if (ids.empty()) throw Error(ErrorCode::data, "empty_file", "input has a header but no usable data rows");
    if (dropped > 0) warnings.push_back("dropped " + std::to_string(dropped) + " incomplete row(s)");

    Matrix m(ids.size(), specs.size());
    std::copy(values.begin(), values.end(), m.row(0).begin());
    return LoadReport{build_population(std::move(ids), std::move(specs), std::move(m)), dropped, std::move(warnings)};
}

LoadReport load_population_csv(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::data, "unreadable_file", "cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_population_csv(buf.str(), options);
}

std::string population_to_csv(const Population& population) {
    std::string out = "model";
    for (const auto& o : population.objectives()) out += "," + o.name;
    out += '\n';
    for (std::size_t i = 0; i < population.size(); ++i) {
        out += population.model_ids()[i];
        for (double v : population.row(i)) out += "," + format_shortest(v);
        out += '\n';
    }
    return out;
}

OutputFormat parse_format(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "table") return OutputFormat::table;
    if (t == "structured" || t == "json") return OutputFormat::structured;
    throw Error(ErrorCode::usage, "invalid_format", "unknown output format '" + std::string(text) + "'");
}

RunConfig RunConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::usage, "invalid_config", "config must be a JSON object");
    RunConfig c;
    try {
        if (doc.contains("objectives")) {
            for (const auto& o : doc.at("objectives")) {
                ObjectiveConfig oc;
                oc.spec.name = o.at("name").get<std::string>();
                if (o.contains("direction")) oc.spec.direction = parse_direction(o.at("direction").get<std::string>());
                if (o.contains("unit")) oc.spec.display_unit = o.at("unit").get<std::string>();
                if (o.contains("ideal")) oc.ideal = o.at("ideal").get<double>();
                if (o.contains("nadir")) oc.nadir = o.at("nadir").get<double>();
                c.objectives.push_back(std::move(oc));
            }
        }
        if (doc.contains("method")) c.method = doc.at("method").get<std::string>();
        if (doc.contains("p")) c.p = exponent_from_json(doc.at("p"));
        if (doc.contains("weights")) c.weights = doc.at("weights").get<std::vector<double>>();
        if (doc.contains("alpha")) c.alpha = doc.at("alpha").get<double>();
        if (doc.contains("focus")) c.focus = doc.at("focus").get<std::string>();
        if (doc.contains("constraints"))
            for (const auto& s : doc.at("constraints")) c.constraints.push_back(ConstraintRule::parse(s.get<std::string>()));
        if (doc.contains("grid")) c.grid = doc.at("grid").get<std::size_t>();
        if (doc.contains("format")) c.format = parse_format(doc.at("format").get<std::string>());
        if (doc.contains("drop_incomplete")) c.drop_incomplete = doc.at("drop_incomplete").get<bool>();
        if (doc.contains("criteria")) c.criteria = doc.at("criteria").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::usage, "invalid_config", std::string("malformed config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::usage, "unreadable_config", "cannot read config '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::usage, "invalid_config", "config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

LoadOptions RunConfig::load_options() const {
    LoadOptions o;
    for (const auto& oc : objectives) o.objectives.push_back(oc.spec);
    o.drop_incomplete = drop_incomplete;
    return o;
}

ResolvedRun resolve(const RunConfig& config, const Population& population) {
    const auto k_count = population.num_objectives();
    ResolvedRun run;

    for (const auto& c : config.constraints) {
        if (!population.objective_index(c.objective_name))
            throw Error(ErrorCode::usage, "unknown_objective", "constraint references unknown objective '" + c.objective_name + "'");
    }
    run.constraints = config.constraints;

    if (config.focus) {
        const auto k = population.objective_index(*config.focus);
        if (!k) throw Error(ErrorCode::usage, "unknown_objective", "focus objective '" + *config.focus + "' not in data");
        run.mapping.focus_objective = *k;
    }

    std::vector<double> weights;
    if (config.alpha) {
        weights = run.mapping.weights(*config.alpha, k_count);
    } else if (config.weights) {
        if (config.weights->size() != k_count) {
            throw Error(ErrorCode::usage, "length_mismatch",
                        std::to_string(config.weights->size()) + " weights for " + std::to_string(k_count) + " objectives");
        }
        weights = *config.weights;
    } else {
        weights.assign(k_count, 1.0 / static_cast<double>(k_count));
    }
    run.spec = SelectionSpec::from_method(config.method, CriterionConfig::make(config.p, std::move(weights)));

    std::vector<double> ideal = ideal_nadir(population).ideal;
    std::vector<double> nadir = ideal_nadir(population).nadir;
    bool has_ideal = false;
    bool has_nadir = false;
    for (const auto& oc : config.objectives) {
        if (!oc.ideal && !oc.nadir) continue;
        const auto k = population.objective_index(oc.spec.name);
        if (!k) throw Error(ErrorCode::usage, "unknown_objective", "reference for unknown objective '" + oc.spec.name + "'");
        if (oc.ideal) {
            ideal[*k] = *oc.ideal;
            has_ideal = true;
        }
        if (oc.nadir) {
            nadir[*k] = *oc.nadir;
            has_nadir = true;
        }
    }
    if (has_ideal) run.spec.refs.ideal = std::move(ideal);
    if (has_nadir) run.spec.refs.nadir = std::move(nadir);
    return run;
}

SelectionReport make_selection_report(const Population& population, const SelectionSpec& spec,
                                      const SelectionResult& result, const std::vector<ConstraintRule>& constraints) {
    SelectionReport r;
    r.result = result;
    r.objectives = objective_names(population);
    r.method = spec.method_name();
    r.p = spec.criterion.p;
    r.weights = spec.criterion.weights;
    r.constraints = constraints;
    const auto ranks = rank_transform(population);
    for (double u : ranks.values.row(result.model_index)) r.top_percent.push_back(100.0 * u);
    return r;
}

FrontReport make_front_report(const Population& population) {
    FrontReport f;
    f.objectives = objective_names(population);
    f.indices = pareto_front(population);
    const auto ranks = rank_transform(population);
    for (auto i : f.indices) {
        f.model_ids.push_back(population.model_ids()[i]);
        const auto raw = population.row(i);
        f.raw.emplace_back(raw.begin(), raw.end());
        const auto u = ranks.values.row(i);
        f.cdf.emplace_back(u.begin(), u.end());
    }
    return f;
}

json to_json(const Report& report) { return std::visit(JsonVisitor{}, report); }

std::string render_table(const Report& report) { return std::visit(TableVisitor{}, report); }

std::string export_report(const Report& report, OutputFormat format) {
    if (format == OutputFormat::table) return render_table(report);
    return to_json(report).dump(2) + "\n";
}

void export_report(const Report& report, OutputFormat format, std::ostream& out) {
    out << export_report(report, format);
    out.flush();
    if (!out) throw Error(ErrorCode::data, "write_failed", "cannot write report to output");
}

Population population_from_json(const json& doc) {
    try {
        std::vector<ObjectiveSpec> specs;
        for (const auto& o : doc.at("objectives")) {
            ObjectiveSpec s{o.at("name").get<std::string>(), parse_direction(o.value("direction", "minimize")), {}};
            if (o.contains("unit")) s.display_unit = o.at("unit").get<std::string>();
            specs.push_back(std::move(s));
        }
        return build_population(doc.at("model_ids").get<std::vector<std::string>>(), std::move(specs),
                                doc.at("scores").get<std::vector<std::vector<double>>>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::data, "invalid_population", std::string("malformed population document: ") + e.what());
    }
}

Population generate_synthetic_front(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::usage, "invalid_size", "synthetic front needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::string> ids;
    Matrix scores(n, 2);
    const int width = static_cast<int>(std::to_string(n - 1).size());
    for (std::size_t i = 0; i < n; ++i) {
        const double y1 = 0.02 + 0.18 * uniform01(rng);
        scores(i, 0) = y1;
        scores(i, 1) = 0.25 * std::cos(39.0 * std::pow(y1, 0.85)) - std::log(y1) - 0.46;
        std::ostringstream id;
        id << 's' << std::setw(width) << std::setfill('0') << i;
        ids.push_back(id.str());
    }
    return build_population(std::move(ids), {{"y1", Direction::minimize, {}}, {"y2", Direction::minimize, {}}},
                            std::move(scores));
}

Population subsample(const Population& population, std::size_t n, std::uint64_t seed) {
    if (n == 0 || n > population.size())
        throw Error(ErrorCode::usage, "invalid_size", "subsample size must lie in [1, population size]");
    std::vector<std::size_t> idx(population.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(bounded(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());

    std::vector<std::string> ids;
    Matrix scores(n, population.num_objectives());
    for (std::size_t r = 0; r < n; ++r) {
        ids.push_back(population.model_ids()[idx[r]]);
        const auto src = population.row(idx[r]);
        std::copy(src.begin(), src.end(), scores.row(r).begin());
    }
    return build_population(std::move(ids), population.objectives(), std::move(scores));
}

}  // namespace copa
