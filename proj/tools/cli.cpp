#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "copa/io.hpp"
#include "copa/normalize.hpp"
#include "copa/select.hpp"
#include "copa/service.hpp"

namespace copa::cli {

namespace {

struct Flags {
    std::string config;
    std::string input;
    std::string p;
    std::optional<double> alpha;
    std::optional<std::size_t> grid;
    std::string method;
    std::vector<std::string> constraints;
    std::string format;
    bool drop_incomplete = false;
    std::optional<std::uint64_t> seed;
    std::string weights;
    std::string focus;
    std::vector<std::string> objectives;
    std::vector<std::string> criteria;
    std::size_t n = 240;
    std::string output;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string persist_dir;
};

void add_data_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "Run configuration (JSON)");
    cmd->add_option("--input", f.input, "Population CSV");
    cmd->add_option("--objective", f.objectives, "Objective as NAME:min or NAME:max (repeatable)");
    cmd->add_flag("--drop-incomplete", f.drop_incomplete, "Drop rows with missing cells");
    cmd->add_option("--format", f.format, "table | structured");
}

void add_criterion_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--method", f.method, "rank|delta|minmax|maxnorm|raw|saw|ahp|mew");
    cmd->add_option("--p", f.p, "Norm exponent, a number >= 1 or inf");
    cmd->add_option("--weights", f.weights, "Comma-separated weights");
    cmd->add_option("--focus", f.focus, "Objective that alpha weights");
    cmd->add_option("--constraint", f.constraints, "Constraint such as \"co2<=0.5\" (repeatable)");
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_double(item);
        if (!v) throw Error(ErrorCode::usage, "invalid_weights", "cannot parse weight '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

ObjectiveConfig parse_objective_flag(const std::string& text) {
    const auto colon = text.rfind(':');
    ObjectiveConfig oc;
    oc.spec.name = text.substr(0, colon);
    if (colon != std::string::npos) oc.spec.direction = parse_direction(text.substr(colon + 1));
    if (oc.spec.name.empty()) throw Error(ErrorCode::usage, "invalid_objective", "objective flag needs a name");
    return oc;
}

// Config file first, then every flag that was given.
RunConfig build_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : RunConfig::load(f.config);
    if (!f.objectives.empty()) {
        c.objectives.clear();
        for (const auto& o : f.objectives) c.objectives.push_back(parse_objective_flag(o));
    }
    if (!f.method.empty()) c.method = f.method;
    if (!f.p.empty()) c.p = Exponent::parse(f.p);
    if (!f.weights.empty()) c.weights = parse_weights(f.weights);
    if (f.alpha) c.alpha = f.alpha;
    if (!f.focus.empty()) c.focus = f.focus;
    if (!f.constraints.empty()) {
        c.constraints.clear();
        for (const auto& s : f.constraints) c.constraints.push_back(ConstraintRule::parse(s));
    }
    if (f.grid) c.grid = *f.grid;
    if (!f.format.empty()) c.format = parse_format(f.format);
    if (f.drop_incomplete) c.drop_incomplete = true;
    return c;
}

Population load(const Flags& f, const RunConfig& c, std::ostream& err) {
    if (f.input.empty()) throw Error(ErrorCode::usage, "missing_input", "--input is required");
    auto report = load_population_csv(f.input, c.load_options());
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    return std::move(report.population);
}

std::vector<std::string> names_of(const Population& p) {
    std::vector<std::string> out;
    for (const auto& o : p.objectives()) out.push_back(o.name);
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank-based normalization and Pareto-front navigation for model populations", "copa"};
    app.require_subcommand(1);
    Flags f;

    auto* select = app.add_subcommand("select", "Pick the model minimizing the criterion");
    add_data_flags(select, f);
    add_criterion_flags(select, f);
    select->add_option("--alpha", f.alpha, "Importance of the focus objective in [0, 1]");

    auto* sweep = app.add_subcommand("sweep", "Sweep alpha over [0, 1] and group selections");
    add_data_flags(sweep, f);
    add_criterion_flags(sweep, f);
    sweep->add_option("--grid", f.grid, "Number of evenly spaced alpha values");

    auto* front = app.add_subcommand("front", "List Pareto-optimal models");
    add_data_flags(front, f);

    auto* rank = app.add_subcommand("rank", "Rank models under several criteria");
    add_data_flags(rank, f);
    rank->add_option("--criteria", f.criteria, "copa:p=1, pnorm:p=2, delta-mean, raw:<name>, saw, ahp, mew")
        ->delimiter(',');
    rank->add_option("--weights", f.weights, "Comma-separated weights");

    auto* normalize_cmd = app.add_subcommand("normalize", "Print a normalized matrix");
    add_data_flags(normalize_cmd, f);
    normalize_cmd->add_option("--method", f.method, "rank|delta|minmax|maxnorm|ccdf|raw");

    auto* gen = app.add_subcommand("gen-synthetic", "Write the synthetic two-objective front as CSV");
    gen->add_option("--n", f.n, "Number of points")->check(CLI::PositiveNumber);
    gen->add_option("--seed", f.seed, "Generator seed");
    gen->add_option("--output", f.output, "Output path (default stdout)");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--host", f.host, "Bind address");
    serve->add_option("--port", f.port, "Port");
    serve->add_option("--persist-dir", f.persist_dir, "Directory for snapshot persistence");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help(e.get_name());
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (gen->parsed()) {
            const auto population = generate_synthetic_front(f.n, f.seed.value_or(0));
            const auto csv = population_to_csv(population);
            if (f.output.empty()) {
                out << csv;
            } else {
                std::ofstream file(f.output, std::ios::binary | std::ios::trunc);
                file << csv;
                if (!file) throw Error(ErrorCode::data, "write_failed", "cannot write '" + f.output + "'");
            }
            return 0;
        }
        if (serve->parsed()) {
            ServiceOptions options;
            if (!f.persist_dir.empty()) options.persist_dir = f.persist_dir;
            Service service(std::move(options));
            err << "listening on " << f.host << ':' << f.port << '\n';
            run_server(service, f.host, f.port);
            return 0;
        }

        const auto config = build_config(f);
        const auto population = load(f, config, err);

        if (front->parsed()) {
            export_report(make_front_report(population), config.format, out);
            return 0;
        }
        if (normalize_cmd->parsed()) {
            const auto method = parse_normalization(config.method);
            NormalizedReport report{normalize(population, method), names_of(population), population.model_ids()};
            for (auto k : report.matrix.constant_columns)
                err << "warning: objective '" << report.objectives[k] << "' is constant; minmax maps it to 0\n";
            export_report(report, config.format, out);
            return 0;
        }
        if (rank->parsed()) {
            auto criteria = f.criteria.empty() ? config.criteria : f.criteria;
            if (criteria.empty()) criteria = {"copa:p=1", "copa:p=2", "copa:p=4", "copa:p=8", "copa:p=inf", "delta-mean"};
            export_report(rank_methods(population, criteria, config.weights), config.format, out);
            return 0;
        }

        const auto run = resolve(config, population);
        if (run.spec.criterion.weights_renormalized) err << "warning: weights did not sum to 1 and were rescaled\n";
        if (select->parsed()) {
            const auto result = select_best(population, run.spec, run.constraints);
            export_report(make_selection_report(population, run.spec, result, run.constraints), config.format, out);
            return 0;
        }
        if (sweep->parsed()) {
            SweepReport report{sweep_alpha(population, run.spec, config.grid, run.mapping, run.constraints),
                               names_of(population), {}};
            report.focus = report.objectives[run.mapping.focus_objective];
            export_report(report, config.format, out);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace copa::cli
