#include "copa/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "copa/io.hpp"
#include "copa/pareto.hpp"
#include "copa/select.hpp"

namespace copa {

using nlohmann::json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string format_id(std::uint64_t n) {
    std::ostringstream os;
    os << "pop-" << std::setw(6) << std::setfill('0') << n;
    return os.str();
}

std::optional<std::uint64_t> parse_id(std::string_view id) {
    if (id.rfind("pop-", 0) != 0 || id.size() <= 4) return std::nullopt;
    std::uint64_t n = 0;
    for (char c : id.substr(4)) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return n;
}

HttpResponse respond(int status, const json& doc) { return HttpResponse{status, doc.dump(2) + "\n"}; }

HttpResponse error_response(int status, std::string_view category, std::string_view code, int exit_code,
                            std::string_view message) {
    return respond(status, json{{"error",
                                 {{"category", category},
                                  {"code", code},
                                  {"exit_code", exit_code},
                                  {"message", message}}}});
}

HttpResponse from_error(const Error& e) {
    switch (e.code()) {
        case ErrorCode::usage: return error_response(400, "validation", e.key(), 1, e.what());
        case ErrorCode::data: return error_response(400, "data", e.key(), 2, e.what());
        case ErrorCode::infeasible: return error_response(422, "infeasible", e.key(), 3, e.what());
    }
    return error_response(500, "internal", "internal", 2, e.what());
}

HttpResponse not_found(std::string_view id) {
    return error_response(404, "not_found", "unknown_population", 1, "no population with id '" + std::string(id) + "'");
}

json parse_body(std::string_view body) {
    if (body.empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::usage, "invalid_json", std::string("request body is not valid JSON: ") + e.what());
    }
}

template <typename Fn>
HttpResponse guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        return from_error(e);
    } catch (const json::exception& e) {
        return error_response(400, "validation", "invalid_request", 1, e.what());
    }
}

}  // namespace

PopulationStore::PopulationStore(std::optional<std::filesystem::path> persist_dir)
    : persist_dir_(std::move(persist_dir)) {
    if (persist_dir_) {
        std::filesystem::create_directories(*persist_dir_);
        reload();
    }
}

std::shared_ptr<const PopulationHandle> PopulationStore::make_handle(std::string id, std::string created_at,
                                                                     Population population) {
    auto ranks = rank_transform(population);
    auto front = pareto_front(population);
    return std::make_shared<const PopulationHandle>(
        PopulationHandle{std::move(id), std::move(created_at), std::move(population), std::move(ranks), std::move(front)});
}

std::shared_ptr<const PopulationHandle> PopulationStore::create(Population population) {
    // Derived data is computed outside the lock so uploads never stall queries.
    auto handle = make_handle(format_id(next_id_.fetch_add(1)), utc_now(), std::move(population));
    if (persist_dir_) persist(*handle);
    std::unique_lock lock(mutex_);
    handles_.emplace(handle->id, handle);
    return handle;
}

std::shared_ptr<const PopulationHandle> PopulationStore::find(std::string_view id) const {
    std::shared_lock lock(mutex_);
    const auto it = handles_.find(id);
    return it == handles_.end() ? nullptr : it->second;
}

std::size_t PopulationStore::size() const {
    std::shared_lock lock(mutex_);
    return handles_.size();
}

void PopulationStore::persist(const PopulationHandle& handle) const {
    const json doc{{"id", handle.id}, {"created_at", handle.created_at}, {"population", to_json(handle.population)}};
    const auto path = *persist_dir_ / (handle.id + ".json");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump(2) << '\n';
        if (!out) throw Error(ErrorCode::data, "persist_failed", "cannot write '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

void PopulationStore::reload() {
    std::uint64_t max_id = 0;
    for (const auto& entry : std::filesystem::directory_iterator(*persist_dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json doc;
        try {
            in >> doc;
            auto id = doc.at("id").get<std::string>();
            const auto n = parse_id(id);
            if (!n) continue;
            max_id = std::max(max_id, *n);
            auto handle = make_handle(id, doc.value("created_at", ""), population_from_json(doc.at("population")));
            handles_.emplace(std::move(id), std::move(handle));
        } catch (const std::exception&) {
            // Unreadable snapshots are skipped; the rest of the store stays usable.
            continue;
        }
    }
    next_id_ = max_id + 1;
}

Service::Service(ServiceOptions options) : options_(std::move(options)), store_(options_.persist_dir) {}

HttpResponse Service::create_population(std::string_view body) {
    if (body.size() > options_.max_payload_bytes) {
        return error_response(413, "payload_too_large", "payload_too_large", 2,
                              "payload exceeds " + std::to_string(options_.max_payload_bytes) + " bytes");
    }
    return guarded([&] {
        const auto doc = parse_body(body);
        if (!doc.contains("csv") || !doc.at("csv").is_string())
            throw Error(ErrorCode::usage, "missing_csv", "request needs a \"csv\" string field");
        auto config = RunConfig::from_json(doc);
        const auto csv = doc.at("csv").get<std::string>();
        auto report = parse_population_csv(csv, config.load_options());
        if (report.population.size() > options_.max_rows) {
            return error_response(413, "payload_too_large", "too_many_rows", 2,
                                  "population has " + std::to_string(report.population.size()) + " rows, limit is " +
                                      std::to_string(options_.max_rows));
        }
        const auto handle = store_.create(std::move(report.population));
        json objectives = json::array();
        for (const auto& o : handle->population.objectives())
            objectives.push_back(json{{"name", o.name}, {"direction", std::string(to_string(o.direction))}});
        return respond(201, json{{"id", handle->id},
                                 {"created_at", handle->created_at},
                                 {"n", handle->population.size()},
                                 {"k", handle->population.num_objectives()},
                                 {"objectives", objectives},
                                 {"dropped_rows", report.dropped_rows},
                                 {"warnings", report.warnings}});
    });
}

HttpResponse Service::front(std::string_view id) const {
    const auto handle = store_.find(id);
    if (!handle) return not_found(id);
    return guarded([&] {
        FrontReport f;
        for (const auto& o : handle->population.objectives()) f.objectives.push_back(o.name);
        f.indices = handle->front;
        for (auto i : f.indices) {
            f.model_ids.push_back(handle->population.model_ids()[i]);
            const auto raw = handle->population.row(i);
            f.raw.emplace_back(raw.begin(), raw.end());
            const auto u = handle->ranks.values.row(i);
            f.cdf.emplace_back(u.begin(), u.end());
        }
        return respond(200, to_json(f));
    });
}

HttpResponse Service::select(std::string_view id, std::string_view body) const {
    const auto handle = store_.find(id);
    if (!handle) return not_found(id);
    return guarded([&] {
        const auto config = RunConfig::from_json(parse_body(body));
        const auto run = resolve(config, handle->population);
        const auto result = select_best(handle->population, run.spec, run.constraints);
        auto report = make_selection_report(handle->population, run.spec, result, run.constraints);
        return respond(200, to_json(report));
    });
}

HttpResponse Service::sweep(std::string_view id, std::string_view body) const {
    const auto handle = store_.find(id);
    if (!handle) return not_found(id);
    return guarded([&] {
        const auto config = RunConfig::from_json(parse_body(body));
        const auto run = resolve(config, handle->population);
        SweepReport report{sweep_alpha(handle->population, run.spec, config.grid, run.mapping, run.constraints), {}, {}};
        for (const auto& o : handle->population.objectives()) report.objectives.push_back(o.name);
        report.focus = report.objectives[run.mapping.focus_objective];
        return respond(200, to_json(report));
    });
}

HttpResponse Service::normalized(std::string_view id, std::string_view method) const {
    const auto handle = store_.find(id);
    if (!handle) return not_found(id);
    return guarded([&] {
        const auto m = method.empty() ? NormalizationMethod::rank : parse_normalization(method);
        NormalizedReport report{m == NormalizationMethod::rank ? handle->ranks : normalize(handle->population, m), {},
                                handle->population.model_ids()};
        for (const auto& o : handle->population.objectives()) report.objectives.push_back(o.name);
        return respond(200, to_json(report));
    });
}

HttpResponse Service::healthz() const { return respond(200, json{{"status", "ok"}, {"populations", store_.size()}}); }

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body,
                             const std::map<std::string, std::string>& query) {
    if (method == "GET" && path == "/healthz") return healthz();
    if (method == "POST" && path == "/populations") return create_population(body);

    constexpr std::string_view prefix = "/populations/";
    if (path.rfind(prefix, 0) == 0) {
        const auto rest = path.substr(prefix.size());
        const auto slash = rest.find('/');
        if (slash != std::string_view::npos) {
            const auto id = rest.substr(0, slash);
            const auto action = rest.substr(slash + 1);
            if (method == "GET" && action == "front") return front(id);
            if (method == "POST" && action == "select") return select(id, body);
            if (method == "POST" && action == "sweep") return sweep(id, body);
            if (method == "GET" && action == "normalized") {
                const auto it = query.find("method");
                return normalized(id, it == query.end() ? std::string_view{} : std::string_view(it->second));
            }
        }
    }
    return error_response(404, "not_found", "unknown_route",
                          1, "no route for " + std::string(method) + " " + std::string(path));
}

void Service::mount(httplib::Server& server) {
    server.set_payload_max_length(options_.max_payload_bytes);
    auto reply = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, healthz()); });
    server.Post("/populations", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, create_population(req.body));
    });
    server.Get(R"(/populations/([^/]+)/front)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, front(req.matches[1].str()));
    });
    server.Post(R"(/populations/([^/]+)/select)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, select(req.matches[1].str(), req.body));
    });
    server.Post(R"(/populations/([^/]+)/sweep)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, sweep(req.matches[1].str(), req.body));
    });
    server.Get(R"(/populations/([^/]+)/normalized)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, normalized(req.matches[1].str(), req.has_param("method") ? req.get_param_value("method") : ""));
    });
    // Errors raised by httplib itself (oversized body, unmatched route) get
    // the same JSON error shape as handler errors.
    server.set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        if (res.status == 413) {
            reply(res, error_response(413, "payload_too_large", "payload_too_large", 2, "request body exceeds the size limit"));
        } else if (res.status == 404) {
            reply(res, error_response(404, "not_found", "unknown_route", 1, "no route for " + req.method + " " + req.path));
        } else {
            reply(res, error_response(res.status, "transport", "http_error", 1, httplib::status_message(res.status)));
        }
    });
}

void run_server(Service& service, const std::string& host, int port) {
    httplib::Server server;
    service.mount(server);
    if (!server.listen(host, port))
        throw Error(ErrorCode::usage, "listen_failed", "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace copa
