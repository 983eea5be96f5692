#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "copa/core.hpp"
#include "copa/normalize.hpp"

namespace httplib {
class Server;
}

namespace copa {

// An uploaded population plus the weight-independent data every query needs.
struct PopulationHandle {
    std::string id;
    std::string created_at;  // ISO 8601, UTC
    Population population;
    NormalizedMatrix ranks;
    std::vector<std::size_t> front;
};

// Thread-safe map of immutable snapshots. Ids are never reused within a
// process; with a persistence directory every snapshot is also written to
// <dir>/<id>.json and reloaded on construction.
class PopulationStore {
public:
    explicit PopulationStore(std::optional<std::filesystem::path> persist_dir = std::nullopt);

    std::shared_ptr<const PopulationHandle> create(Population population);
    std::shared_ptr<const PopulationHandle> find(std::string_view id) const;
    std::size_t size() const;

private:
    std::shared_ptr<const PopulationHandle> make_handle(std::string id, std::string created_at, Population population);
    void persist(const PopulationHandle& handle) const;
    void reload();

    std::optional<std::filesystem::path> persist_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const PopulationHandle>, std::less<>> handles_;
    std::atomic<std::uint64_t> next_id_{1};
};

struct ServiceOptions {
    std::size_t max_payload_bytes = 50u * 1024u * 1024u;
    std::size_t max_rows = 100'000;
    std::optional<std::filesystem::path> persist_dir;
};

struct HttpResponse {
    int status = 200;
    std::string body;
};

// Request handlers, independent of the transport so they can be called
// directly. Bodies are JSON in the same schema the CLI emits.
class Service {
public:
    explicit Service(ServiceOptions options = {});

    HttpResponse create_population(std::string_view body);
    HttpResponse front(std::string_view id) const;
    HttpResponse select(std::string_view id, std::string_view body) const;
    HttpResponse sweep(std::string_view id, std::string_view body) const;
    HttpResponse normalized(std::string_view id, std::string_view method) const;
    HttpResponse healthz() const;

    // Routes a request by method and path ("/populations/<id>/front", ...).
    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body,
                        const std::map<std::string, std::string>& query = {});

    // Registers every endpoint on an httplib server.
    void mount(httplib::Server& server);

    const PopulationStore& store() const noexcept { return store_; }

private:
    ServiceOptions options_;
    PopulationStore store_;
};

// Blocks serving HTTP on host:port until the process is stopped.
void run_server(Service& service, const std::string& host, int port);

}  // namespace copa
