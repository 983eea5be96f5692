#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "copa/io.hpp"
#include "copa/service.hpp"
#include "support.hpp"

using namespace copa;
using nlohmann::json;

namespace {

std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string leaderboard_body() {
    json body = json::parse(read(copa::testing::fixture("leaderboard.json")));
    body["csv"] = read(copa::testing::fixture("leaderboard.csv"));
    return body.dump();
}

std::string create(Service& s) {
    const auto r = s.create_population(leaderboard_body());
    REQUIRE(r.status == 201);
    return json::parse(r.body).at("id").get<std::string>();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("upload returns distinct ids for identical payloads") {
    Service s;
    const auto a = s.create_population(leaderboard_body());
    const auto b = s.create_population(leaderboard_body());
    REQUIRE(a.status == 201);
    REQUIRE(b.status == 201);
    const auto da = json::parse(a.body);
    CHECK(da.at("id") != json::parse(b.body).at("id"));
    CHECK(da.at("n") == 10);
    CHECK(da.at("k") == 2);
    CHECK(da.at("warnings").size() == 1);
    CHECK(s.store().size() == 2);
    CHECK(json::parse(s.healthz().body).at("populations") == 2);
}

TEST_CASE("front is precomputed at upload") {
    Service s;
    const auto id = create(s);
    const auto handle = s.store().find(id);
    REQUIRE(handle);
    const auto r = s.front(id);
    CHECK(r.status == 200);
    const auto doc = json::parse(r.body);
    CHECK(doc.at("models").size() == handle->front.size());
    CHECK(handle->front == copa::testing::brute_front(handle->population));
}

TEST_CASE("error statuses") {
    ServiceOptions options;
    options.max_payload_bytes = 4096;
    options.max_rows = 5;
    Service s(options);

    const auto malformed = s.create_population(R"({"csv": "model,a,b\nx,1,2\ny,oops,3\n"})");
    CHECK(malformed.status == 400);
    const auto err = json::parse(malformed.body).at("error");
    CHECK(err.at("code") == "parse_error");
    CHECK(err.at("exit_code") == 2);
    CHECK(err.at("message").get<std::string>().find("line 3") != std::string::npos);

    CHECK(s.create_population("not json").status == 400);
    CHECK(s.create_population(R"({"rows": []})").status == 400);
    CHECK(s.create_population(std::string(5000, ' ')).status == 413);
    CHECK(s.create_population(leaderboard_body()).status == 413);

    CHECK(s.front("pop-999999").status == 404);
    CHECK(s.select("nope", "{}").status == 404);
    CHECK(s.handle("DELETE", "/populations", "").status == 404);

    const auto small = s.create_population(R"({"csv": "model,a,b\nx,1,2\ny,2,1\n"})");
    REQUIRE(small.status == 201);
    const auto id = json::parse(small.body).at("id").get<std::string>();
    const auto infeasible = s.select(id, R"({"constraints": ["a<0"]})");
    CHECK(infeasible.status == 422);
    CHECK(json::parse(infeasible.body).at("error").at("exit_code") == 3);
    CHECK(s.select(id, R"({"method": "zscore"})").status == 400);
    CHECK(s.select(id, R"({"focus": "c", "alpha": 0.5})").status == 400);
    CHECK(s.normalized(id, "bogus").status == 400);
}

TEST_CASE("select reports top-percent as 100 times the rank") {
    Service s;
    const auto id = create(s);
    const auto r = s.select(id, R"({"alpha": 0.5, "focus": "score"})");
    REQUIRE(r.status == 200);
    const auto doc = json::parse(r.body);
    const auto handle = s.store().find(id);
    const auto row = doc.at("model_index").get<std::size_t>();
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(doc.at("top_percent")[k].get<double>() == 100.0 * handle->ranks.values(row, k));
    CHECK(s.select(id, R"({"alpha": 0.5, "focus": "score"})").body == r.body);
}

TEST_CASE("routing dispatches to the handlers") {
    Service s;
    const auto id = create(s);
    CHECK(s.handle("GET", "/healthz", "").status == 200);
    CHECK(s.handle("GET", "/populations/" + id + "/front", "").body == s.front(id).body);
    CHECK(s.handle("POST", "/populations/" + id + "/sweep", R"({"grid": 5})").status == 200);
    const auto n = s.handle("GET", "/populations/" + id + "/normalized", "", {{"method", "minmax"}});
    CHECK(n.status == 200);
    CHECK(json::parse(n.body).at("method") == "minmax");
    CHECK(s.handle("GET", "/populations/" + id + "/nothing", "").status == 404);
}

TEST_CASE("snapshots persist across restarts") {
    const auto dir = fresh_dir("copa_service_persist");
    ServiceOptions options;
    options.persist_dir = dir;
    std::string id;
    std::string front_body;
    {
        Service s(options);
        id = create(s);
        front_body = s.front(id).body;
    }
    std::ofstream(dir / "garbage.json") << "{ not json";
    Service again(options);
    REQUIRE(again.store().find(id));
    CHECK(again.front(id).body == front_body);
    const auto next = create(again);
    CHECK(next != id);
    std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent uploads and queries") {
    Service s;
    const auto id = create(s);
    const auto expected = s.select(id, R"({"alpha": 0.3, "focus": "co2"})").body;
    std::vector<std::thread> workers;
    std::vector<std::string> ids(8);
    std::vector<int> mismatches(8, 0);
    for (std::size_t t = 0; t < 8; ++t) {
        workers.emplace_back([&, t] {
            ids[t] = json::parse(s.create_population(leaderboard_body()).body).at("id").get<std::string>();
            for (int i = 0; i < 20; ++i)
                if (s.select(id, R"({"alpha": 0.3, "focus": "co2"})").body != expected) ++mismatches[t];
        });
    }
    for (auto& w : workers) w.join();
    CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 8);
    for (int m : mismatches) CHECK(m == 0);
    CHECK(s.store().size() == 9);
}

TEST_CASE("http transport") {
    ServiceOptions options;
    options.max_payload_bytes = 64 * 1024;
    Service service(options);
    httplib::Server server;
    service.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const auto health = client.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);

    const auto created = client.Post("/populations", leaderboard_body(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const auto id = json::parse(created->body).at("id").get<std::string>();

    const auto selected = client.Post("/populations/" + id + "/select", R"({"alpha": 0.5, "focus": "score"})",
                                      "application/json");
    REQUIRE(selected);
    CHECK(selected->status == 200);
    CHECK(json::parse(selected->body).at("model_id") == "Falcon3-7B");

    const auto norm = client.Get("/populations/" + id + "/normalized?method=minmax");
    REQUIRE(norm);
    CHECK(json::parse(norm->body).at("method") == "minmax");

    const auto missing = client.Get("/populations/pop-424242/front");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    const auto nowhere = client.Get("/elsewhere");
    REQUIRE(nowhere);
    CHECK(nowhere->status == 404);
    CHECK(json::parse(nowhere->body).at("error").at("code") == "unknown_route");

    const auto huge = client.Post("/populations", std::string(128 * 1024, 'x'), "application/json");
    REQUIRE(huge);
    CHECK(huge->status == 413);
    CHECK(json::parse(huge->body).at("error").at("category") == "payload_too_large");

    server.stop();
    loop.join();
}
