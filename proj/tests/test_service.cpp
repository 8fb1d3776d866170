#include "atrs/json.hpp"
#include "atrs/service.hpp"

#include "support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <sstream>
#include <thread>

using namespace atrs;
using atrs_test::data_path;
using nlohmann::json;

namespace {

Timestamp fixed_clock()
{
    return Timestamp(2023, 8, 1, 9, 30, 0);
}

// Advisor + service on an ephemeral port for the lifetime of the fixture.
struct Server {
    Advisor advisor;
    Service service;
    int port = -1;
    std::thread thread;

    explicit Server(ServiceOptions options = {})
        : advisor(std::make_shared<const Catalog>(load_catalog_file(data_path("catalog.csv"))),
                  std::make_shared<const EmbeddingTable>(load_embeddings_file(data_path("vectors16.vec"), {})),
                  load_history_file(data_path("user_searches.csv")), RecommenderConfig{}, fixed_clock),
          service(advisor, load_constraints_file(data_path("airline_constraints.json")), std::move(options))
    {
        port = service.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { service.listen_after_bind(); });
        service.wait_until_ready();
    }

    ~Server()
    {
        service.stop();
        thread.join();
    }

    httplib::Client client() const
    {
        httplib::Client c("127.0.0.1", port);
        c.set_connection_timeout(5);
        c.set_read_timeout(10);
        return c;
    }

    std::pair<int, json> get(const std::string& path) const
    {
        auto c = client();
        auto res = c.Get(path);
        REQUIRE(res);
        return {res->status, json::parse(res->body)};
    }

    std::pair<int, json> post(const std::string& path, const std::string& body) const
    {
        auto c = client();
        auto res = c.Post(path, body, "application/json");
        REQUIRE(res);
        return {res->status, json::parse(res->body)};
    }
};

} // namespace

TEST_CASE("item lookup")
{
    Server s;
    auto [status, body] = s.get("/api/items/ipod");
    CHECK(status == 200);
    CHECK(body == json{{"name", "ipod"}, {"carry_on", true}, {"check_in", true}, {"prohibited", false},
                       {"category", "laptop"}});

    std::tie(status, body) = s.get("/api/items/Tear-Gas!");
    CHECK(status == 200);
    CHECK(body.at("name") == "tear gas");
    CHECK(body.at("prohibited") == true);

    std::tie(status, body) = s.get("/api/items/Tear%20Gas");
    CHECK(status == 200);

    std::tie(status, body) = s.get("/api/items/warp%20drive");
    CHECK(status == 404);
    CHECK(body.at("error").at("code") == "item_not_found");

    std::tie(status, body) = s.get("/api/nowhere");
    CHECK(status == 404);
    CHECK(body.at("error").contains("code"));
}

TEST_CASE("recommend")
{
    Server s;
    auto [status, body] = s.get("/api/recommend?q=ipod");
    CHECK(status == 200);
    CHECK(body.at("exact").at("name") == "ipod");
    CHECK(body.at("similar").size() == 5);
    CHECK(body.at("recorded") == false);
    std::set<std::string> recs;
    for (const auto& r : body.at("rule_recommendations")) {
        recs.insert(r.at("item").at("name").get<std::string>());
    }
    CHECK(recs.count("piano") == 1);
    CHECK(recs.count("coffee") == 1);
    for (const char* key : {"query", "exact", "partials", "similar", "rule_recommendations", "recorded"}) {
        CHECK(body.contains(key));
    }

    std::tie(status, body) = s.get("/api/recommend?q=zzz%20qqq&record=false");
    CHECK(status == 200);
    CHECK(body.at("exact").is_null());
    CHECK(body.at("similar").empty());
    CHECK(body.at("rule_recommendations").empty());
    CHECK(body.at("recorded") == false);
    CHECK(s.advisor.history().size() == 4);

    std::tie(status, body) = s.get("/api/recommend?q=ipod&n=2");
    CHECK(body.at("similar").size() == 2);

    CHECK(s.get("/api/recommend?q=ipod&n=0").first == 400);
    CHECK(s.get("/api/recommend?q=ipod&n=abc").first == 400);
    CHECK(s.get("/api/recommend?q=ipod&record=maybe").first == 400);
    std::tie(status, body) = s.get("/api/recommend");
    CHECK(status == 400);
    CHECK(body.at("error").at("code") == "bad_request");
}

TEST_CASE("recommend records unknown queries unless told not to")
{
    Server s;
    auto [status, body] = s.get("/api/recommend?q=warp%20drive");
    CHECK(body.at("recorded") == true);
    CHECK(s.advisor.history().size() == 5);
    std::tie(status, body) = s.get("/api/recommend?q=warp%20drive&record=false");
    CHECK(body.at("recorded") == false);
    CHECK(s.advisor.history().size() == 5);
}

TEST_CASE("history and search")
{
    Server s;
    auto [status, body] = s.get("/api/history");
    CHECK(status == 200);
    REQUIRE(body.size() == 4);
    CHECK(body[0] == json{{"index", 0},
                          {"items", {"coffee", "ipod", "piano"}},
                          {"timestamp", "2023-07-29 19:26:07"}});

    std::tie(status, body) = s.post("/api/search", R"({"items":["Espresso","coffee"]})");
    CHECK(status == 200);
    CHECK(body == json{{"index", 4},
                       {"items", {"espresso", "coffee"}},
                       {"timestamp", "2023-08-01 09:30:00"},
                       {"recorded", true}});

    std::tie(status, body) = s.post("/api/search", R"({"items":["ipod"]})");
    CHECK(body == json{{"recorded", false}});

    CHECK(s.post("/api/search", "not json").first == 400);
    CHECK(s.post("/api/search", R"({"items":"ipod"})").first == 400);
    CHECK(s.post("/api/search", R"({"items":["!!"]})").first == 400);
    CHECK(s.get("/api/history").second.size() == 5);
}

TEST_CASE("rules")
{
    Server s;
    auto [status, body] = s.get("/api/rules");
    CHECK(status == 200);
    REQUIRE(body.size() == 12);
    for (const auto& rule : body) {
        CHECK(rule.at("support") == 0.5);
        CHECK(rule.at("confidence") == 1.0);
        CHECK(rule.at("lift") == 2.0);
        CHECK(rule.at("leverage") == 0.25);
        CHECK(rule.at("conviction").is_null());
        CHECK(rule.at("conviction_infinite") == true);
    }

    std::tie(status, body) = s.get("/api/rules?min_support=0.6");
    CHECK(status == 200);
    CHECK(body.empty());
    CHECK(s.get("/api/rules").second.size() == 12);

    CHECK(s.get("/api/rules?min_support=0").first == 400);
    CHECK(s.get("/api/rules?min_confidence=2").first == 400);
    CHECK(s.get("/api/rules?min_support=abc").first == 400);
}

TEST_CASE("metrics")
{
    Server s;
    auto [status, body] = s.get("/api/metrics");
    CHECK(status == 200);
    CHECK(body.at("rule_count") == 12);
    CHECK(body.at("coverage") == 0.6);
    CHECK(body.at("lift").at("mean") == 2.0);
    CHECK(body.at("infinite_conviction_count") == 12);
}

TEST_CASE("constraints")
{
    Server s;
    auto [status, body] = s.get("/api/constraints");
    CHECK(status == 200);
    REQUIRE(body.size() == 5);
    CHECK(body[0].at("airline") == "IndiGo");
    CHECK(body[0].at("cabin_weight_kg").at("max") == 7);
    CHECK(body[0].at("cabin_dimensions_cm") == json{55, 35, 25});
    bool tsa = false;
    for (const auto& c : body) {
        if (c.at("airline").get<std::string>().rfind("TSA", 0) == 0) {
            tsa = true;
            CHECK(c.at("cabin_weight_kg").is_null());
            CHECK(c.at("checkin_allowance").get<std::string>().find("23 kilograms") != std::string::npos);
        }
    }
    CHECK(tsa);
}

TEST_CASE("CORS headers and preflight")
{
    Server s(ServiceOptions{"http://localhost:5173"});
    auto c = s.client();
    auto res = c.Get("/api/items/ipod");
    REQUIRE(res);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    res = c.Options("/api/recommend");
    REQUIRE(res);
    CHECK(res->status == 204);
    CHECK(res->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
    res = c.Get("/api/items/warp");
    REQUIRE(res);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
}

TEST_CASE("constraint file validation")
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return load_constraints(in);
    };
    CHECK(parse(R"({"version":1,"airlines":[]})").empty());
    const std::string ok_dims = R"("cabin_dimensions_cm":[55,35,25],"checkin_allowance":"15 kg")";
    CHECK(parse(R"({"airlines":[{"airline":"X","cabin_weight_kg":{"max":7},)" + ok_dims + "}]}").size() == 1);
    CHECK_THROWS_AS(parse(R"({"airlines":[{"airline":"X","cabin_weight_kg":{"max":-1},)" + ok_dims + "}]}"),
                    DataError);
    CHECK_THROWS_AS(parse(R"({"airlines":[{"airline":"X","cabin_weight_kg":null,"cabin_dimensions_cm":[55,0,25],)"
                          R"("checkin_allowance":""}]})"),
                    DataError);
    CHECK_THROWS_AS(parse(R"({"airlines":[{"airline":"X"}]})"), DataError);
    CHECK_THROWS_AS(parse("not json"), DataError);
}
