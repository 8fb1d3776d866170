#include "atrs/service.hpp"

#include "atrs/json.hpp"

#include <httplib.h>

#include <charconv>
#include <fstream>

namespace atrs {

using nlohmann::json;

namespace {

void check_constraint(const AirlineConstraint& c, std::size_t position)
{
    const std::string where = "constraint #" + std::to_string(position) + " (" + c.airline + ")";
    if (c.airline.empty()) {
        throw DataError("constraint #" + std::to_string(position) + " has no airline name");
    }
    if (c.cabin_weight_kg) {
        const auto& w = *c.cabin_weight_kg;
        if (!(w.max > 0) || (w.min && !(*w.min > 0)) || (w.premium_max && !(*w.premium_max > 0))) {
            throw DataError(where + ": weights must be positive");
        }
    }
    for (double d : c.cabin_dimensions_cm) {
        if (!(d > 0)) {
            throw DataError(where + ": dimensions must be positive");
        }
    }
}

void send_json(httplib::Response& res, const json& body, int status = 200)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message)
{
    send_json(res, json{{"error", {{"code", code}, {"message", message}}}}, status);
}

struct BadRequest {
    std::string message;
};

std::optional<double> double_param(const httplib::Request& req, const char* name)
{
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    const auto text = req.get_param_value(name);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw BadRequest{std::string("parameter '") + name + "' must be a number"};
    }
    return value;
}

std::optional<long long> int_param(const httplib::Request& req, const char* name)
{
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    const auto text = req.get_param_value(name);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw BadRequest{std::string("parameter '") + name + "' must be an integer"};
    }
    return value;
}

bool bool_param(const httplib::Request& req, const char* name, bool fallback)
{
    if (!req.has_param(name)) {
        return fallback;
    }
    const auto text = req.get_param_value(name);
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw BadRequest{std::string("parameter '") + name + "' must be true or false"};
}

} // namespace

std::vector<AirlineConstraint> load_constraints(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(std::string("constraints file is not valid JSON: ") + e.what());
    }
    std::vector<AirlineConstraint> out;
    try {
        for (const auto& entry : doc.at("airlines")) {
            out.push_back(entry.get<AirlineConstraint>());
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed constraints file: ") + e.what());
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        check_constraint(out[i], i);
    }
    return out;
}

std::vector<AirlineConstraint> load_constraints_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open constraints file '" + path + "'");
    }
    return load_constraints(in);
}

struct Service::Impl {
    Advisor& advisor;
    std::vector<AirlineConstraint> constraints;
    ServiceOptions options;
    httplib::Server server;

    Impl(Advisor& a, std::vector<AirlineConstraint> c, ServiceOptions o)
        : advisor(a), constraints(std::move(c)), options(std::move(o))
    {
        install();
    }

    // Runs `body`, translating BadRequest into a 400.
    template <typename F>
    static httplib::Server::Handler guarded(F body)
    {
        return [body](const httplib::Request& req, httplib::Response& res) {
            try {
                body(req, res);
            } catch (const BadRequest& e) {
                send_error(res, 400, "bad_request", e.message);
            }
        };
    }

    void install()
    {
        server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", options.cors_origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
            send_error(res, 500, "internal_error", "internal server error");
        });
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                send_error(res, res.status, res.status == 404 ? "not_found" : "error", "no such resource");
            }
        });
        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Get(R"(/api/items/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const auto item = exact_lookup(advisor.catalog(), req.matches[1].str());
                       if (!item) {
                           send_error(res, 404, "item_not_found", "no catalog item matches the given name");
                           return;
                       }
                       send_json(res, *item);
                   }));

        server.Get("/api/recommend", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       if (!req.has_param("q")) {
                           throw BadRequest{"parameter 'q' is required"};
                       }
                       const auto n = int_param(req, "n").value_or(
                           static_cast<long long>(advisor.config().top_n));
                       if (n < 1) {
                           throw BadRequest{"parameter 'n' must be at least 1"};
                       }
                       const bool record = bool_param(req, "record", true);
                       const auto advice =
                           advisor.advise(req.get_param_value("q"), record, static_cast<std::size_t>(n));
                       send_json(res, advice);
                   }));

        server.Get("/api/history", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, advisor.history_snapshot());
        });

        server.Post("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        std::vector<std::string> items;
                        try {
                            const auto body = json::parse(req.body);
                            items = body.at("items").get<std::vector<std::string>>();
                        } catch (const json::exception&) {
                            throw BadRequest{"body must be {\"items\": [string, ...]}"};
                        }
                        std::optional<SearchSession> session;
                        try {
                            session = advisor.record(items);
                        } catch (const std::invalid_argument&) {
                            throw BadRequest{"no searchable item in 'items'"};
                        }
                        if (!session) {
                            send_json(res, json{{"recorded", false}});
                            return;
                        }
                        json body = *session;
                        body["recorded"] = true;
                        send_json(res, body);
                    }));

        server.Get("/api/rules", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const auto min_support = double_param(req, "min_support");
                       const auto min_confidence = double_param(req, "min_confidence");
                       if (!min_support && !min_confidence) {
                           send_json(res, advisor.rules()->rules);
                           return;
                       }
                       MiningConfig config = advisor.config().mining;
                       config.min_support = min_support.value_or(config.min_support);
                       config.min_confidence = min_confidence.value_or(config.min_confidence);
                       try {
                           config.validate();
                       } catch (const std::invalid_argument& e) {
                           throw BadRequest{e.what()};
                       }
                       send_json(res, advisor.mine_with(config).rules);
                   }));

        server.Get("/api/metrics", [this](const httplib::Request&, httplib::Response& res) {
            const auto rules = advisor.rules();
            send_json(res, evaluate(rules->rules, rules->universe, "history"));
        });

        server.Get("/api/constraints", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, constraints);
        });
    }
};

Service::Service(Advisor& advisor, std::vector<AirlineConstraint> constraints, ServiceOptions options)
    : impl_(std::make_unique<Impl>(advisor, std::move(constraints), std::move(options)))
{
}

Service::~Service() = default;

bool Service::listen(const std::string& host, int port)
{
    return impl_->server.listen(host, port);
}

int Service::bind_to_any_port(const std::string& host)
{
    return impl_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind()
{
    return impl_->server.listen_after_bind();
}

void Service::stop()
{
    impl_->server.stop();
}

void Service::wait_until_ready() const
{
    impl_->server.wait_until_ready();
}

} // namespace atrs
