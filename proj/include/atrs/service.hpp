#pragma once

#include "atrs/evaluation.hpp"
#include "atrs/recommender.hpp"

#include <array>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace atrs {

struct WeightLimit {
    std::optional<double> min;
    double max = 0.0;
    std::optional<double> premium_max;
};

struct AirlineConstraint {
    std::string airline;
    std::optional<WeightLimit> cabin_weight_kg;  // absent: no stated limit
    std::array<double, 3> cabin_dimensions_cm{};
    std::string checkin_allowance;
    std::string notes;
};

// Reads the versioned reference file ({"version":..,"airlines":[..]}).
// Throws DataError on non-positive weights or dimensions.
std::vector<AirlineConstraint> load_constraints(std::istream& in);
std::vector<AirlineConstraint> load_constraints_file(const std::string& path);

struct ServiceOptions {
    std::string cors_origin = "*";
};

// JSON-over-HTTP facade over an Advisor:
//   GET  /api/items/{name}         GET /api/recommend?q=&n=&record=
//   GET  /api/history              POST /api/search {"items":[...]}
//   GET  /api/rules?min_support=&min_confidence=
//   GET  /api/metrics              GET /api/constraints
class Service {
public:
    Service(Advisor& advisor, std::vector<AirlineConstraint> constraints, ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Blocks until stop().
    bool listen(const std::string& host, int port);
    // Binds an ephemeral port and returns it (or -1).
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace atrs
