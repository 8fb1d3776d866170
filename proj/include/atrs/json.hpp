#pragma once

#include "atrs/catalog.hpp"
#include "atrs/evaluation.hpp"
#include "atrs/history.hpp"
#include "atrs/mining.hpp"
#include "atrs/recommender.hpp"
#include "atrs/service.hpp"

#include <nlohmann/json.hpp>

namespace atrs {

void to_json(nlohmann::json& j, const Item& item);
void to_json(nlohmann::json& j, const ScoredItem& scored);
void to_json(nlohmann::json& j, const Advice& advice);
void to_json(nlohmann::json& j, const SearchSession& session);
void to_json(nlohmann::json& j, const FrequentItemset& itemset);
// Infinite conviction is written as null with "conviction_infinite": true.
void to_json(nlohmann::json& j, const AssociationRule& rule);
void to_json(nlohmann::json& j, const MetricStats& stats);
void from_json(const nlohmann::json& j, MetricStats& stats);
void to_json(nlohmann::json& j, const EvalSummary& summary);
void from_json(const nlohmann::json& j, EvalSummary& summary);
void to_json(nlohmann::json& j, const Comparison& comparison);
void to_json(nlohmann::json& j, const YesNo& counts);
void to_json(nlohmann::json& j, const DistributionStats& stats);
void to_json(nlohmann::json& j, const AirlineConstraint& constraint);
void from_json(const nlohmann::json& j, AirlineConstraint& constraint);

} // namespace atrs
