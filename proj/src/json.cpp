#include "atrs/json.hpp"

namespace atrs {

using nlohmann::json;

void to_json(json& j, const Item& item)
{
    j = json{{"name", item.name},
             {"carry_on", item.carry_on},
             {"check_in", item.check_in},
             {"prohibited", item.prohibited},
             {"category", item.category}};
    if (item.description) {
        j["description"] = *item.description;
    }
}

void to_json(json& j, const ScoredItem& scored)
{
    j = json{{"item", scored.item}, {"score", scored.score}};
}

void to_json(json& j, const Advice& advice)
{
    j = json{{"query", advice.query},
             {"exact", advice.exact ? json(*advice.exact) : json(nullptr)},
             {"partials", advice.partials},
             {"similar", advice.similar},
             {"rule_recommendations", advice.rule_recommendations},
             {"recorded", advice.recorded}};
}

void to_json(json& j, const SearchSession& session)
{
    j = json{{"index", session.index}, {"items", session.items}, {"timestamp", session.timestamp.str()}};
}

void to_json(json& j, const FrequentItemset& itemset)
{
    j = json{{"items", itemset.items}, {"support", itemset.support}, {"count", itemset.count}};
}

void to_json(json& j, const AssociationRule& rule)
{
    j = json{{"antecedent", rule.antecedent},
             {"consequent", rule.consequent},
             {"support", rule.support},
             {"confidence", rule.confidence},
             {"lift", rule.lift},
             {"leverage", rule.leverage},
             {"conviction", rule.conviction_infinite() ? json(nullptr) : json(rule.conviction)},
             {"conviction_infinite", rule.conviction_infinite()}};
}

void to_json(json& j, const MetricStats& stats)
{
    j = json{{"mean", stats.mean}, {"max", stats.max}};
}

void from_json(const json& j, MetricStats& stats)
{
    j.at("mean").get_to(stats.mean);
    j.at("max").get_to(stats.max);
}

void to_json(json& j, const EvalSummary& s)
{
    j = json{{"dataset_label", s.dataset_label},
             {"rule_count", s.rule_count},
             {"support", s.support},
             {"confidence", s.confidence},
             {"lift", s.lift},
             {"leverage", s.leverage},
             {"conviction", s.conviction},
             {"infinite_conviction_count", s.infinite_conviction_count},
             {"covered_items", s.covered_items},
             {"universe_size", s.universe_size},
             {"coverage", s.coverage}};
}

void from_json(const json& j, EvalSummary& s)
{
    j.at("dataset_label").get_to(s.dataset_label);
    j.at("rule_count").get_to(s.rule_count);
    j.at("support").get_to(s.support);
    j.at("confidence").get_to(s.confidence);
    j.at("lift").get_to(s.lift);
    j.at("leverage").get_to(s.leverage);
    j.at("conviction").get_to(s.conviction);
    j.at("infinite_conviction_count").get_to(s.infinite_conviction_count);
    j.at("covered_items").get_to(s.covered_items);
    j.at("universe_size").get_to(s.universe_size);
    j.at("coverage").get_to(s.coverage);
}

void to_json(json& j, const Comparison& comparison)
{
    json rows = json::array();
    for (const auto& r : comparison.rows) {
        rows.push_back({{"metric", r.metric}, {"value_a", r.value_a}, {"value_b", r.value_b}, {"delta", r.delta}});
    }
    j = json{{"label_a", comparison.label_a}, {"label_b", comparison.label_b}, {"rows", rows}};
}

void to_json(json& j, const YesNo& counts)
{
    j = json{{"yes", counts.yes}, {"no", counts.no}};
}

void to_json(json& j, const DistributionStats& stats)
{
    const auto& cross = stats.carry_on_by_check_in;
    j = json{{"total", stats.total},
             {"carry_on", stats.carry_on},
             {"check_in", stats.check_in},
             {"prohibited", stats.prohibited},
             {"category_count", stats.category_count},
             {"per_category", stats.per_category},
             {"carry_on_by_check_in",
              {{"carry_on_yes", {{"check_in_yes", cross[1][1]}, {"check_in_no", cross[1][0]}}},
               {"carry_on_no", {{"check_in_yes", cross[0][1]}, {"check_in_no", cross[0][0]}}}}},
             {"prohibited_by_category", stats.prohibited_by_category}};
}

void to_json(json& j, const AirlineConstraint& c)
{
    json weight = nullptr;
    if (c.cabin_weight_kg) {
        weight = json{{"max", c.cabin_weight_kg->max}};
        if (c.cabin_weight_kg->min) {
            weight["min"] = *c.cabin_weight_kg->min;
        }
        if (c.cabin_weight_kg->premium_max) {
            weight["premium_max"] = *c.cabin_weight_kg->premium_max;
        }
    }
    j = json{{"airline", c.airline},
             {"cabin_weight_kg", weight},
             {"cabin_dimensions_cm", c.cabin_dimensions_cm},
             {"checkin_allowance", c.checkin_allowance}};
    if (!c.notes.empty()) {
        j["notes"] = c.notes;
    }
}

void from_json(const json& j, AirlineConstraint& c)
{
    j.at("airline").get_to(c.airline);
    const auto& weight = j.at("cabin_weight_kg");
    if (weight.is_null()) {
        c.cabin_weight_kg.reset();
    } else {
        WeightLimit limit;
        weight.at("max").get_to(limit.max);
        if (weight.contains("min")) {
            limit.min = weight.at("min").get<double>();
        }
        if (weight.contains("premium_max")) {
            limit.premium_max = weight.at("premium_max").get<double>();
        }
        c.cabin_weight_kg = limit;
    }
    j.at("cabin_dimensions_cm").get_to(c.cabin_dimensions_cm);
    j.at("checkin_allowance").get_to(c.checkin_allowance);
    c.notes = j.value("notes", std::string());
}

} // namespace atrs
