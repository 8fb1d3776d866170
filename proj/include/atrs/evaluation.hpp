#pragma once

#include "atrs/mining.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace atrs {

struct MetricStats {
    double mean = 0.0;
    double max = 0.0;

    bool operator==(const MetricStats&) const = default;
};

struct EvalSummary {
    std::string dataset_label;
    std::size_t rule_count = 0;
    MetricStats support;
    MetricStats confidence;
    MetricStats lift;
    MetricStats leverage;
    MetricStats conviction;  // finite convictions only
    std::size_t infinite_conviction_count = 0;
    std::size_t covered_items = 0;
    std::size_t universe_size = 0;
    double coverage = 0.0;  // covered_items / universe_size

    bool operator==(const EvalSummary&) const = default;
};

// Coverage counts distinct rule items that belong to `universe`.
EvalSummary evaluate(std::span<const AssociationRule> rules, std::span<const std::string> universe,
                     std::string dataset_label = {});

struct ComparisonRow {
    std::string metric;
    double value_a = 0.0;
    double value_b = 0.0;
    double delta = 0.0;  // value_a - value_b
};

struct Comparison {
    std::string label_a;
    std::string label_b;
    std::vector<ComparisonRow> rows;
};

Comparison compare(const EvalSummary& a, const EvalSummary& b);

// "metric,value_a,value_b" rows for external plotting.
void write_plot_data(std::ostream& out, const Comparison& comparison);

} // namespace atrs
