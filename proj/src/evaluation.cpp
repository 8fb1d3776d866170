#include "atrs/evaluation.hpp"

#include <algorithm>
#include <set>

namespace atrs {

namespace {

class Accumulator {
public:
    void add(double value)
    {
        sum_ += value;
        min_ = count_ == 0 ? value : std::min(min_, value);
        max_ = count_ == 0 ? value : std::max(max_, value);
        ++count_;
    }

    MetricStats stats() const
    {
        if (count_ == 0) {
            return {};
        }
        // Rounding in the sum must not push the mean outside [min, max].
        return {std::clamp(sum_ / static_cast<double>(count_), min_, max_), max_};
    }

private:
    double sum_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
    std::size_t count_ = 0;
};

} // namespace

EvalSummary evaluate(std::span<const AssociationRule> rules, std::span<const std::string> universe,
                     std::string dataset_label)
{
    EvalSummary summary;
    summary.dataset_label = std::move(dataset_label);
    summary.rule_count = rules.size();

    const std::set<std::string> universe_set(universe.begin(), universe.end());
    summary.universe_size = universe_set.size();

    Accumulator support, confidence, lift, leverage, conviction;
    std::set<std::string> covered;
    for (const auto& rule : rules) {
        support.add(rule.support);
        confidence.add(rule.confidence);
        lift.add(rule.lift);
        leverage.add(rule.leverage);
        if (rule.conviction_infinite()) {
            ++summary.infinite_conviction_count;
        } else {
            conviction.add(rule.conviction);
        }
        for (const auto* side : {&rule.antecedent, &rule.consequent}) {
            for (const auto& item : *side) {
                if (universe_set.count(item) != 0) {
                    covered.insert(item);
                }
            }
        }
    }
    summary.support = support.stats();
    summary.confidence = confidence.stats();
    summary.lift = lift.stats();
    summary.leverage = leverage.stats();
    summary.conviction = conviction.stats();
    summary.covered_items = covered.size();
    summary.coverage = summary.universe_size == 0
                           ? 0.0
                           : static_cast<double>(covered.size()) / static_cast<double>(summary.universe_size);
    return summary;
}

Comparison compare(const EvalSummary& a, const EvalSummary& b)
{
    Comparison cmp{a.dataset_label, b.dataset_label, {}};
    auto row = [&](std::string metric, double va, double vb) {
        cmp.rows.push_back({std::move(metric), va, vb, va - vb});
    };
    row("rule_count", static_cast<double>(a.rule_count), static_cast<double>(b.rule_count));
    row("coverage", a.coverage, b.coverage);
    row("mean_support", a.support.mean, b.support.mean);
    row("max_support", a.support.max, b.support.max);
    row("mean_confidence", a.confidence.mean, b.confidence.mean);
    row("max_confidence", a.confidence.max, b.confidence.max);
    row("mean_lift", a.lift.mean, b.lift.mean);
    row("max_lift", a.lift.max, b.lift.max);
    row("mean_leverage", a.leverage.mean, b.leverage.mean);
    row("max_leverage", a.leverage.max, b.leverage.max);
    row("mean_conviction", a.conviction.mean, b.conviction.mean);
    row("max_conviction", a.conviction.max, b.conviction.max);
    row("infinite_conviction_count", static_cast<double>(a.infinite_conviction_count),
        static_cast<double>(b.infinite_conviction_count));
    return cmp;
}

void write_plot_data(std::ostream& out, const Comparison& comparison)
{
    const auto old_precision = out.precision(17);
    out << "metric,value_a,value_b\n";
    for (const auto& r : comparison.rows) {
        out << r.metric << ',' << r.value_a << ',' << r.value_b << '\n';
    }
    out.precision(old_precision);
}

} // namespace atrs
