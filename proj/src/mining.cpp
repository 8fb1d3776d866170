#include "atrs/mining.hpp"

#include "atrs/csv.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace atrs {

namespace {

using ItemId = std::uint32_t;
using Word = std::uint64_t;

// Transaction-id bitset; bit t set when transaction t holds the item(s).
using TidSet = std::vector<Word>;

std::size_t popcount(const TidSet& bits)
{
    std::size_t n = 0;
    for (Word w : bits) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::size_t and_popcount(const TidSet& a, const TidSet& b)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    }
    return n;
}

TidSet and_bits(const TidSet& a, const TidSet& b)
{
    TidSet out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] & b[i];
    }
    return out;
}

// Frequent itemsets of one size, stored flat: entry i occupies ids[i*k, i*k+k).
struct Level {
    std::size_t k = 0;
    std::vector<ItemId> ids;
    std::vector<std::size_t> counts;
    std::vector<TidSet> tids;

    std::size_t size() const { return counts.size(); }
    std::span<const ItemId> at(std::size_t i) const { return std::span<const ItemId>(ids).subspan(i * k, k); }

    bool contains(std::span<const ItemId> itemset) const
    {
        std::size_t lo = 0;
        std::size_t hi = size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const auto entry = at(mid);
            if (std::lexicographical_compare(entry.begin(), entry.end(), itemset.begin(), itemset.end())) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo < size() && std::ranges::equal(at(lo), itemset);
    }
};

bool meets(std::size_t count, std::size_t total, double threshold)
{
    return static_cast<double>(count) / static_cast<double>(total) >= threshold;
}

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_number(const std::string& text, std::size_t row)
{
    double value = 0.0;
    const auto trimmed = csv::trim(text);
    const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc() || ptr != trimmed.data() + trimmed.size() || trimmed.empty()) {
        throw DataError("malformed number '" + text + "'", row);
    }
    return value;
}

Itemset split_items(const std::string& cell)
{
    Itemset items;
    std::stringstream ss(cell);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (auto item = csv::trim(part); !item.empty()) {
            items.push_back(std::move(item));
        }
    }
    return make_itemset(std::move(items));
}

std::size_t count_containing(std::span<const Itemset> transactions, const Itemset& itemset)
{
    return static_cast<std::size_t>(std::count_if(transactions.begin(), transactions.end(), [&](const Itemset& t) {
        return std::includes(t.begin(), t.end(), itemset.begin(), itemset.end());
    }));
}

} // namespace

void MiningConfig::validate() const
{
    if (!(min_support > 0.0 && min_support <= 1.0)) {
        throw std::invalid_argument("min_support must be in (0, 1]");
    }
    if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
        throw std::invalid_argument("min_confidence must be in (0, 1]");
    }
    if (max_itemset_size && *max_itemset_size == 0) {
        throw std::invalid_argument("max_itemset_size must be at least 1");
    }
}

std::size_t OneHotMatrix::column_sum(std::size_t c) const
{
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        n += at(r, c) ? 1 : 0;
    }
    return n;
}

OneHotMatrix one_hot(std::span<const Itemset> transactions, std::span<const std::string> universe)
{
    if (std::adjacent_find(universe.begin(), universe.end(), std::greater_equal<>()) != universe.end()) {
        throw std::invalid_argument("one_hot: universe must be sorted and duplicate-free");
    }
    OneHotMatrix matrix(transactions.size(), universe.size());
    for (std::size_t r = 0; r < transactions.size(); ++r) {
        for (const auto& item : transactions[r]) {
            const auto it = std::lower_bound(universe.begin(), universe.end(), item);
            if (it == universe.end() || *it != item) {
                throw std::invalid_argument("one_hot: item '" + item + "' is not in the universe");
            }
            matrix.set(r, static_cast<std::size_t>(it - universe.begin()));
        }
    }
    return matrix;
}

double support(std::span<const Itemset> transactions, const Itemset& itemset)
{
    if (transactions.empty()) {
        throw std::invalid_argument("support: empty transaction list");
    }
    const auto sorted = make_itemset(itemset);
    return static_cast<double>(count_containing(transactions, sorted)) / static_cast<double>(transactions.size());
}

std::vector<FrequentItemset> apriori(std::span<const Itemset> transactions, const MiningConfig& config,
                                     const WarningSink& warn)
{
    config.validate();
    if (transactions.empty()) {
        throw std::invalid_argument("apriori: empty transaction list");
    }
    const std::size_t total = transactions.size();
    const std::size_t max_size = config.max_itemset_size.value_or(std::numeric_limits<std::size_t>::max());

    // Ids follow lexicographic item order, so id order == string order.
    std::vector<std::string> universe;
    for (const auto& t : transactions) {
        universe.insert(universe.end(), t.begin(), t.end());
    }
    universe = make_itemset(std::move(universe));
    std::unordered_map<std::string_view, ItemId> id_of;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        id_of.emplace(universe[i], static_cast<ItemId>(i));
    }

    const std::size_t words = (total + 63) / 64;
    std::vector<TidSet> item_tids(universe.size(), TidSet(words, 0));
    for (std::size_t t = 0; t < total; ++t) {
        for (const auto& item : transactions[t]) {
            item_tids[id_of.at(item)][t / 64] |= Word{1} << (t % 64);
        }
    }

    std::vector<FrequentItemset> result;
    auto emit = [&](const Level& level) {
        for (std::size_t i = 0; i < level.size(); ++i) {
            FrequentItemset fi;
            for (ItemId id : level.at(i)) {
                fi.items.push_back(universe[id]);
            }
            fi.count = level.counts[i];
            fi.support = static_cast<double>(fi.count) / static_cast<double>(total);
            result.push_back(std::move(fi));
        }
    };

    Level current;
    current.k = 1;
    for (ItemId id = 0; id < universe.size(); ++id) {
        const std::size_t count = popcount(item_tids[id]);
        if (meets(count, total, config.min_support)) {
            current.ids.push_back(id);
            current.counts.push_back(count);
            current.tids.push_back(item_tids[id]);
        }
    }

    while (current.size() > 0) {
        emit(current);
        if (current.k >= max_size) {
            break;
        }
        const std::size_t k = current.k + 1;

        // Join entries sharing a (k-2)-prefix; prune by downward closure.
        std::vector<ItemId> candidates;
        std::vector<std::size_t> parent;
        std::vector<ItemId> subset(k - 1);
        for (std::size_t i = 0; i < current.size();) {
            const auto head = current.at(i);
            std::size_t group_end = i + 1;
            while (group_end < current.size() &&
                   std::ranges::equal(current.at(group_end).first(k - 2), head.first(k - 2))) {
                ++group_end;
            }
            for (std::size_t a = i; a < group_end; ++a) {
                const auto left = current.at(a);
                for (std::size_t b = a + 1; b < group_end; ++b) {
                    const ItemId extra = current.at(b).back();
                    bool keep = true;
                    for (std::size_t drop = 0; keep && drop + 2 < k; ++drop) {
                        std::size_t w = 0;
                        for (std::size_t p = 0; p < k - 1; ++p) {
                            if (p != drop) {
                                subset[w++] = left[p];
                            }
                        }
                        subset[w] = extra;
                        keep = current.contains(subset);
                    }
                    if (keep) {
                        candidates.insert(candidates.end(), left.begin(), left.end());
                        candidates.push_back(extra);
                        parent.push_back(a);
                    }
                }
            }
            i = group_end;
        }

        const std::size_t candidate_count = parent.size();
        if (candidate_count > kCandidateWarningThreshold && warn) {
            warn("apriori: " + std::to_string(candidate_count) + " candidate " + std::to_string(k) +
                 "-itemsets exceed " + std::to_string(kCandidateWarningThreshold) +
                 "; consider raising min_support or setting max_itemset_size");
        }

        Level next;
        next.k = k;
        for (std::size_t c = 0; c < candidate_count; ++c) {
            const ItemId extra = candidates[c * k + k - 1];
            const TidSet& left_tids = current.tids[parent[c]];
            const std::size_t count = and_popcount(left_tids, item_tids[extra]);
            if (meets(count, total, config.min_support)) {
                next.ids.insert(next.ids.end(), candidates.begin() + static_cast<std::ptrdiff_t>(c * k),
                                candidates.begin() + static_cast<std::ptrdiff_t>(c * k + k));
                next.counts.push_back(count);
                next.tids.push_back(and_bits(left_tids, item_tids[extra]));
            }
        }
        current = std::move(next);
    }
    return result;
}

std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> itemsets,
                                            std::span<const Itemset> transactions, const MiningConfig& config)
{
    config.validate();
    std::vector<AssociationRule> rules;
    const std::size_t total = transactions.size();
    if (total == 0) {
        return rules;
    }

    std::map<Itemset, std::size_t> counts;
    for (const auto& fi : itemsets) {
        counts.emplace(fi.items, fi.count);
    }
    auto count_of = [&](const Itemset& items) {
        if (const auto it = counts.find(items); it != counts.end()) {
            return it->second;
        }
        const std::size_t c = count_containing(transactions, items);
        counts.emplace(items, c);
        return c;
    };

    const double n = static_cast<double>(total);
    for (const auto& fi : itemsets) {
        const std::size_t k = fi.items.size();
        if (k < 2) {
            continue;
        }
        if (k >= 63) {
            throw std::invalid_argument("generate_rules: itemset too large to enumerate splits");
        }
        const std::size_t joint = fi.count;
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
            AssociationRule rule;
            for (std::size_t i = 0; i < k; ++i) {
                ((mask >> i) & 1U ? rule.antecedent : rule.consequent).push_back(fi.items[i]);
            }
            const std::size_t ante = count_of(rule.antecedent);
            const std::size_t cons = count_of(rule.consequent);
            if (ante == 0 || cons == 0) {
                continue;
            }
            rule.confidence = static_cast<double>(joint) / static_cast<double>(ante);
            if (rule.confidence < config.min_confidence) {
                continue;
            }
            rule.support = static_cast<double>(joint) / n;
            rule.lift = static_cast<double>(joint) * n / (static_cast<double>(ante) * static_cast<double>(cons));
            rule.leverage =
                (static_cast<double>(joint) * n - static_cast<double>(ante) * static_cast<double>(cons)) / (n * n);
            rule.conviction = joint == ante ? std::numeric_limits<double>::infinity()
                                            : static_cast<double>(total - cons) * static_cast<double>(ante) /
                                                  (n * static_cast<double>(ante - joint));
            rules.push_back(std::move(rule));
        }
    }

    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
        if (a.lift != b.lift) {
            return a.lift > b.lift;
        }
        if (a.confidence != b.confidence) {
            return a.confidence > b.confidence;
        }
        if (a.antecedent != b.antecedent) {
            return a.antecedent < b.antecedent;
        }
        return a.consequent < b.consequent;
    });
    return rules;
}

MinedRules mine(const TransactionSet& data, const MiningConfig& config, const WarningSink& warn)
{
    config.validate();
    MinedRules mined;
    mined.universe = data.universe;
    mined.transaction_count = data.transactions.size();
    if (data.transactions.empty()) {
        return mined;
    }
    mined.itemsets = apriori(data.transactions, config, warn);
    mined.rules = generate_rules(mined.itemsets, data.transactions, config);
    return mined;
}

std::vector<ItemsetRow> itemset_table(std::span<const FrequentItemset> itemsets,
                                      std::span<const AssociationRule> rules)
{
    std::map<Itemset, const AssociationRule*> best;
    for (const auto& rule : rules) {
        Itemset all = rule.antecedent;
        all.insert(all.end(), rule.consequent.begin(), rule.consequent.end());
        all = make_itemset(std::move(all));
        auto& slot = best[all];
        if (slot == nullptr || rule.confidence > slot->confidence ||
            (rule.confidence == slot->confidence &&
             (rule.lift > slot->lift || (rule.lift == slot->lift && rule.antecedent < slot->antecedent)))) {
            slot = &rule;
        }
    }
    std::vector<ItemsetRow> rows;
    rows.reserve(itemsets.size());
    for (const auto& fi : itemsets) {
        ItemsetRow row{fi.items, fi.support, std::nullopt};
        if (const auto it = best.find(fi.items); it != best.end()) {
            row.best_rule = *it->second;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string join_items(const Itemset& items, char separator)
{
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) {
            out.push_back(separator);
        }
        out += item;
    }
    return out;
}

void write_rules_csv(std::ostream& out, std::span<const AssociationRule> rules)
{
    static const std::vector<std::string> kHeader{"antecedent", "consequent", "support", "confidence",
                                                  "lift",       "leverage",   "conviction"};
    csv::write_row(out, kHeader);
    for (const auto& r : rules) {
        const std::vector<std::string> row{join_items(r.antecedent),
                                           join_items(r.consequent),
                                           format_number(r.support),
                                           format_number(r.confidence),
                                           format_number(r.lift),
                                           format_number(r.leverage),
                                           r.conviction_infinite() ? std::string() : format_number(r.conviction)};
        csv::write_row(out, row);
    }
}

std::vector<AssociationRule> read_rules_csv(std::istream& in)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || fields.size() != 7 || csv::trim(fields[0]) != "antecedent") {
        throw DataError("rules file must start with the header "
                        "antecedent,consequent,support,confidence,lift,leverage,conviction",
                        1);
    }
    std::vector<AssociationRule> rules;
    while (reader.next(fields)) {
        const std::size_t row = reader.record_number();
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) {
            continue;
        }
        if (fields.size() != 7) {
            throw DataError("expected 7 columns, got " + std::to_string(fields.size()), row);
        }
        AssociationRule r;
        r.antecedent = split_items(fields[0]);
        r.consequent = split_items(fields[1]);
        if (r.antecedent.empty() || r.consequent.empty()) {
            throw DataError("rule sides must be non-empty", row);
        }
        r.support = parse_number(fields[2], row);
        r.confidence = parse_number(fields[3], row);
        r.lift = parse_number(fields[4], row);
        r.leverage = parse_number(fields[5], row);
        r.conviction = csv::trim(fields[6]).empty() ? std::numeric_limits<double>::infinity()
                                                    : parse_number(fields[6], row);
        rules.push_back(std::move(r));
    }
    return rules;
}

} // namespace atrs
