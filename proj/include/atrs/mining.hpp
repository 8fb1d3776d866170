#pragma once

#include "atrs/error.hpp"
#include "atrs/transactions.hpp"

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace atrs {

struct MiningConfig {
    double min_support = 0.1;
    double min_confidence = 0.5;
    std::optional<std::size_t> max_itemset_size;  // unlimited when empty

    // Throws std::invalid_argument unless both thresholds are in (0, 1]
    // and max_itemset_size (if set) is >= 1.
    void validate() const;
};

// A level producing more candidates than this triggers a warning.
inline constexpr std::size_t kCandidateWarningThreshold = 1'000'000;

struct FrequentItemset {
    Itemset items;
    double support = 0.0;
    std::size_t count = 0;  // transactions containing `items`
};

struct AssociationRule {
    Itemset antecedent;
    Itemset consequent;
    double support = 0.0;
    double confidence = 0.0;
    double lift = 0.0;
    double leverage = 0.0;
    // +infinity when confidence == 1.
    double conviction = 0.0;

    bool conviction_infinite() const noexcept
    {
        return conviction == std::numeric_limits<double>::infinity();
    }
};

// Row-major boolean matrix: one row per transaction, one column per
// universe item.
class OneHotMatrix {
public:
    OneHotMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c) != 0; }
    void set(std::size_t r, std::size_t c) { cells_.at(r * cols_ + c) = 1; }
    std::size_t column_sum(std::size_t c) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> cells_;
};

// Throws std::invalid_argument when the universe is unsorted/duplicated or
// a transaction holds an item outside it.
OneHotMatrix one_hot(std::span<const Itemset> transactions, std::span<const std::string> universe);

// Fraction of transactions containing every item of `itemset` (1.0 for the
// empty set). Throws std::invalid_argument on an empty transaction list.
double support(std::span<const Itemset> transactions, const Itemset& itemset);

// Level-wise Apriori over a packed vertical (tid-bitset) layout. Output is
// sorted by (size asc, items lexicographic). Throws std::invalid_argument
// on an empty transaction list or invalid config.
std::vector<FrequentItemset> apriori(std::span<const Itemset> transactions, const MiningConfig& config,
                                     const WarningSink& warn = warn_to_stderr);

// All antecedent/consequent splits of every frequent itemset of size >= 2
// that meet min_confidence. Sorted by (lift desc, confidence desc,
// antecedent, consequent).
std::vector<AssociationRule> generate_rules(std::span<const FrequentItemset> itemsets,
                                            std::span<const Itemset> transactions,
                                            const MiningConfig& config);

struct MinedRules {
    std::vector<FrequentItemset> itemsets;
    std::vector<AssociationRule> rules;
    std::vector<std::string> universe;
    std::size_t transaction_count = 0;
};

// apriori + generate_rules; an empty transaction set yields empty output.
MinedRules mine(const TransactionSet& data, const MiningConfig& config,
                const WarningSink& warn = warn_to_stderr);

// Itemset-style display row: singletons carry support only; larger sets
// carry the metrics of their maximum-confidence rule (if any survived).
struct ItemsetRow {
    Itemset items;
    double support = 0.0;
    std::optional<AssociationRule> best_rule;
};

std::vector<ItemsetRow> itemset_table(std::span<const FrequentItemset> itemsets,
                                      std::span<const AssociationRule> rules);

// Columns: antecedent,consequent,support,confidence,lift,leverage,conviction.
// Items are ';'-joined; an empty conviction cell means +infinity.
void write_rules_csv(std::ostream& out, std::span<const AssociationRule> rules);
std::vector<AssociationRule> read_rules_csv(std::istream& in);

std::string join_items(const Itemset& items, char separator = ';');

} // namespace atrs
