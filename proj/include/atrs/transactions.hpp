#pragma once

#include <istream>
#include <string>
#include <vector>

namespace atrs {

// Sorted, duplicate-free item names.
using Itemset = std::vector<std::string>;

// Sorts and deduplicates in place; returns the result for chaining.
Itemset make_itemset(std::vector<std::string> items);

struct TransactionSet {
    std::vector<Itemset> transactions;
    std::vector<std::string> universe;  // sorted distinct items
};

// Builds the universe from the transactions. Empty transactions are dropped.
TransactionSet make_transaction_set(std::vector<Itemset> transactions);

// Headerless market-basket CSV: one transaction per row, one item per cell.
// Cells are trimmed; blank cells and blank rows are skipped.
TransactionSet load_basket_csv(std::istream& in);
TransactionSet load_basket_csv_file(const std::string& path);

} // namespace atrs
