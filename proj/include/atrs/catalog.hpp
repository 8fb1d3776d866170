#pragma once

#include "atrs/embeddings.hpp"

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace atrs {

struct Item {
    std::string name;  // normalized
    bool carry_on = false;
    bool check_in = false;
    bool prohibited = false;
    std::string category;
    std::optional<std::string> description;

    bool operator==(const Item&) const = default;
};

struct ScoredItem {
    Item item;
    double score = 0.0;
};

// Ordered, validated item list. Construction enforces unique normalized
// names and prohibited => neither carry-on nor check-in.
class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<Item> items);

    const std::vector<Item>& items() const noexcept { return items_; }
    const std::set<std::string>& categories() const noexcept { return categories_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    // Lookup by already-normalized name; nullptr when absent.
    const Item* find(std::string_view normalized_name) const;

private:
    std::vector<Item> items_;
    std::set<std::string> categories_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

// Reads the item CSV. Header names are matched ignoring case, surrounding
// whitespace, inner spaces, '-' and '_'. Rejects the whole file (DataError
// carrying the row number) on the first bad row.
Catalog load_catalog(std::istream& in);
Catalog load_catalog_file(const std::string& path);

void save_catalog(const Catalog& catalog, std::ostream& out);

std::optional<Item> exact_lookup(const Catalog& catalog, std::string_view query);

// Items whose name contains the normalized query, in catalog order,
// excluding the exact match. An empty query matches nothing.
std::vector<Item> partial_matches(const Catalog& catalog, std::string_view query);

// Precomputed item phrase vectors for repeated ranking. Items with no
// in-vocabulary token (or a zero vector) are not rankable.
class SimilarityIndex {
public:
    SimilarityIndex(const Catalog& catalog, const EmbeddingTable& table);

    // Top-n by cosine, sorted (score desc, name asc). `candidates`, when
    // given, restricts ranking to those catalog positions.
    std::vector<ScoredItem> rank(const PhraseVector& query, std::size_t n,
                                 std::span<const std::size_t> candidates = {}) const;

    const std::optional<PhraseVector>& vector_at(std::size_t position) const
    {
        return vectors_.at(position);
    }

    std::size_t rankable_count() const noexcept { return rankable_; }

private:
    const Catalog* catalog_;
    std::vector<std::optional<PhraseVector>> vectors_;
    std::size_t rankable_ = 0;
};

// Throws std::invalid_argument when n == 0. Empty when the query has no
// in-vocabulary token.
std::vector<ScoredItem> top_similar(const Catalog& catalog, const EmbeddingTable& table,
                                    std::string_view query, std::size_t n);

// Re-labels every embeddable item with the argmax-cosine label (ties go to
// the smaller label). Items without a vector keep their file category.
// Throws std::invalid_argument on an empty label list or a label that does
// not embed.
Catalog assign_categories(const Catalog& catalog, const EmbeddingTable& table,
                          std::span<const std::string> labels);

struct YesNo {
    std::size_t yes = 0;
    std::size_t no = 0;

    bool operator==(const YesNo&) const = default;
};

struct DistributionStats {
    std::size_t total = 0;
    YesNo carry_on;
    YesNo check_in;
    YesNo prohibited;
    // Uncategorized items are counted under "".
    std::map<std::string, std::size_t> per_category;
    std::size_t category_count = 0;  // distinct non-empty categories
    // [carry_on ? 1 : 0][check_in ? 1 : 0]
    std::array<std::array<std::size_t, 2>, 2> carry_on_by_check_in{};
    std::map<std::string, YesNo> prohibited_by_category;
};

DistributionStats distribution_stats(const Catalog& catalog);

} // namespace atrs
