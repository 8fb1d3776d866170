#pragma once

#include "atrs/catalog.hpp"
#include "atrs/embeddings.hpp"
#include "atrs/history.hpp"
#include "atrs/mining.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atrs {

struct RecommenderConfig {
    std::size_t top_n = 5;
    MiningConfig mining;
    std::size_t remine_every = 1;  // appends between rule refreshes

    void validate() const;
};

struct Advice {
    std::string query;
    std::optional<Item> exact;
    std::vector<Item> partials;
    std::vector<ScoredItem> similar;
    std::vector<ScoredItem> rule_recommendations;
    bool recorded = false;
};

// Ranks rule items by cosine to the query vector. Candidates are the
// catalog items named in rules that touch an anchor (the exact match, and
// the query itself when it occurs in the mined history); when no rule
// touches an anchor, every catalog item named in any rule. The query's own
// item is never recommended back.
std::vector<ScoredItem> rule_recommendations(std::string_view query, const Catalog& catalog,
                                             const SimilarityIndex& index, const EmbeddingTable& table,
                                             const MinedRules& rules, std::size_t top_n);

// Everything in Advice except recording; read-only over its inputs.
Advice compute_advice(std::string_view query, const Catalog& catalog, const SimilarityIndex& index,
                      const EmbeddingTable& table, const MinedRules& rules, const RecommenderConfig& config);

// Owns the query pipeline state: immutable catalog/embeddings, the history
// store and an atomically swapped rule snapshot refreshed every
// `remine_every` appends. Safe to call from concurrent threads.
class Advisor {
public:
    using Clock = std::function<Timestamp()>;

    Advisor(std::shared_ptr<const Catalog> catalog, std::shared_ptr<const EmbeddingTable> table,
            HistoryStore history, RecommenderConfig config, Clock clock = &Timestamp::now);

    // compute_advice, then records the query per the history policy when
    // `record` is set. `top_n` overrides the configured list length.
    Advice advise(std::string_view query, bool record = true, std::optional<std::size_t> top_n = std::nullopt);

    // Records an explicit multi-item session. `in_catalog` is true when
    // every item has an exact catalog match.
    std::optional<SearchSession> record(std::span<const std::string> items);

    std::shared_ptr<const MinedRules> rules() const;
    // Mines the current history with other thresholds without touching the
    // shared snapshot.
    MinedRules mine_with(const MiningConfig& config) const;
    void refresh_rules();

    std::vector<SearchSession> history_snapshot() const { return history_.sessions(); }
    const HistoryStore& history() const noexcept { return history_; }

    // When set, the history file is rewritten after every append.
    void set_history_path(std::optional<std::filesystem::path> path);
    void persist() const;

    const Catalog& catalog() const noexcept { return *catalog_; }
    const EmbeddingTable& embeddings() const noexcept { return *table_; }
    const RecommenderConfig& config() const noexcept { return config_; }

private:
    void after_append();

    std::shared_ptr<const Catalog> catalog_;
    std::shared_ptr<const EmbeddingTable> table_;
    SimilarityIndex index_;
    HistoryStore history_;
    RecommenderConfig config_;
    Clock clock_;

    mutable std::mutex rules_mutex_;
    std::shared_ptr<const MinedRules> rules_;

    std::mutex write_mutex_;
    std::size_t appends_since_mine_ = 0;
    std::optional<std::filesystem::path> history_path_;
};

// Human-readable block: verdict line, category, partials, similar list,
// rule recommendations. Scores to 4 decimals.
void print_advice(std::ostream& out, const Advice& advice);

std::string verdict_line(const Item& item);

struct ReplPaths {
    std::filesystem::path catalog;
    std::filesystem::path embeddings;
    std::filesystem::path history = "user_searches.csv";
};

// Reads queries line by line until "exit" or EOF. Loading failures print a
// diagnostic to `err` and return 1.
int run_repl(const RecommenderConfig& config, const ReplPaths& paths, bool record_in_catalog,
             std::istream& in, std::ostream& out, std::ostream& err,
             Advisor::Clock clock = &Timestamp::now);

} // namespace atrs
