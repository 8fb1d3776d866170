#include "atrs/recommender.hpp"

#include "atrs/csv.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <stdexcept>

namespace atrs {

namespace {

std::optional<std::size_t> position_of(const Catalog& catalog, std::string_view name)
{
    const Item* item = catalog.find(name);
    if (item == nullptr) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(item - catalog.items().data());
}

const char* yes_no(bool flag)
{
    return flag ? "yes" : "no";
}

} // namespace

void RecommenderConfig::validate() const
{
    if (top_n < 1) {
        throw std::invalid_argument("top_n must be at least 1");
    }
    if (remine_every < 1) {
        throw std::invalid_argument("remine_every must be at least 1");
    }
    mining.validate();
}

std::vector<ScoredItem> rule_recommendations(std::string_view query, const Catalog& catalog,
                                             const SimilarityIndex& index, const EmbeddingTable& table,
                                             const MinedRules& rules, std::size_t top_n)
{
    const auto query_vec = embed_text(table, query);
    if (!query_vec || rules.rules.empty()) {
        return {};
    }
    const std::string name = normalize(query);

    std::set<std::string> anchors;
    if (catalog.find(name) != nullptr) {
        anchors.insert(name);
    }
    if (std::binary_search(rules.universe.begin(), rules.universe.end(), name)) {
        anchors.insert(name);
    }

    auto touches = [&](const AssociationRule& rule) {
        for (const auto* side : {&rule.antecedent, &rule.consequent}) {
            for (const auto& item : *side) {
                if (anchors.count(item) != 0) {
                    return true;
                }
            }
        }
        return false;
    };
    auto collect = [&](bool only_touching) {
        std::set<std::string> items;
        for (const auto& rule : rules.rules) {
            if (only_touching && !touches(rule)) {
                continue;
            }
            items.insert(rule.antecedent.begin(), rule.antecedent.end());
            items.insert(rule.consequent.begin(), rule.consequent.end());
        }
        return items;
    };

    auto candidates = collect(true);
    if (candidates.empty()) {
        candidates = collect(false);
    }
    candidates.erase(name);

    std::vector<std::size_t> positions;
    for (const auto& item : candidates) {
        if (const auto pos = position_of(catalog, item)) {
            positions.push_back(*pos);
        }
    }
    if (positions.empty()) {
        return {};
    }
    return index.rank(*query_vec, top_n, positions);
}

Advice compute_advice(std::string_view query, const Catalog& catalog, const SimilarityIndex& index,
                      const EmbeddingTable& table, const MinedRules& rules, const RecommenderConfig& config)
{
    Advice advice;
    advice.query = std::string(query);
    advice.exact = exact_lookup(catalog, query);
    advice.partials = partial_matches(catalog, query);
    if (const auto query_vec = embed_text(table, query)) {
        advice.similar = index.rank(*query_vec, config.top_n);
    }
    advice.rule_recommendations = rule_recommendations(query, catalog, index, table, rules, config.top_n);
    return advice;
}

Advisor::Advisor(std::shared_ptr<const Catalog> catalog, std::shared_ptr<const EmbeddingTable> table,
                 HistoryStore history, RecommenderConfig config, Clock clock)
    : catalog_(std::move(catalog)),
      table_(std::move(table)),
      index_(*catalog_, *table_),
      history_(std::move(history)),
      config_(std::move(config)),
      clock_(std::move(clock))
{
    config_.validate();
    refresh_rules();
}

Advice Advisor::advise(std::string_view query, bool record, std::optional<std::size_t> top_n)
{
    RecommenderConfig config = config_;
    if (top_n) {
        config.top_n = *top_n;
        config.validate();
    }
    Advice advice = compute_advice(query, *catalog_, index_, *table_, *rules(), config);
    if (record && !normalize(query).empty()) {
        const std::string item(query);
        std::lock_guard lock(write_mutex_);
        if (history_.record_search(std::span<const std::string>(&item, 1), clock_(), advice.exact.has_value())) {
            advice.recorded = true;
            after_append();
        }
    }
    return advice;
}

std::optional<SearchSession> Advisor::record(std::span<const std::string> items)
{
    const bool in_catalog = !items.empty() && std::all_of(items.begin(), items.end(), [&](const std::string& item) {
        return catalog_->find(normalize(item)) != nullptr;
    });
    std::lock_guard lock(write_mutex_);
    auto session = history_.record_search(items, clock_(), in_catalog);
    if (session) {
        after_append();
    }
    return session;
}

void Advisor::after_append()
{
    persist();
    if (++appends_since_mine_ >= config_.remine_every) {
        refresh_rules();
    }
}

std::shared_ptr<const MinedRules> Advisor::rules() const
{
    std::lock_guard lock(rules_mutex_);
    return rules_;
}

MinedRules Advisor::mine_with(const MiningConfig& config) const
{
    return mine(to_transactions(history_), config);
}

void Advisor::refresh_rules()
{
    auto fresh = std::make_shared<const MinedRules>(mine_with(config_.mining));
    std::lock_guard lock(rules_mutex_);
    rules_ = std::move(fresh);
    appends_since_mine_ = 0;
}

void Advisor::set_history_path(std::optional<std::filesystem::path> path)
{
    std::lock_guard lock(write_mutex_);
    history_path_ = std::move(path);
}

void Advisor::persist() const
{
    if (history_path_) {
        save_history_file(history_, *history_path_);
    }
}

std::string verdict_line(const Item& item)
{
    return std::string("carry on: ") + yes_no(item.carry_on) + " | check in: " + yes_no(item.check_in) +
           " | prohibited: " + yes_no(item.prohibited);
}

void print_advice(std::ostream& out, const Advice& advice)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::fixed << std::setprecision(4);

    auto list = [&](const char* title, const std::vector<ScoredItem>& items) {
        out << title << ":\n";
        if (items.empty()) {
            out << "  (none)\n";
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& s = items[i];
            out << "  " << i + 1 << ". " << s.item.name << "  " << s.score << "  [" << s.item.category << "; "
                << verdict_line(s.item) << "]\n";
        }
    };

    if (advice.exact) {
        out << advice.exact->name << '\n' << verdict_line(*advice.exact) << '\n';
        out << "category: " << advice.exact->category << '\n';
    } else {
        out << "no exact match for '" << advice.query << "'\n";
        if (!advice.partials.empty()) {
            out << "partial matches:\n";
            for (const auto& item : advice.partials) {
                out << "  - " << item.name << "  [" << item.category << "; " << verdict_line(item) << "]\n";
            }
        }
    }
    list("similar items", advice.similar);
    list("rule recommendations", advice.rule_recommendations);

    out.flags(flags);
    out.precision(precision);
}

int run_repl(const RecommenderConfig& config, const ReplPaths& paths, bool record_in_catalog, std::istream& in,
             std::ostream& out, std::ostream& err, Advisor::Clock clock)
{
    std::unique_ptr<Advisor> advisor;
    try {
        auto catalog = std::make_shared<const Catalog>(load_catalog_file(paths.catalog.string()));
        auto table = std::make_shared<const EmbeddingTable>(load_embeddings_file(
            paths.embeddings.string(), [&err](const std::string& msg) { err << "warning: " << msg << '\n'; }));
        auto history = load_history_file(paths.history, record_in_catalog);
        advisor = std::make_unique<Advisor>(std::move(catalog), std::move(table), std::move(history), config,
                                            std::move(clock));
        advisor->set_history_path(paths.history);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    bool dirty = false;
    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        const auto query = csv::trim(line);
        if (query == "exit") {
            break;
        }
        if (query.empty()) {
            continue;
        }
        try {
            const Advice advice = advisor->advise(query);
            dirty = dirty || advice.recorded;
            print_advice(out, advice);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
        }
    }
    out << '\n';
    if (dirty) {
        try {
            advisor->persist();
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}

} // namespace atrs
