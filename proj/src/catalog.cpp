#include "atrs/catalog.hpp"

#include "atrs/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace atrs {

namespace {

std::string column_key(std::string_view name)
{
    std::string key;
    for (char ch : name) {
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isspace(uch) || ch == '-' || ch == '_') {
            continue;
        }
        key.push_back(static_cast<char>(std::tolower(uch)));
    }
    return key;
}

bool parse_yes_no(const std::string& cell, std::string_view column, std::size_t row)
{
    std::string value = csv::trim(cell);
    std::transform(value.begin(), value.end(), value.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (value == "yes") {
        return true;
    }
    if (value == "no") {
        return false;
    }
    throw DataError("column '" + std::string(column) + "' must be yes or no, got '" + cell + "'", row);
}

void check_item(const Item& item, std::size_t row)
{
    if (item.name.empty()) {
        throw DataError("item name is empty after normalization", row);
    }
    if (item.prohibited && (item.carry_on || item.check_in)) {
        throw DataError("prohibited item '" + item.name + "' is marked " +
                            (item.carry_on ? "carry-on" : "check-in") + " allowed",
                        row);
    }
}

struct ScoreOrder {
    bool operator()(const ScoredItem& a, const ScoredItem& b) const
    {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.item.name < b.item.name;
    }
};

bool has_norm(const PhraseVector& v)
{
    return std::any_of(v.values.begin(), v.values.end(), [](double x) { return x != 0.0; });
}

} // namespace

Catalog::Catalog(std::vector<Item> items) : items_(std::move(items))
{
    for (std::size_t i = 0; i < items_.size(); ++i) {
        check_item(items_[i], 0);
        if (!by_name_.emplace(items_[i].name, i).second) {
            throw DataError("duplicate item name '" + items_[i].name + "'");
        }
        if (!items_[i].category.empty()) {
            categories_.insert(items_[i].category);
        }
    }
}

const Item* Catalog::find(std::string_view normalized_name) const
{
    const auto it = by_name_.find(std::string(normalized_name));
    return it == by_name_.end() ? nullptr : &items_[it->second];
}

Catalog load_catalog(std::istream& in)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) {
        throw DataError("catalog file is empty");
    }

    struct Column {
        const char* key;
        const char* label;
        bool required;
        std::optional<std::size_t> position;
    };
    std::array<Column, 6> columns{{
        {"itemname", "Item name", true, {}},
        {"carryon", "Carry on", true, {}},
        {"checkin", "Check in", true, {}},
        {"prohibited", "Prohibited", true, {}},
        {"category", "Category", true, {}},
        {"itemdescription", "ItemDescription", false, {}},
    }};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto key = column_key(fields[i]);
        for (auto& col : columns) {
            if (key == col.key && !col.position) {
                col.position = i;
            }
        }
    }
    for (const auto& col : columns) {
        if (col.required && !col.position) {
            throw DataError("missing required column '" + std::string(col.label) + "'", 1);
        }
    }
    auto cell = [&](const Column& col) -> std::string {
        if (!col.position || *col.position >= fields.size()) {
            return {};
        }
        return fields[*col.position];
    };

    std::vector<Item> items;
    std::unordered_map<std::string, std::size_t> first_row;
    while (reader.next(fields)) {
        const std::size_t row = reader.record_number();
        if (std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return csv::trim(f).empty(); })) {
            continue;
        }
        Item item;
        item.name = normalize(cell(columns[0]));
        item.carry_on = parse_yes_no(cell(columns[1]), columns[1].label, row);
        item.check_in = parse_yes_no(cell(columns[2]), columns[2].label, row);
        item.prohibited = parse_yes_no(cell(columns[3]), columns[3].label, row);
        item.category = csv::trim(cell(columns[4]));
        if (auto description = csv::trim(cell(columns[5])); !description.empty()) {
            item.description = std::move(description);
        }
        check_item(item, row);
        if (const auto [it, inserted] = first_row.emplace(item.name, row); !inserted) {
            throw DataError("duplicate item name '" + item.name + "' (first seen on row " +
                                std::to_string(it->second) + ")",
                            row);
        }
        items.push_back(std::move(item));
    }
    return Catalog(std::move(items));
}

Catalog load_catalog_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open catalog file '" + path + "'");
    }
    return load_catalog(in);
}

void save_catalog(const Catalog& catalog, std::ostream& out)
{
    const bool descriptions = std::any_of(catalog.items().begin(), catalog.items().end(),
                                          [](const Item& item) { return item.description.has_value(); });
    std::vector<std::string> row{"Item name", "Carry on", "Check in", "Prohibited", "Category"};
    if (descriptions) {
        row.emplace_back("ItemDescription");
    }
    csv::write_row(out, row);
    auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
    for (const auto& item : catalog.items()) {
        row = {item.name, yn(item.carry_on), yn(item.check_in), yn(item.prohibited), item.category};
        if (descriptions) {
            row.push_back(item.description.value_or(""));
        }
        csv::write_row(out, row);
    }
}

std::optional<Item> exact_lookup(const Catalog& catalog, std::string_view query)
{
    if (const Item* item = catalog.find(normalize(query))) {
        return *item;
    }
    return std::nullopt;
}

std::vector<Item> partial_matches(const Catalog& catalog, std::string_view query)
{
    const auto needle = normalize(query);
    std::vector<Item> matches;
    if (needle.empty()) {
        return matches;
    }
    for (const auto& item : catalog.items()) {
        if (item.name != needle && item.name.find(needle) != std::string::npos) {
            matches.push_back(item);
        }
    }
    return matches;
}

SimilarityIndex::SimilarityIndex(const Catalog& catalog, const EmbeddingTable& table) : catalog_(&catalog)
{
    vectors_.reserve(catalog.size());
    for (const auto& item : catalog.items()) {
        auto vec = embed_text(table, item.name);
        if (vec && !has_norm(*vec)) {
            vec.reset();
        }
        rankable_ += vec.has_value() ? 1 : 0;
        vectors_.push_back(std::move(vec));
    }
}

std::vector<ScoredItem> SimilarityIndex::rank(const PhraseVector& query, std::size_t n,
                                              std::span<const std::size_t> candidates) const
{
    std::vector<ScoredItem> scored;
    if (n == 0 || !has_norm(query)) {
        return scored;
    }
    auto score = [&](std::size_t position) {
        const auto& vec = vectors_.at(position);
        if (vec) {
            scored.push_back({catalog_->items()[position], cosine(query.values, vec->values)});
        }
    };
    if (candidates.empty()) {
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            score(i);
        }
    } else {
        for (auto position : candidates) {
            score(position);
        }
    }
    const auto keep = std::min(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      ScoreOrder{});
    scored.resize(keep);
    return scored;
}

std::vector<ScoredItem> top_similar(const Catalog& catalog, const EmbeddingTable& table, std::string_view query,
                                    std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("top_similar: n must be at least 1");
    }
    const auto query_vec = embed_text(table, query);
    if (!query_vec) {
        return {};
    }
    return SimilarityIndex(catalog, table).rank(*query_vec, n);
}

Catalog assign_categories(const Catalog& catalog, const EmbeddingTable& table, std::span<const std::string> labels)
{
    if (labels.empty()) {
        throw std::invalid_argument("assign_categories: no category labels");
    }
    std::vector<std::pair<std::string, PhraseVector>> label_vectors;
    for (const auto& raw : labels) {
        auto label = csv::trim(raw);
        auto vec = embed_text(table, label);
        if (!vec || !has_norm(*vec)) {
            throw std::invalid_argument("category label '" + label + "' has no embedding");
        }
        label_vectors.emplace_back(std::move(label), std::move(*vec));
    }
    std::sort(label_vectors.begin(), label_vectors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const SimilarityIndex index(catalog, table);
    std::vector<Item> items = catalog.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& vec = index.vector_at(i);
        if (!vec) {
            continue;
        }
        const std::string* best = nullptr;
        double best_score = -2.0;
        for (const auto& [label, label_vec] : label_vectors) {
            const double s = cosine(vec->values, label_vec.values);
            if (s > best_score) {
                best_score = s;
                best = &label;
            }
        }
        items[i].category = *best;
    }
    return Catalog(std::move(items));
}

DistributionStats distribution_stats(const Catalog& catalog)
{
    DistributionStats stats;
    auto tally = [](YesNo& counts, bool flag) { ++(flag ? counts.yes : counts.no); };
    for (const auto& item : catalog.items()) {
        ++stats.total;
        tally(stats.carry_on, item.carry_on);
        tally(stats.check_in, item.check_in);
        tally(stats.prohibited, item.prohibited);
        ++stats.per_category[item.category];
        ++stats.carry_on_by_check_in[item.carry_on ? 1 : 0][item.check_in ? 1 : 0];
        tally(stats.prohibited_by_category[item.category], item.prohibited);
    }
    stats.category_count = catalog.categories().size();
    return stats;
}

} // namespace atrs
