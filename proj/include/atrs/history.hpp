#pragma once

#include "atrs/transactions.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atrs {

// Wall-clock time at second precision, formatted "YYYY-MM-DD HH:MM:SS".
class Timestamp {
public:
    Timestamp() = default;
    Timestamp(int year, int month, int day, int hour, int minute, int second);

    // Throws DataError unless `text` is exactly a valid "YYYY-MM-DD HH:MM:SS".
    static Timestamp parse(std::string_view text);
    // Current local time.
    static Timestamp now();

    std::string str() const;

    auto operator<=>(const Timestamp&) const = default;

private:
    int year_ = 1970, month_ = 1, day_ = 1, hour_ = 0, minute_ = 0, second_ = 0;
};

struct SearchSession {
    std::uint64_t index = 0;
    std::vector<std::string> items;  // normalized, in search order
    Timestamp timestamp;

    bool operator==(const SearchSession&) const = default;
};

// Append-only search log. Writers are serialized; readers get snapshots.
class HistoryStore {
public:
    explicit HistoryStore(bool record_in_catalog = false) : record_in_catalog_(record_in_catalog) {}
    HistoryStore(const HistoryStore& other);
    HistoryStore& operator=(const HistoryStore& other);

    // Normalizes `items` and drops empties. Returns nullopt without storing
    // when `in_catalog` is set and record_in_catalog() is false. Throws
    // std::invalid_argument when nothing remains after normalization.
    std::optional<SearchSession> record_search(std::span<const std::string> items, Timestamp now,
                                               bool in_catalog);

    // Appends a pre-built session; throws DataError when its index does not
    // exceed the last one.
    void append(SearchSession session);

    std::vector<SearchSession> sessions() const;
    std::size_t size() const;

    bool record_in_catalog() const;
    void set_record_in_catalog(bool value);

    bool operator==(const HistoryStore& other) const;

private:
    mutable std::mutex mutex_;
    std::vector<SearchSession> sessions_;
    bool record_in_catalog_;
};

// Reads `index,item_1..item_K,timestamp`. Short rows are padded in the item
// columns (their last cell is the timestamp); blank cells are ignored.
// Throws DataError on a bad header, index or timestamp.
HistoryStore load_history(std::istream& in, bool record_in_catalog = false);
// A missing file yields an empty store.
HistoryStore load_history_file(const std::filesystem::path& path, bool record_in_catalog = false);

// Writes K = max(1, widest session) item columns.
void save_history(const HistoryStore& store, std::ostream& out);
// Writes to a sibling temp file, then renames over `path`.
void save_history_file(const HistoryStore& store, const std::filesystem::path& path);

// One itemset per non-empty session plus the sorted universe.
TransactionSet to_transactions(std::span<const SearchSession> sessions);
TransactionSet to_transactions(const HistoryStore& store);

} // namespace atrs
