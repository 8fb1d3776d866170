#include "atrs/history.hpp"

#include "atrs/csv.hpp"
#include "atrs/embeddings.hpp"
#include "atrs/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace atrs {

namespace {

bool is_leap(int year)
{
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month)
{
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

bool valid(int y, int mo, int d, int h, int mi, int s)
{
    return y >= 1 && y <= 9999 && mo >= 1 && mo <= 12 && d >= 1 && d <= days_in_month(y, mo) && h >= 0 &&
           h <= 23 && mi >= 0 && mi <= 59 && s >= 0 && s <= 59;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

Timestamp::Timestamp(int year, int month, int day, int hour, int minute, int second)
    : year_(year), month_(month), day_(day), hour_(hour), minute_(minute), second_(second)
{
    if (!valid(year, month, day, hour, minute, second)) {
        throw std::invalid_argument("invalid calendar time");
    }
}

Timestamp Timestamp::parse(std::string_view text)
{
    // YYYY-MM-DD HH:MM:SS
    static constexpr std::string_view kShape = "dddd-dd-dd dd:dd:dd";
    auto fail = [&] { return DataError("malformed timestamp '" + std::string(text) + "'"); };
    if (text.size() != kShape.size()) {
        throw fail();
    }
    for (std::size_t i = 0; i < kShape.size(); ++i) {
        const bool digit = std::isdigit(static_cast<unsigned char>(text[i])) != 0;
        if (kShape[i] == 'd' ? !digit : text[i] != kShape[i]) {
            throw fail();
        }
    }
    auto field = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        std::from_chars(text.data() + pos, text.data() + pos + len, value);
        return value;
    };
    const int y = field(0, 4), mo = field(5, 2), d = field(8, 2), h = field(11, 2), mi = field(14, 2),
              s = field(17, 2);
    if (!valid(y, mo, d, h, mi, s)) {
        throw fail();
    }
    return Timestamp(y, mo, d, h, mi, s);
}

Timestamp Timestamp::now()
{
    const std::time_t t = std::time(nullptr);
    std::tm local{};
    localtime_r(&t, &local);
    return Timestamp(local.tm_year + 1900, local.tm_mon + 1, local.tm_mday, local.tm_hour, local.tm_min,
                     std::min(local.tm_sec, 59));
}

std::string Timestamp::str() const
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", year_, month_, day_, hour_, minute_, second_);
    return buf;
}

HistoryStore::HistoryStore(const HistoryStore& other)
{
    std::lock_guard lock(other.mutex_);
    sessions_ = other.sessions_;
    record_in_catalog_ = other.record_in_catalog_;
}

HistoryStore& HistoryStore::operator=(const HistoryStore& other)
{
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        sessions_ = other.sessions_;
        record_in_catalog_ = other.record_in_catalog_;
    }
    return *this;
}

std::optional<SearchSession> HistoryStore::record_search(std::span<const std::string> items, Timestamp now,
                                                         bool in_catalog)
{
    std::vector<std::string> normalized;
    for (const auto& item : items) {
        if (auto name = normalize(item); !name.empty()) {
            normalized.push_back(std::move(name));
        }
    }
    if (normalized.empty()) {
        throw std::invalid_argument("record_search: no item left after normalization");
    }

    std::lock_guard lock(mutex_);
    if (in_catalog && !record_in_catalog_) {
        return std::nullopt;
    }
    SearchSession session;
    session.index = sessions_.empty() ? 0 : sessions_.back().index + 1;
    session.items = std::move(normalized);
    session.timestamp = now;
    sessions_.push_back(session);
    return session;
}

void HistoryStore::append(SearchSession session)
{
    std::lock_guard lock(mutex_);
    if (!sessions_.empty() && session.index <= sessions_.back().index) {
        throw DataError("session index " + std::to_string(session.index) + " does not exceed " +
                        std::to_string(sessions_.back().index));
    }
    sessions_.push_back(std::move(session));
}

std::vector<SearchSession> HistoryStore::sessions() const
{
    std::lock_guard lock(mutex_);
    return sessions_;
}

std::size_t HistoryStore::size() const
{
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

bool HistoryStore::record_in_catalog() const
{
    std::lock_guard lock(mutex_);
    return record_in_catalog_;
}

void HistoryStore::set_record_in_catalog(bool value)
{
    std::lock_guard lock(mutex_);
    record_in_catalog_ = value;
}

bool HistoryStore::operator==(const HistoryStore& other) const
{
    if (this == &other) {
        return true;
    }
    std::scoped_lock lock(mutex_, other.mutex_);
    return sessions_ == other.sessions_ && record_in_catalog_ == other.record_in_catalog_;
}

HistoryStore load_history(std::istream& in, bool record_in_catalog)
{
    HistoryStore store(record_in_catalog);
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) {
        return store;
    }
    if (fields.size() < 2 || lower(csv::trim(fields.front())) != "index" ||
        lower(csv::trim(fields.back())) != "timestamp") {
        throw DataError("history header must be index,item_1..item_K,timestamp", 1);
    }
    const std::size_t width = fields.size();

    while (reader.next(fields)) {
        const std::size_t row = reader.record_number();
        if (std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return csv::trim(f).empty(); })) {
            continue;
        }
        if (fields.size() > width &&
            std::any_of(fields.begin() + static_cast<std::ptrdiff_t>(width), fields.end(),
                        [](const std::string& f) { return !csv::trim(f).empty(); })) {
            throw DataError("more cells than header columns", row);
        }
        // A short row still ends with its timestamp; pad the item cells.
        if (fields.size() < width) {
            std::string timestamp = std::move(fields.back());
            fields.back().clear();
            fields.resize(width);
            fields.back() = std::move(timestamp);
        }
        fields.resize(width);

        SearchSession session;
        const auto index_text = csv::trim(fields.front());
        const auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), session.index);
        if (ec != std::errc() || ptr != index_text.data() + index_text.size() || index_text.empty()) {
            throw DataError("malformed index '" + fields.front() + "'", row);
        }
        for (std::size_t i = 1; i + 1 < width; ++i) {
            if (auto item = normalize(fields[i]); !item.empty()) {
                session.items.push_back(std::move(item));
            }
        }
        try {
            session.timestamp = Timestamp::parse(csv::trim(fields.back()));
            store.append(std::move(session));
        } catch (const DataError& e) {
            throw DataError(e.what(), row);
        }
    }
    return store;
}

HistoryStore load_history_file(const std::filesystem::path& path, bool record_in_catalog)
{
    std::ifstream in(path);
    if (!in) {
        if (std::filesystem::exists(path)) {
            throw DataError("cannot read history file '" + path.string() + "'");
        }
        return HistoryStore(record_in_catalog);
    }
    return load_history(in, record_in_catalog);
}

void save_history(const HistoryStore& store, std::ostream& out)
{
    const auto sessions = store.sessions();
    std::size_t width = 1;
    for (const auto& s : sessions) {
        width = std::max(width, s.items.size());
    }
    std::vector<std::string> row{"index"};
    for (std::size_t i = 1; i <= width; ++i) {
        row.push_back("item_" + std::to_string(i));
    }
    row.emplace_back("timestamp");
    csv::write_row(out, row);
    for (const auto& s : sessions) {
        row.assign(width + 2, std::string());
        row.front() = std::to_string(s.index);
        std::copy(s.items.begin(), s.items.end(), row.begin() + 1);
        row.back() = s.timestamp.str();
        csv::write_row(out, row);
    }
}

void save_history_file(const HistoryStore& store, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw DataError("cannot write history file '" + tmp.string() + "'");
        }
        save_history(store, out);
        out.flush();
        if (!out) {
            throw DataError("failed writing history file '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

TransactionSet to_transactions(std::span<const SearchSession> sessions)
{
    std::vector<Itemset> transactions;
    transactions.reserve(sessions.size());
    for (const auto& s : sessions) {
        transactions.push_back(s.items);
    }
    return make_transaction_set(std::move(transactions));
}

TransactionSet to_transactions(const HistoryStore& store)
{
    return to_transactions(store.sessions());
}

} // namespace atrs
