#include "atrs/embeddings.hpp"

#include "text_detail.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace atrs {

namespace {

constexpr std::size_t kMaxDuplicateWarnings = 5;

std::vector<std::string_view> split_spaces(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto start = line.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) {
            break;
        }
        auto end = line.find_first_of(" \t\r", start);
        if (end == std::string_view::npos) {
            end = line.size();
        }
        fields.push_back(line.substr(start, end - start));
        pos = end;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& value)
{
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

} // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension)
{
    if (dimension == 0) {
        throw std::invalid_argument("embedding dimension must be at least 1");
    }
}

bool EmbeddingTable::contains(std::string_view token) const
{
    return index_.find(token) != index_.end();
}

std::span<const float> EmbeddingTable::lookup(std::string_view token) const
{
    const auto it = index_.find(token);
    if (it == index_.end()) {
        return {};
    }
    return std::span<const float>(data_).subspan(it->second * dimension_, dimension_);
}

bool EmbeddingTable::insert(std::string token, std::span<const float> values)
{
    if (dimension_ == 0) {
        throw std::invalid_argument("embedding table has no dimension");
    }
    if (values.size() != dimension_) {
        throw std::invalid_argument("vector for '" + token + "' has " + std::to_string(values.size()) +
                                    " entries, expected " + std::to_string(dimension_));
    }
    if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos) {
        throw std::invalid_argument("token must be non-empty and contain no whitespace");
    }
    if (!std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); })) {
        throw std::invalid_argument("non-finite value in vector for '" + token + "'");
    }
    if (contains(token)) {
        return false;
    }
    const std::size_t row = index_.size();
    data_.insert(data_.end(), values.begin(), values.end());
    index_.emplace(std::move(token), row);
    return true;
}

EmbeddingTable load_embeddings(std::istream& in, const WarningSink& warn)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("embedding file is empty");
    }
    const auto header = split_spaces(line);
    long long declared_count = 0;
    long long dimension = 0;
    if (header.size() != 2 || !parse_number(header[0], declared_count) || !parse_number(header[1], dimension) ||
        declared_count < 0) {
        throw DataError("malformed header, expected \"<count> <dimension>\"", 1);
    }
    if (dimension < 1) {
        throw DataError("dimension must be at least 1", 1);
    }

    EmbeddingTable table(static_cast<std::size_t>(dimension));
    std::vector<float> values(static_cast<std::size_t>(dimension));
    std::size_t line_number = 1;
    std::size_t rows = 0;
    std::size_t duplicates = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto fields = split_spaces(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != values.size() + 1) {
            throw DataError("expected a token and " + std::to_string(dimension) + " values, got " +
                                std::to_string(fields.size() - 1) + " values",
                            line_number);
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!parse_number(fields[i + 1], values[i])) {
                throw DataError("unparseable value '" + std::string(fields[i + 1]) + "'", line_number);
            }
            if (!std::isfinite(values[i])) {
                throw DataError("non-finite value '" + std::string(fields[i + 1]) + "'", line_number);
            }
        }
        ++rows;
        std::string token = detail::to_lower_utf8(fields[0]);
        if (!table.insert(token, values)) {
            ++duplicates;
            if (warn && duplicates <= kMaxDuplicateWarnings) {
                warn("duplicate token '" + token + "' on line " + std::to_string(line_number) +
                     "; keeping the first occurrence");
            }
        }
    }
    if (warn) {
        if (duplicates > kMaxDuplicateWarnings) {
            warn(std::to_string(duplicates) + " duplicate tokens in total; first occurrences kept");
        }
        if (static_cast<long long>(rows) != declared_count) {
            warn("header declares " + std::to_string(declared_count) + " vectors but " + std::to_string(rows) +
                 " were read");
        }
    }
    return table;
}

EmbeddingTable load_embeddings_file(const std::string& path, const WarningSink& warn)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open embedding file '" + path + "'");
    }
    return load_embeddings(in, warn);
}

std::optional<PhraseVector> embed_phrase(const EmbeddingTable& table, std::span<const std::string> tokens)
{
    PhraseVector phrase;
    phrase.values.assign(table.dimension(), 0.0);
    for (const auto& token : tokens) {
        const auto vec = table.lookup(token);
        if (vec.empty()) {
            continue;
        }
        for (std::size_t i = 0; i < vec.size(); ++i) {
            phrase.values[i] += static_cast<double>(vec[i]);
        }
        ++phrase.token_hits;
    }
    if (phrase.token_hits == 0) {
        return std::nullopt;
    }
    const double n = static_cast<double>(phrase.token_hits);
    for (auto& v : phrase.values) {
        v /= n;
    }
    return phrase;
}

std::optional<PhraseVector> embed_text(const EmbeddingTable& table, std::string_view text)
{
    const auto tokens = tokenize(text);
    return embed_phrase(table, tokens);
}

double cosine(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw std::invalid_argument("cosine: length mismatch (" + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()) + ")");
    }
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) {
        throw std::invalid_argument("cosine: zero-norm vector");
    }
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

} // namespace atrs
