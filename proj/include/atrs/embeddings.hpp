#pragma once

#include "atrs/error.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace atrs {

// Lowercases, replaces every Unicode punctuation code point with a space and
// splits on whitespace runs. No stemming, lemmatization or stop-word removal.
std::vector<std::string> tokenize(std::string_view text);

// tokenize() re-joined with single spaces; the canonical form of item names.
std::string normalize(std::string_view text);

// Mean-pooled phrase vector. Never built from zero known tokens.
struct PhraseVector {
    std::vector<double> values;
    std::size_t token_hits = 0;
};

// Immutable token -> vector table loaded from a word2vec/.vec text file.
// Rows live in one contiguous float buffer.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dimension);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return index_.size(); }
    bool contains(std::string_view token) const;

    // Empty span when the token is out of vocabulary.
    std::span<const float> lookup(std::string_view token) const;

    // Returns false (and stores nothing) when the token is already present.
    // Throws std::invalid_argument on wrong arity, non-finite values or a
    // malformed token.
    bool insert(std::string token, std::span<const float> values);

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept
        {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::size_t dimension_ = 0;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

// Parses "<count> <dim>" then "<token> <dim numbers>" lines. Tokens are
// lowercased; on duplicates the first occurrence wins and a warning is sent
// to `warn`. Throws DataError on a malformed header, wrong arity, non-finite
// values or dimension < 1.
EmbeddingTable load_embeddings(std::istream& in, const WarningSink& warn = warn_to_stderr);
EmbeddingTable load_embeddings_file(const std::string& path, const WarningSink& warn = warn_to_stderr);

// Component-wise mean over in-vocabulary tokens; absent when none is known.
std::optional<PhraseVector> embed_phrase(const EmbeddingTable& table,
                                         std::span<const std::string> tokens);

// Convenience: embed_phrase(table, tokenize(text)).
std::optional<PhraseVector> embed_text(const EmbeddingTable& table, std::string_view text);

// dot(u,v) / (|u| |v|), clamped to [-1, 1]. Throws std::invalid_argument on
// length mismatch or a zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

} // namespace atrs
