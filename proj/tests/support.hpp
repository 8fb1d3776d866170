#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include "atrs/mining.hpp"
#include "atrs/transactions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace atrs_test {

namespace fs = std::filesystem;

inline std::string data_path(const std::string& name)
{
    return std::string(ATRS_DATA_DIR) + "/" + name;
}

inline std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("atrs-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

// The four-session history behind the published results table.
inline std::vector<atrs::Itemset> f4()
{
    return {{"coffee", "ipod", "piano"}, {"coffee", "ipod", "piano"}, {"aerosol"}, {"guitar"}};
}

// Transactions containing every item of `s`, by direct scan.
inline std::size_t naive_count(const std::vector<atrs::Itemset>& transactions, const atrs::Itemset& s)
{
    std::size_t n = 0;
    for (const auto& t : transactions) {
        bool all = true;
        for (const auto& item : s) {
            if (std::find(t.begin(), t.end(), item) == t.end()) {
                all = false;
                break;
            }
        }
        n += all ? 1 : 0;
    }
    return n;
}

inline double naive_support(const std::vector<atrs::Itemset>& transactions, const atrs::Itemset& s)
{
    return static_cast<double>(naive_count(transactions, s)) / static_cast<double>(transactions.size());
}

// Every non-empty subset of the universe whose support clears the bar.
inline std::map<atrs::Itemset, std::size_t> brute_force_itemsets(const std::vector<atrs::Itemset>& transactions,
                                                                 double min_support, std::size_t max_size = 64)
{
    std::vector<std::string> universe;
    for (const auto& t : transactions) {
        universe.insert(universe.end(), t.begin(), t.end());
    }
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    std::map<atrs::Itemset, std::size_t> out;
    const std::uint64_t limit = std::uint64_t{1} << universe.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        atrs::Itemset s;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                s.push_back(universe[i]);
            }
        }
        if (s.size() > max_size) {
            continue;
        }
        const auto count = naive_count(transactions, s);
        if (static_cast<double>(count) / static_cast<double>(transactions.size()) >= min_support) {
            out.emplace(std::move(s), count);
        }
    }
    return out;
}

struct RandomInstance {
    std::vector<atrs::Itemset> transactions;
    double min_support = 0.5;
};

// <= 8 items, 1..12 non-empty transactions, min_support in {0.1, ..., 0.9}.
inline RandomInstance random_instance(std::mt19937_64& rng)
{
    static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::uniform_int_distribution<int> n_items(1, 8), n_tx(1, 12), tenth(1, 9);
    const int items = n_items(rng);
    const int count = n_tx(rng);
    std::bernoulli_distribution pick(std::uniform_real_distribution<double>(0.15, 0.75)(rng));
    std::uniform_int_distribution<int> any(0, items - 1);

    RandomInstance inst;
    for (int t = 0; t < count; ++t) {
        std::vector<std::string> tx;
        for (int i = 0; i < items; ++i) {
            if (pick(rng)) {
                tx.push_back(names[static_cast<std::size_t>(i)]);
            }
        }
        if (tx.empty()) {
            tx.push_back(names[static_cast<std::size_t>(any(rng))]);
        }
        inst.transactions.push_back(atrs::make_itemset(std::move(tx)));
    }
    inst.min_support = tenth(rng) / 10.0;
    return inst;
}

// Empty string when every metric of `rule` agrees with its defining formula
// recomputed from scratch; otherwise a description of the first mismatch.
inline std::string rule_identity_error(const atrs::AssociationRule& rule,
                                       const std::vector<atrs::Itemset>& transactions, double tol = 1e-9)
{
    atrs::Itemset both = rule.antecedent;
    both.insert(both.end(), rule.consequent.begin(), rule.consequent.end());
    both = atrs::make_itemset(both);
    const double sa = naive_support(transactions, rule.antecedent);
    const double sc = naive_support(transactions, rule.consequent);
    const double sac = naive_support(transactions, both);
    const std::string name = atrs::join_items(rule.antecedent) + " -> " + atrs::join_items(rule.consequent);

    auto off = [&](double a, double b) { return !(std::fabs(a - b) <= tol); };
    if (both.size() != rule.antecedent.size() + rule.consequent.size()) {
        return name + ": antecedent and consequent overlap";
    }
    if (off(rule.support, sac)) {
        return name + ": support";
    }
    if (off(rule.confidence * sa, sac)) {
        return name + ": conf*supp(A) != supp(A u C)";
    }
    if (off(rule.lift * sc, rule.confidence)) {
        return name + ": lift*supp(C) != conf";
    }
    if (off(rule.leverage, sac - sa * sc)) {
        return name + ": leverage";
    }
    if (std::fabs(rule.lift - 1.0) <= tol != std::fabs(rule.leverage) <= tol) {
        return name + ": lift = 1 <=> leverage = 0";
    }
    if (rule.confidence >= 1.0 - 1e-15) {
        if (!rule.conviction_infinite()) {
            return name + ": conviction should be infinite";
        }
    } else if (rule.conviction_infinite() || off(rule.conviction * (1.0 - rule.confidence), 1.0 - sc)) {
        return name + ": conviction";
    }
    if (!(rule.confidence > 0.0 && rule.confidence <= 1.0) || rule.leverage < -0.25 || rule.leverage > 0.25) {
        return name + ": metric out of range";
    }
    return {};
}

} // namespace atrs_test
