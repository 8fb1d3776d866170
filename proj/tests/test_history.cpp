#include "atrs/error.hpp"
#include "atrs/history.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace atrs;

namespace {

const Timestamp kT0(2023, 7, 29, 19, 26, 7);

std::vector<std::string> one(const std::string& item)
{
    return {item};
}

HistoryStore parse(const std::string& text, bool flag = false)
{
    std::istringstream in(text);
    return load_history(in, flag);
}

std::string dump(const HistoryStore& store)
{
    std::ostringstream out;
    save_history(store, out);
    return out.str();
}

HistoryStore random_store(std::mt19937_64& rng, std::size_t sessions)
{
    static const std::vector<std::string> vocab = {"coffee", "ipod", "piano", "aerosol", "guitar", "baby wipes",
                                                   "tear gas", "pickle", "caf\xC3\xA9", "power bank"};
    std::uniform_int_distribution<std::size_t> width(1, 4), pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> gap(0, 86400 * 3);
    std::uniform_int_distribution<std::uint64_t> skip(1, 3);
    HistoryStore store;
    std::uint64_t index = 0;
    long seconds = 0;
    for (std::size_t s = 0; s < sessions; ++s) {
        SearchSession session;
        index += skip(rng);
        session.index = index;
        const auto w = width(rng);
        for (std::size_t i = 0; i < w; ++i) {
            session.items.push_back(vocab[pick(rng)]);
        }
        seconds += gap(rng);
        const long day = seconds / 86400, rest = seconds % 86400;
        session.timestamp = Timestamp(2023, 8, 1 + static_cast<int>(day % 28), static_cast<int>(rest / 3600),
                                      static_cast<int>(rest / 60 % 60), static_cast<int>(rest % 60));
        store.append(session);
    }
    return store;
}

} // namespace

TEST_CASE("timestamp parse and format")
{
    CHECK(Timestamp::parse("2023-07-29 19:26:07") == kT0);
    CHECK(kT0.str() == "2023-07-29 19:26:07");
    CHECK(Timestamp::parse("2024-02-29 00:00:00").str() == "2024-02-29 00:00:00");
    for (const char* bad : {"2023-07-29", "2023-07-29T19:26:07", "2023-13-01 00:00:00", "2023-02-30 00:00:00",
                            "2023-07-29 24:00:00", "2023-07-29 19:26:7", " 2023-07-29 19:26:07", "nan", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Timestamp::parse(bad), DataError);
    }
    const Timestamp now = Timestamp::now();
    CHECK(Timestamp::parse(now.str()) == now);
    CHECK(kT0 < Timestamp(2023, 7, 29, 19, 26, 8));
}

TEST_CASE("record_search policy")
{
    SUBCASE("unknown item is stored with its timestamp")
    {
        HistoryStore store;
        const Timestamp t = Timestamp::parse("2023-07-31 13:00:39");
        const auto session = store.record_search(one("piano"), t, false);
        REQUIRE(session);
        CHECK(session->index == 0);
        CHECK(session->items == one("piano"));
        CHECK(session->timestamp == t);
        CHECK(store.size() == 1);
    }
    SUBCASE("known item is skipped by default")
    {
        HistoryStore store;
        CHECK_FALSE(store.record_search(one("ipod"), kT0, true));
        CHECK(store.size() == 0);
    }
    SUBCASE("flag override stores known items")
    {
        HistoryStore store(true);
        CHECK(store.record_search(one("ipod"), kT0, true));
        CHECK(store.size() == 1);
    }
    SUBCASE("normalization, empties dropped, nothing left is an error")
    {
        HistoryStore store;
        const std::vector<std::string> items = {"  Coffee!", "", "IPOD"};
        const auto session = store.record_search(items, kT0, false);
        REQUIRE(session);
        CHECK(session->items == std::vector<std::string>{"coffee", "ipod"});
        const std::vector<std::string> blank = {" ", "?!"};
        CHECK_THROWS_AS(store.record_search(blank, kT0, false), std::invalid_argument);
        CHECK(store.size() == 1);
    }
    SUBCASE("append-only with increasing indices")
    {
        HistoryStore store;
        store.append({5, one("a"), kT0});
        const auto before = store.sessions();
        const auto next = store.record_search(one("b"), kT0, false);
        CHECK(next->index == 6);
        const auto after = store.sessions();
        REQUIRE(after.size() == 2);
        CHECK(after[0] == before[0]);
        CHECK_THROWS_AS(store.append({6, one("c"), kT0}), DataError);
        CHECK_THROWS_AS(store.append({2, one("c"), kT0}), DataError);
    }
}

TEST_CASE("load_history")
{
    SUBCASE("three singleton rows")
    {
        const auto store = parse("index,item_1,timestamp\n"
                                 "0,coffee,2023-07-29 19:26:07\n"
                                 "1,ipod,2023-07-29 19:35:44\n"
                                 "2,piano,2023-07-31 13:00:39\n");
        CHECK(store.size() == 3);
        CHECK(store.sessions()[2].items == one("piano"));
    }
    SUBCASE("header only")
    {
        CHECK(parse("index,item_1,timestamp\n").size() == 0);
    }
    SUBCASE("ragged rows padded, blank cells ignored")
    {
        const auto store = parse("index,item_1,item_2,item_3,timestamp\n"
                                 "0,coffee,,ipod,2023-07-29 19:26:07\n"
                                 "1,aerosol,2023-07-31 12:51:50\n");
        CHECK(store.sessions()[0].items == std::vector<std::string>{"coffee", "ipod"});
        CHECK(store.sessions()[1].items == one("aerosol"));
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(parse("index,item_1,timestamp\n0,coffee,yesterday\n"), DataError);
        CHECK_THROWS_AS(parse("user,item_1,timestamp\n"), DataError);
        CHECK_THROWS_AS(parse("index,item_1,timestamp\nx,coffee,2023-07-29 19:26:07\n"), DataError);
        CHECK_THROWS_AS(parse("index,item_1,timestamp\n1,a,2023-07-29 19:26:07\n1,b,2023-07-29 19:26:07\n"),
                        DataError);
        try {
            parse("index,item_1,timestamp\n0,a,2023-07-29 19:26:07\n1,b,2023-07-29 25:00:00\n");
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(e.row() == 3);
        }
    }
    SUBCASE("the bundled history file")
    {
        const auto store = load_history_file(atrs_test::data_path("user_searches.csv"));
        REQUIRE(store.size() == 4);
        CHECK(store.sessions()[0].items == std::vector<std::string>{"coffee", "ipod", "piano"});
        CHECK(store.sessions()[3].timestamp.str() == "2023-07-31 13:00:39");
    }
    SUBCASE("missing file is an empty store")
    {
        CHECK(load_history_file("/nonexistent/dir/user_searches.csv").size() == 0);
    }
}

TEST_CASE("save_history layout")
{
    HistoryStore store;
    CHECK(dump(store) == "index,item_1,timestamp\n");
    store.append({0, {"coffee", "ipod", "piano"}, kT0});
    store.append({3, one("aerosol"), Timestamp::parse("2023-07-31 12:51:50")});
    CHECK(dump(store) == "index,item_1,item_2,item_3,timestamp\n"
                         "0,coffee,ipod,piano,2023-07-29 19:26:07\n"
                         "3,aerosol,,,2023-07-31 12:51:50\n");
}

TEST_CASE("round-trip on random stores")
{
    std::mt19937_64 rng(2023);
    for (int trial = 0; trial < 50; ++trial) {
        const auto store = random_store(rng, trial == 0 ? 10 : static_cast<std::size_t>(trial % 17));
        const std::string first = dump(store);
        const auto loaded = parse(first);
        CHECK(loaded == store);
        CHECK(dump(loaded) == first);
    }
}

TEST_CASE("file round-trip is byte-identical from the second save")
{
    atrs_test::TempDir dir;
    const auto path = dir / "user_searches.csv";
    std::mt19937_64 rng(99);
    save_history_file(random_store(rng, 10), path);
    const std::string once = atrs_test::slurp(path);
    save_history_file(load_history_file(path), path);
    CHECK(atrs_test::slurp(path) == once);
    CHECK_FALSE(std::filesystem::exists(dir / "user_searches.csv.tmp"));
}

TEST_CASE("to_transactions")
{
    HistoryStore store;
    store.append({0, one("coffee"), kT0});
    store.append({1, one("ipod"), kT0});
    store.append({2, one("piano"), kT0});
    auto data = to_transactions(store);
    CHECK(data.transactions.size() == 3);
    CHECK(data.universe == std::vector<std::string>{"coffee", "ipod", "piano"});

    HistoryStore dup;
    dup.append({0, {"b", "a", "a"}, kT0});
    CHECK(to_transactions(dup).transactions == std::vector<Itemset>{{"a", "b"}});

    data = to_transactions(load_history_file(atrs_test::data_path("user_searches.csv")));
    CHECK(data.transactions == atrs_test::f4());
    CHECK(data.universe.size() == 5);

    // Sessions loaded without items contribute nothing.
    const auto with_gap = parse("index,item_1,timestamp\n0,,2023-07-31 12:51:50\n1,guitar,2023-07-31 13:00:39\n");
    CHECK(with_gap.size() == 2);
    CHECK(to_transactions(with_gap).transactions == std::vector<Itemset>{{"guitar"}});
}
