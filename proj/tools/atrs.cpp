// atrs: baggage advisory command line.
//
//   atrs mine --input store_data.csv --min-support 0.005 --output rules.csv
//   atrs recommend --query "tear gas" --catalog data/catalog.csv --embeddings data/vectors16.vec
//   atrs repl / serve / eval / compare / stats / assign-categories

#include "atrs/catalog.hpp"
#include "atrs/csv.hpp"
#include "atrs/evaluation.hpp"
#include "atrs/history.hpp"
#include "atrs/json.hpp"
#include "atrs/mining.hpp"
#include "atrs/recommender.hpp"
#include "atrs/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#ifndef ATRS_DATA_DIR
#define ATRS_DATA_DIR "data"
#endif

namespace {

struct DataOptions {
    std::string catalog;
    std::string embeddings;
    std::string history = "user_searches.csv";
    bool record_in_catalog = false;
    atrs::RecommenderConfig config;
};

void add_data_options(CLI::App* cmd, DataOptions& opts)
{
    cmd->add_option("--catalog", opts.catalog, "Item catalog CSV")->envname("ATRS_CATALOG")->required();
    cmd->add_option("--embeddings", opts.embeddings, "Word vectors in .vec text format")
        ->envname("ATRS_EMBEDDINGS")
        ->required();
    cmd->add_option("--history", opts.history, "Search history CSV")->envname("ATRS_HISTORY")->capture_default_str();
    cmd->add_flag("--record-in-catalog", opts.record_in_catalog, "Also record searches that match a catalog item");
    cmd->add_option("--top-n", opts.config.top_n, "Length of similar/rule lists")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--min-support", opts.config.mining.min_support)
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--min-confidence", opts.config.mining.min_confidence)
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--remine-every", opts.config.remine_every, "Appends between rule refreshes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::unique_ptr<atrs::Advisor> make_advisor(const DataOptions& opts)
{
    auto catalog = std::make_shared<const atrs::Catalog>(atrs::load_catalog_file(opts.catalog));
    auto table = std::make_shared<const atrs::EmbeddingTable>(atrs::load_embeddings_file(opts.embeddings));
    auto history = atrs::load_history_file(opts.history, opts.record_in_catalog);
    auto advisor =
        std::make_unique<atrs::Advisor>(std::move(catalog), std::move(table), std::move(history), opts.config);
    advisor->set_history_path(opts.history);
    return advisor;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw atrs::DataError("cannot write '" + path + "'");
    }
    return out;
}

std::vector<std::string> read_lines(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw atrs::DataError("cannot open '" + path + "'");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    return lines;
}

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw atrs::DataError("cannot open '" + path + "'");
    }
    return nlohmann::json::parse(in);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Air-travel baggage advisory: item verdicts, similar items and association rules"};
    app.require_subcommand(1);

    // mine
    std::string mine_input, mine_output = "rules.csv", mine_itemsets, mine_universe;
    atrs::MiningConfig mine_config;
    std::size_t mine_max_size = 0;
    auto* mine_cmd = app.add_subcommand("mine", "Mine association rules from a headerless basket CSV");
    mine_cmd->add_option("--input", mine_input, "One transaction per row, one item per cell")->required();
    mine_cmd->add_option("--min-support", mine_config.min_support)->capture_default_str();
    mine_cmd->add_option("--min-confidence", mine_config.min_confidence)->capture_default_str();
    mine_cmd->add_option("--max-size", mine_max_size, "Largest itemset size (0 = unlimited)");
    mine_cmd->add_option("--output", mine_output, "Rules CSV")->capture_default_str();
    mine_cmd->add_option("--itemsets", mine_itemsets, "Also write the itemset table as CSV");
    mine_cmd->add_option("--universe-output", mine_universe, "Also write the item universe, one per line");

    // recommend
    DataOptions rec_opts;
    std::string rec_query, rec_format = "text";
    bool rec_no_record = false;
    auto* rec_cmd = app.add_subcommand("recommend", "Answer one query");
    add_data_options(rec_cmd, rec_opts);
    rec_cmd->add_option("--query", rec_query)->required();
    rec_cmd->add_option("--format", rec_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    rec_cmd->add_flag("--no-record", rec_no_record, "Do not append the query to the history");

    // repl
    DataOptions repl_opts;
    auto* repl_cmd = app.add_subcommand("repl", "Interactive query loop; type 'exit' to quit");
    add_data_options(repl_cmd, repl_opts);

    // serve
    DataOptions serve_opts;
    int port = 8080;
    std::string host = "0.0.0.0", constraints_path = std::string(ATRS_DATA_DIR) + "/airline_constraints.json",
                cors_origin = "*";
    auto* serve_cmd = app.add_subcommand("serve", "Run the JSON HTTP service");
    add_data_options(serve_cmd, serve_opts);
    serve_cmd->add_option("--port", port)->envname("ATRS_PORT")->capture_default_str();
    serve_cmd->add_option("--host", host)->capture_default_str();
    serve_cmd->add_option("--constraints", constraints_path)->envname("ATRS_CONSTRAINTS")->capture_default_str();
    serve_cmd->add_option("--cors-origin", cors_origin)->capture_default_str();

    // eval
    std::string eval_rules, eval_universe, eval_output = "summary.json", eval_label;
    auto* eval_cmd = app.add_subcommand("eval", "Summarize a rules CSV");
    eval_cmd->add_option("--rules", eval_rules)->required();
    eval_cmd->add_option("--universe", eval_universe, "Item universe, one per line")->required();
    eval_cmd->add_option("--output", eval_output)->capture_default_str();
    eval_cmd->add_option("--label", eval_label, "Dataset label (defaults to the rules file name)");

    // compare
    std::string cmp_a, cmp_b, cmp_output = "plotdata.csv", cmp_json;
    auto* cmp_cmd = app.add_subcommand("compare", "Pair two evaluation summaries");
    cmp_cmd->add_option("--a", cmp_a)->required();
    cmp_cmd->add_option("--b", cmp_b)->required();
    cmp_cmd->add_option("--output", cmp_output, "Plot data CSV")->capture_default_str();
    cmp_cmd->add_option("--json", cmp_json, "Also write the comparison record as JSON");

    // stats
    std::string stats_catalog;
    auto* stats_cmd = app.add_subcommand("stats", "Catalog distribution counts as JSON");
    stats_cmd->add_option("--catalog", stats_catalog)->envname("ATRS_CATALOG")->required();

    // assign-categories
    std::string assign_catalog, assign_embeddings, assign_labels, assign_output;
    auto* assign_cmd = app.add_subcommand("assign-categories", "Relabel items by nearest category label");
    assign_cmd->add_option("--catalog", assign_catalog)->envname("ATRS_CATALOG")->required();
    assign_cmd->add_option("--embeddings", assign_embeddings)->envname("ATRS_EMBEDDINGS")->required();
    assign_cmd->add_option("--labels", assign_labels, "One label per line")->required();
    assign_cmd->add_option("--output", assign_output)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*mine_cmd) {
            if (mine_max_size > 0) {
                mine_config.max_itemset_size = mine_max_size;
            }
            const auto data = atrs::load_basket_csv_file(mine_input);
            const auto mined = atrs::mine(data, mine_config);
            auto out = open_output(mine_output);
            atrs::write_rules_csv(out, mined.rules);
            if (!mine_itemsets.empty()) {
                auto table_out = open_output(mine_itemsets);
                table_out << "itemset,support,confidence,lift,leverage\n";
                table_out.precision(17);
                for (const auto& row : atrs::itemset_table(mined.itemsets, mined.rules)) {
                    table_out << atrs::csv::escape(atrs::join_items(row.items)) << ',' << row.support;
                    if (row.best_rule) {
                        table_out << ',' << row.best_rule->confidence << ',' << row.best_rule->lift << ','
                                  << row.best_rule->leverage;
                    } else {
                        table_out << ",,,";
                    }
                    table_out << '\n';
                }
            }
            if (!mine_universe.empty()) {
                auto universe_out = open_output(mine_universe);
                for (const auto& item : mined.universe) {
                    universe_out << item << '\n';
                }
            }
            std::cerr << data.transactions.size() << " transactions, " << mined.itemsets.size()
                      << " frequent itemsets, " << mined.rules.size() << " rules\n";
        } else if (*rec_cmd) {
            auto advisor = make_advisor(rec_opts);
            const auto advice = advisor->advise(rec_query, !rec_no_record);
            if (rec_format == "json") {
                std::cout << nlohmann::json(advice).dump(2) << '\n';
            } else {
                atrs::print_advice(std::cout, advice);
            }
        } else if (*repl_cmd) {
            const atrs::ReplPaths paths{repl_opts.catalog, repl_opts.embeddings, repl_opts.history};
            return atrs::run_repl(repl_opts.config, paths, repl_opts.record_in_catalog, std::cin, std::cout,
                                  std::cerr);
        } else if (*serve_cmd) {
            auto advisor = make_advisor(serve_opts);
            atrs::Service service(*advisor, atrs::load_constraints_file(constraints_path),
                                  atrs::ServiceOptions{cors_origin});
            std::cerr << "listening on " << host << ':' << port << '\n';
            if (!service.listen(host, port)) {
                std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
                return 1;
            }
        } else if (*eval_cmd) {
            std::ifstream in(eval_rules);
            if (!in) {
                throw atrs::DataError("cannot open '" + eval_rules + "'");
            }
            const auto rules = atrs::read_rules_csv(in);
            const auto universe = read_lines(eval_universe);
            const auto summary =
                atrs::evaluate(rules, universe, eval_label.empty() ? eval_rules : eval_label);
            open_output(eval_output) << nlohmann::json(summary).dump(2) << '\n';
        } else if (*cmp_cmd) {
            const auto a = read_json(cmp_a).get<atrs::EvalSummary>();
            const auto b = read_json(cmp_b).get<atrs::EvalSummary>();
            const auto comparison = atrs::compare(a, b);
            auto out = open_output(cmp_output);
            atrs::write_plot_data(out, comparison);
            if (!cmp_json.empty()) {
                open_output(cmp_json) << nlohmann::json(comparison).dump(2) << '\n';
            }
        } else if (*stats_cmd) {
            const auto catalog = atrs::load_catalog_file(stats_catalog);
            std::cout << nlohmann::json(atrs::distribution_stats(catalog)).dump(2) << '\n';
        } else if (*assign_cmd) {
            const auto catalog = atrs::load_catalog_file(assign_catalog);
            const auto table = atrs::load_embeddings_file(assign_embeddings);
            const auto labels = read_lines(assign_labels);
            auto out = open_output(assign_output);
            atrs::save_catalog(atrs::assign_categories(catalog, table, labels), out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
