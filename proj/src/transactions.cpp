#include "atrs/transactions.hpp"

#include "atrs/csv.hpp"
#include "atrs/error.hpp"

#include <algorithm>
#include <fstream>

namespace atrs {

Itemset make_itemset(std::vector<std::string> items)
{
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

TransactionSet make_transaction_set(std::vector<Itemset> transactions)
{
    TransactionSet out;
    out.transactions.reserve(transactions.size());
    for (auto& t : transactions) {
        if (!t.empty()) {
            out.transactions.push_back(make_itemset(std::move(t)));
        }
    }
    for (const auto& t : out.transactions) {
        out.universe.insert(out.universe.end(), t.begin(), t.end());
    }
    out.universe = make_itemset(std::move(out.universe));
    return out;
}

TransactionSet load_basket_csv(std::istream& in)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    std::vector<Itemset> transactions;
    while (reader.next(fields)) {
        Itemset t;
        for (const auto& f : fields) {
            if (auto item = csv::trim(f); !item.empty()) {
                t.push_back(std::move(item));
            }
        }
        if (!t.empty()) {
            transactions.push_back(std::move(t));
        }
    }
    return make_transaction_set(std::move(transactions));
}

TransactionSet load_basket_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open transaction file '" + path + "'");
    }
    return load_basket_csv(in);
}

} // namespace atrs
