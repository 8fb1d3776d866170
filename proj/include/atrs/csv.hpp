#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace atrs::csv {

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Accepts LF or CRLF line endings and skips a leading UTF-8 BOM.
class Reader {
public:
    explicit Reader(std::istream& in);

    // Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // 1-based number of the record most recently returned by next().
    std::size_t record_number() const noexcept { return record_number_; }

private:
    std::istream& in_;
    std::size_t record_number_ = 0;
    bool first_ = true;
};

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(const std::string& field);

void write_row(std::ostream& out, std::span<const std::string> fields);

std::string trim(std::string_view s);

} // namespace atrs::csv
