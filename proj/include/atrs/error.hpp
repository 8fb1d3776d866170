#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace atrs {

// Raised for malformed or invariant-violating input files. `row()` is the
// 1-based record number in the source (header = 1), or 0 when not tied to a row.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& message, std::size_t row = 0);

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Receives non-fatal diagnostics (duplicate tokens, candidate blowup, ...).
using WarningSink = std::function<void(const std::string&)>;

// Writes "warning: <msg>" to stderr.
void warn_to_stderr(const std::string& message);

} // namespace atrs
