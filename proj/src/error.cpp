#include "atrs/error.hpp"

#include <iostream>

namespace atrs {

namespace {

std::string with_row(const std::string& message, std::size_t row)
{
    return row == 0 ? message : "row " + std::to_string(row) + ": " + message;
}

} // namespace

DataError::DataError(const std::string& message, std::size_t row)
    : std::runtime_error(with_row(message, row)), row_(row)
{
}

void warn_to_stderr(const std::string& message)
{
    std::cerr << "warning: " << message << '\n';
}

} // namespace atrs
