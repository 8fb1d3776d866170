#pragma once

#include <string>
#include <string_view>

namespace atrs::detail {

// Unicode lowercase of a UTF-8 string (root locale, full case mapping).
std::string to_lower_utf8(std::string_view text);

} // namespace atrs::detail
