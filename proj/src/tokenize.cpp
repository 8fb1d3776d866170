#include "atrs/embeddings.hpp"
#include "text_detail.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace atrs {

std::vector<std::string> tokenize(std::string_view text)
{
    icu::UnicodeString lowered =
        icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    lowered.toLower(icu::Locale::getRoot());

    std::vector<std::string> tokens;
    icu::UnicodeString current;
    auto flush = [&] {
        if (!current.isEmpty()) {
            std::string utf8;
            current.toUTF8String(utf8);
            tokens.push_back(std::move(utf8));
            current.remove();
        }
    };

    for (int32_t i = 0; i < lowered.length();) {
        const UChar32 cp = lowered.char32At(i);
        i += U16_LENGTH(cp);
        if (u_ispunct(cp) || u_isUWhiteSpace(cp) || u_iscntrl(cp)) {
            flush();
        } else {
            current.append(cp);
        }
    }
    flush();
    return tokens;
}

std::string normalize(std::string_view text)
{
    std::string out;
    for (const auto& token : tokenize(text)) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += token;
    }
    return out;
}

} // namespace atrs

namespace atrs::detail {

std::string to_lower_utf8(std::string_view text)
{
    icu::UnicodeString s =
        icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    s.toLower(icu::Locale::getRoot());
    std::string out;
    s.toUTF8String(out);
    return out;
}

} // namespace atrs::detail
