#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "prefact/unicode_tables.hpp"

namespace prefact::detail {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 sequence starting at i, advancing i past it. Invalid or
// truncated sequences yield U+FFFD and advance by one byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return kReplacement;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++i;
        return kReplacement;
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

inline void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Unicode letter (L*) or decimal digit (Nd).
inline bool is_alnum_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    }
    std::size_t lo = 0, hi = kAlnumRangeCount;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (kAlnumRanges[mid].hi < cp) {
            lo = mid + 1;
        } else if (kAlnumRanges[mid].lo > cp) {
            hi = mid;
        } else {
            return true;
        }
    }
    return false;
}

// Simple (single code point) lowercase mapping; identity when none exists.
inline char32_t to_lower_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
    }
    std::size_t lo = 0, hi = kLowerRunCount;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (kLowerRuns[mid].hi < cp) {
            lo = mid + 1;
        } else if (kLowerRuns[mid].lo > cp) {
            hi = mid;
        } else {
            const LowerRun& r = kLowerRuns[mid];
            if ((cp - r.lo) % r.step == 0) {
                return static_cast<char32_t>(static_cast<std::int64_t>(cp) + r.delta);
            }
            return cp;
        }
    }
    return cp;
}

inline bool has_lower_mapping(char32_t cp) { return to_lower_cp(cp) != cp; }

}  // namespace prefact::detail
