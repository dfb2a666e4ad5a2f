#include "polyrag/utf8.hpp"

namespace polyrag::utf8 {

namespace {

int sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Length of a well-formed sequence at pos, or 0.
int valid_length_at(std::string_view s, std::size_t pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    const int n = sequence_length(lead);
    if (n == 0 || pos + n > s.size()) return 0;
    for (int i = 1; i < n; ++i) {
        if (!is_continuation(static_cast<unsigned char>(s[pos + i]))) return 0;
    }
    return n;
}

} // namespace

char32_t decode_next(std::string_view s, std::size_t& pos) {
    const auto lead = static_cast<unsigned char>(s[pos]);
    const int n = valid_length_at(s, pos);
    if (n <= 1) {
        ++pos;
        return lead;
    }
    char32_t cp = lead & (0x7F >> n);
    for (int i = 1; i < n; ++i) {
        cp = (cp << 6) | (static_cast<unsigned char>(s[pos + i]) & 0x3F);
    }
    pos += n;
    return cp;
}

std::vector<std::size_t> codepoint_offsets(std::string_view s) {
    std::vector<std::size_t> offsets;
    offsets.reserve(s.size() + 1);
    std::size_t pos = 0;
    while (pos < s.size()) {
        offsets.push_back(pos);
        decode_next(s, pos);
    }
    offsets.push_back(s.size());
    return offsets;
}

std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) out.push_back(decode_next(s, pos));
    return out;
}

void append(std::string& out, char32_t cp) {
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

bool is_valid(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        const int n = valid_length_at(s, pos);
        if (n == 0) return false;
        pos += n;
    }
    return true;
}

std::size_t length(std::string_view s) {
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        decode_next(s, pos);
        ++n;
    }
    return n;
}

} // namespace polyrag::utf8
