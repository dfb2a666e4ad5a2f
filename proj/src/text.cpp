#include "polyrag/text.hpp"

#include <cctype>

namespace polyrag::text {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Length in bytes of a sentence terminator at s[i], or 0.
std::size_t terminator_length(std::string_view s, std::size_t i) {
    const char c = s[i];
    if (c == '.' || c == '?' || c == '!') return 1;
    // U+061F ARABIC QUESTION MARK is D8 9F in UTF-8.
    if (static_cast<unsigned char>(c) == 0xD8 && i + 1 < s.size() &&
        static_cast<unsigned char>(s[i + 1]) == 0x9F) {
        return 2;
    }
    return 0;
}

} // namespace

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_word_byte(c)) {
            current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (!is_space(c)) return false;
    }
    return true;
}

std::vector<Span> sentence_spans(std::string_view s) {
    std::vector<Span> spans;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        if (i >= s.size()) break;
        const std::size_t start = i;
        std::size_t end = s.size();
        while (i < s.size()) {
            if (s[i] == '\n') {
                std::size_t j = i + 1;
                while (j < s.size() && s[j] != '\n' && is_space(s[j])) ++j;
                if (j < s.size() && s[j] == '\n') {
                    end = i;
                    while (end > start && is_space(s[end - 1])) --end;
                    i = j;
                    break;
                }
            }
            const std::size_t t = terminator_length(s, i);
            if (t > 0 && (i + t == s.size() || is_space(s[i + t]))) {
                end = i + t;
                i += t;
                break;
            }
            ++i;
        }
        if (end == s.size()) {
            while (end > start && is_space(s[end - 1])) --end;
            i = s.size();
        }
        spans.push_back({start, end});
    }
    return spans;
}

std::vector<std::string> sentences(std::string_view s) {
    std::vector<std::string> out;
    for (const auto& sp : sentence_spans(s)) out.emplace_back(s.substr(sp.start, sp.end - sp.start));
    return out;
}

std::vector<Span> paragraph_spans(std::string_view s) {
    // Walk line by line; a blank line closes the current paragraph.
    std::vector<Span> spans;
    std::size_t para_start = std::string_view::npos;
    std::size_t para_end = 0;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t nl = s.find('\n', pos);
        const std::size_t line_end = nl == std::string_view::npos ? s.size() : nl;
        const auto line = s.substr(pos, line_end - pos);
        if (is_blank(line)) {
            if (para_start != std::string_view::npos) {
                spans.push_back({para_start, para_end});
                para_start = std::string_view::npos;
            }
        } else {
            if (para_start == std::string_view::npos) para_start = pos;
            para_end = line_end;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (para_start != std::string_view::npos) spans.push_back({para_start, para_end});
    return spans;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = s.find(sep, start);
        if (p == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, p - start));
        start = p + 1;
    }
    return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string normalize_newlines(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

} // namespace polyrag::text
