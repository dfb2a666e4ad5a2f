#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag::text {

struct Span {
    std::size_t start = 0; // inclusive
    std::size_t end = 0;   // exclusive
    bool operator==(const Span&) const = default;
};

// Lowercased word tokens. A word is a maximal run of ASCII alphanumerics or
// non-ASCII bytes, so Arabic-script and Gurmukhi words survive as tokens.
std::vector<std::string> tokenize(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::string trim(std::string_view s);

bool is_blank(std::string_view s);

// Sentence spans in byte offsets. A sentence ends at '.', '?', '!' or U+061F
// when followed by whitespace or end of text, and at a blank line; leading
// whitespace is skipped.
std::vector<Span> sentence_spans(std::string_view s);

std::vector<std::string> sentences(std::string_view s);

// Paragraph spans in byte offsets; paragraphs are separated by one or more
// blank lines. Whitespace-only paragraphs are dropped.
std::vector<Span> paragraph_spans(std::string_view s);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string normalize_newlines(std::string_view s);

} // namespace polyrag::text
