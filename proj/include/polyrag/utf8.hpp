#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag::utf8 {

// Byte offset of every code point in `s`, plus a final entry equal to s.size().
// Invalid sequences are treated as single-byte code points.
std::vector<std::size_t> codepoint_offsets(std::string_view s);

// Decodes the code point starting at s[pos]; advances pos past it.
char32_t decode_next(std::string_view s, std::size_t& pos);

std::vector<char32_t> decode(std::string_view s);

void append(std::string& out, char32_t cp);

bool is_valid(std::string_view s);

std::size_t length(std::string_view s);

} // namespace polyrag::utf8
