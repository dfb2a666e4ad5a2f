#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag::base64 {

std::string encode(const std::vector<std::uint8_t>& bytes);

// Throws InvalidArgument on malformed input.
std::vector<std::uint8_t> decode(std::string_view text);

} // namespace polyrag::base64
