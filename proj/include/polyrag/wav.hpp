#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace polyrag::wav {

inline constexpr std::uint32_t kSampleRate = 16000;
inline constexpr std::uint16_t kChannels = 1;
inline constexpr std::uint16_t kBitsPerSample = 16;
inline constexpr std::size_t kHeaderSize = 44;

struct WavInfo {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    std::vector<std::uint8_t> data;
};

// Canonical 44-byte PCM header (16 kHz, mono, 16-bit) followed by
// `payload`, zero-padded to even length.
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> payload);

// Parses a RIFF/WAVE container. Throws TranscriptionError on malformed input.
WavInfo parse(std::span<const std::uint8_t> bytes);

} // namespace polyrag::wav
