#include "polyrag/wav.hpp"

#include <cstring>
#include <string>

#include "polyrag/errors.hpp"

namespace polyrag::wav {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

} // namespace

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> payload) {
    const auto data_len = static_cast<std::uint32_t>(payload.size() + payload.size() % 2);
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + data_len);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_len);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1); // PCM
    put_u16(out, kChannels);
    put_u32(out, kSampleRate);
    put_u32(out, kSampleRate * kChannels * kBitsPerSample / 8);
    put_u16(out, kChannels * kBitsPerSample / 8);
    put_u16(out, kBitsPerSample);
    put_tag(out, "data");
    put_u32(out, data_len);
    out.insert(out.end(), payload.begin(), payload.end());
    if (payload.size() % 2) out.push_back(0);
    return out;
}

WavInfo parse(std::span<const std::uint8_t> b) {
    if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
        throw TranscriptionError("not a RIFF/WAVE container");
    }
    WavInfo info;
    bool have_fmt = false;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::uint32_t len = get_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (len > b.size() - body) throw TranscriptionError("WAV chunk overruns the container");
        if (tag_is(b, pos, "fmt ")) {
            if (len < 16) throw TranscriptionError("WAV fmt chunk too short");
            info.format = get_u16(b, body);
            info.channels = get_u16(b, body + 2);
            info.sample_rate = get_u32(b, body + 4);
            info.bits_per_sample = get_u16(b, body + 14);
            have_fmt = true;
        } else if (tag_is(b, pos, "data")) {
            if (!have_fmt) throw TranscriptionError("WAV data chunk before fmt chunk");
            info.data.assign(b.begin() + static_cast<std::ptrdiff_t>(body),
                             b.begin() + static_cast<std::ptrdiff_t>(body + len));
            return info;
        }
        pos = body + len + (len % 2);
    }
    throw TranscriptionError(have_fmt ? "WAV has no data chunk" : "WAV header truncated");
}

} // namespace polyrag::wav
