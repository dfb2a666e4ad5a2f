#pragma once

#include <cstdint>
#include <memory>
#include <semaphore>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polyrag/language.hpp"
#include "polyrag/profiles.hpp"

namespace polyrag {

struct AudioBlob {
    std::vector<std::uint8_t> bytes;
    std::string mime = "audio/wav";
    std::uint32_t sample_rate = 16000;
    std::uint16_t channels = 1;

    bool operator==(const AudioBlob&) const = default;
};

struct Transcript {
    std::string english_text;
    LangTag detected_lang;
    std::string original_text;
};

class SpeechToText {
public:
    virtual ~SpeechToText() = default;
    // Any spoken language in, English text out.
    virtual Transcript transcribe(const AudioBlob& audio) = 0;
    virtual std::string name() const = 0;
};

class TextToSpeech {
public:
    virtual ~TextToSpeech() = default;
    virtual AudioBlob synthesize(std::string_view text, const LangTag& lang) = 0;
    virtual bool supports(std::string_view lang_code) const = 0;
    virtual std::string name() const = 0;
};

// Mock TTS: a valid WAV whose data section is UTF-8 "<code>|<text>",
// zero-padded to even length. Byte-identical for identical input.
class MockTextToSpeech final : public TextToSpeech {
public:
    explicit MockTextToSpeech(std::set<std::string> languages = {"en", "ur"});

    AudioBlob synthesize(std::string_view text, const LangTag& lang) override;
    bool supports(std::string_view lang_code) const override;
    std::string name() const override { return "mock-tts"; }

private:
    std::set<std::string> languages_;
};

struct MockPayload {
    std::string lang_code;
    std::string text;
};

// Inverse of the mock TTS encoding. Throws TranscriptionError.
MockPayload decode_mock_audio(const AudioBlob& audio);

// Mock STT: decodes the mock payload and pivots it to English through the
// router, like an x-to-1 speech translator.
class MockSpeechToText final : public SpeechToText {
public:
    explicit MockSpeechToText(LanguageRouter& router);

    Transcript transcribe(const AudioBlob& audio) override;
    std::string name() const override { return "mock-stt"; }

private:
    LanguageRouter& router_;
};

inline constexpr int kDefaultMaxInFlight = 4;

// Caps concurrent calls into a wrapped provider.
class LimitedSpeechToText final : public SpeechToText {
public:
    LimitedSpeechToText(SpeechToText& inner, int max_in_flight = kDefaultMaxInFlight);
    Transcript transcribe(const AudioBlob& audio) override;
    std::string name() const override { return inner_.name(); }

private:
    SpeechToText& inner_;
    std::counting_semaphore<1024> slots_;
};

class LimitedTextToSpeech final : public TextToSpeech {
public:
    LimitedTextToSpeech(TextToSpeech& inner, int max_in_flight = kDefaultMaxInFlight);
    AudioBlob synthesize(std::string_view text, const LangTag& lang) override;
    bool supports(std::string_view lang_code) const override { return inner_.supports(lang_code); }
    std::string name() const override { return inner_.name(); }

private:
    TextToSpeech& inner_;
    std::counting_semaphore<1024> slots_;
};

ProviderProfile select_tts(const std::vector<ProviderProfile>& profiles);

} // namespace polyrag
