#include "polyrag/speech.hpp"

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/wav.hpp"

namespace polyrag {

MockTextToSpeech::MockTextToSpeech(std::set<std::string> languages) : languages_(std::move(languages)) {}

bool MockTextToSpeech::supports(std::string_view lang_code) const {
    return languages_.count(std::string(lang_code)) > 0;
}

AudioBlob MockTextToSpeech::synthesize(std::string_view text, const LangTag& lang) {
    if (text::is_blank(text)) throw InvalidArgument("cannot synthesize empty text");
    if (!supports(lang.code)) throw UnsupportedLanguageError(lang.code);
    const std::string payload = lang.code + "|" + std::string(text);
    AudioBlob blob;
    blob.bytes = wav::encode(std::span(reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()));
    return blob;
}

MockPayload decode_mock_audio(const AudioBlob& audio) {
    if (!audio.mime.empty() && audio.mime != "audio/wav" && audio.mime != "audio/x-wav" &&
        audio.mime != "audio/wave") {
        throw TranscriptionError("unsupported audio mime type: " + audio.mime);
    }
    const auto info = wav::parse(audio.bytes);
    std::string payload(info.data.begin(), info.data.end());
    if (!payload.empty() && payload.back() == '\0') payload.pop_back();
    if (payload.find('\0') != std::string::npos) throw TranscriptionError("audio payload is not text");
    const auto bar = payload.find('|');
    if (payload.empty() || bar == std::string::npos) {
        if (payload.empty()) throw EmptyTranscriptError("audio carries no speech");
        throw TranscriptionError("audio payload has no language marker");
    }
    MockPayload out{payload.substr(0, bar), payload.substr(bar + 1)};
    if (text::is_blank(out.text)) throw EmptyTranscriptError("audio carries no speech");
    return out;
}

MockSpeechToText::MockSpeechToText(LanguageRouter& router) : router_(router) {}

Transcript MockSpeechToText::transcribe(const AudioBlob& audio) {
    const auto payload = decode_mock_audio(audio);
    const auto routed = router_.route_inbound(payload.text);
    return {routed.english_text, routed.original_lang, routed.original_text};
}

namespace {

// Holds one slot of a semaphore for the lifetime of a call.
class SlotGuard {
public:
    explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
    ~SlotGuard() { s_.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::counting_semaphore<1024>& s_;
};

std::ptrdiff_t checked_slots(int n) {
    if (n < 1 || n > 1024) throw InvalidArgument("max in-flight must be in [1, 1024]");
    return n;
}

} // namespace

LimitedSpeechToText::LimitedSpeechToText(SpeechToText& inner, int max_in_flight)
    : inner_(inner), slots_(checked_slots(max_in_flight)) {}

Transcript LimitedSpeechToText::transcribe(const AudioBlob& audio) {
    SlotGuard guard(slots_);
    return inner_.transcribe(audio);
}

LimitedTextToSpeech::LimitedTextToSpeech(TextToSpeech& inner, int max_in_flight)
    : inner_(inner), slots_(checked_slots(max_in_flight)) {}

AudioBlob LimitedTextToSpeech::synthesize(std::string_view text, const LangTag& lang) {
    SlotGuard guard(slots_);
    return inner_.synthesize(text, lang);
}

ProviderProfile select_tts(const std::vector<ProviderProfile>& profiles) {
    return select_provider(profiles, Capability::TTS);
}

} // namespace polyrag
