#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "polyrag/analytics.hpp"
#include "polyrag/conversation.hpp"
#include "polyrag/language.hpp"
#include "polyrag/session_store.hpp"
#include "polyrag/speech.hpp"
#include "polyrag/webhook.hpp"

namespace polyrag {

class MediaResolver {
public:
    virtual ~MediaResolver() = default;
    // Throws ParseError("audio.id") when the reference is unknown.
    virtual AudioBlob resolve(const MediaRef& ref) = 0;
};

// Media files stored as <dir>/<id> or <dir>/<id>.wav.
class DirectoryMediaStore final : public MediaResolver {
public:
    explicit DirectoryMediaStore(std::string dir);
    AudioBlob resolve(const MediaRef& ref) override;

private:
    std::string dir_;
};

class InMemoryMediaStore final : public MediaResolver {
public:
    void put(const std::string& id, AudioBlob blob);
    AudioBlob resolve(const MediaRef& ref) override;

private:
    std::mutex mu_;
    std::map<std::string, AudioBlob> blobs_;
};

inline constexpr std::string_view kDegradedReply =
    "Sorry, the assistant is temporarily unavailable. Please try again later.";

struct ChatResult {
    OutboundMessage message;
    bool duplicate = false;
};

// End-to-end turn handling for every channel: speech/text in, English
// pivot, grounded answer, back-translation, speech out, journaling.
class ChatService {
public:
    ChatService(ConversationEngine& engine, LanguageRouter& router, SpeechToText& stt, TextToSpeech& tts,
                SessionStore& sessions, AnalyticsCounters& analytics, MediaResolver* media = nullptr);

    // Throws ParseError for malformed messages. Provider outages yield a
    // degraded English reply instead of an exception.
    ChatResult handle(const InboundMessage& message);

    void record_complaint(const std::string& session_id);

    SessionStore& sessions() { return sessions_; }
    AnalyticsCounters& analytics() { return analytics_; }

    static std::string idempotency_key(const InboundMessage& message);

private:
    std::shared_ptr<std::mutex> lock_for(const std::string& key);
    std::optional<AudioBlob> speak(const std::string& answer_en, const RoutedAnswer& reply, bool& degraded);

    ConversationEngine& engine_;
    LanguageRouter& router_;
    SpeechToText& stt_;
    TextToSpeech& tts_;
    SessionStore& sessions_;
    AnalyticsCounters& analytics_;
    MediaResolver* media_;

    std::mutex locks_mu_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

} // namespace polyrag
