#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrag/conversation.hpp"
#include "polyrag/language.hpp"
#include "polyrag/speech.hpp"
#include "polyrag/time_util.hpp"

namespace polyrag {

enum class MessageKind { Text, Audio };

struct MediaRef {
    std::string id;
    std::string mime_type;
};

struct InboundMessage {
    Channel channel = Channel::Web;
    std::string sender_id;
    std::string message_id; // idempotency key, unique per sender
    MessageKind kind = MessageKind::Text;
    std::optional<std::string> text;
    std::optional<AudioBlob> audio;
    std::optional<MediaRef> media; // webhook audio arrives by reference
    std::optional<LangTag> lang_hint;
    Instant timestamp{};
    std::optional<std::string> session_id; // web clients may pin a session

    // Throws ParseError when the payload does not match `kind`.
    void validate() const;
};

struct OutboundMessage {
    std::string recipient_id;
    std::string session_id;
    std::string text;
    std::optional<AudioBlob> audio;
    LangTag lang;
    std::vector<std::string> sources;
    bool refused = false;
    bool degraded = false;
};

// Parses the webhook wire format:
//   {"message_id","from","timestamp"(RFC 3339),"type":"text"|"audio",
//    "text":{"body"} | "audio":{"id","mime_type"}}
// Throws ParseError naming the first offending field, or UnsupportedTypeError.
InboundMessage parse_webhook(std::string_view body);

// {"to","type","text":{"body"},"audio"?:{"b64","mime_type"}}
std::string webhook_response_json(const OutboundMessage& message);

} // namespace polyrag
