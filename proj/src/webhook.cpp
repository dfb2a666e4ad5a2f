#include "polyrag/webhook.hpp"

#include <json.hpp>

#include "polyrag/base64.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

void InboundMessage::validate() const {
    if (sender_id.empty()) throw ParseError("from", "sender id is empty");
    if (message_id.empty()) throw ParseError("message_id", "message id is empty");
    if (kind == MessageKind::Text) {
        if (!text || text::is_blank(*text)) throw ParseError("text", "text message has no text");
        if (audio || media) throw ParseError("audio", "text message carries audio");
    } else {
        if (!audio && !media) throw ParseError("audio", "audio message has no audio");
        if (text) throw ParseError("text", "audio message carries text");
    }
}

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw ParseError(path, "missing field '" + path + "'");
    return obj.at(key);
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) throw ParseError(path, "field '" + path + "' must be a string");
    auto s = v.get<std::string>();
    if (text::is_blank(s)) throw ParseError(path, "field '" + path + "' must be non-empty");
    return s;
}

} // namespace

InboundMessage parse_webhook(std::string_view body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("body", std::string("body is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("body", "body must be a JSON object");

    InboundMessage m;
    m.channel = Channel::Webhook;
    m.message_id = require_string(j, "message_id", "message_id");
    m.sender_id = require_string(j, "from", "from");
    const auto ts = require_string(j, "timestamp", "timestamp");
    const auto parsed_ts = parse_rfc3339(ts);
    if (!parsed_ts) throw ParseError("timestamp", "timestamp is not RFC 3339: " + ts);
    m.timestamp = *parsed_ts;

    const auto type = require_string(j, "type", "type");
    if (type == "text") {
        const auto& t = require(j, "text", "text");
        if (!t.is_object()) throw ParseError("text", "field 'text' must be an object");
        m.kind = MessageKind::Text;
        m.text = require_string(t, "body", "text.body");
    } else if (type == "audio") {
        const auto& a = require(j, "audio", "audio");
        if (!a.is_object()) throw ParseError("audio", "field 'audio' must be an object");
        m.kind = MessageKind::Audio;
        MediaRef ref;
        ref.id = require_string(a, "id", "audio.id");
        ref.mime_type = require_string(a, "mime_type", "audio.mime_type");
        m.media = std::move(ref);
    } else {
        throw UnsupportedTypeError(type);
    }
    m.validate();
    return m;
}

std::string webhook_response_json(const OutboundMessage& message) {
    nlohmann::ordered_json j;
    j["to"] = message.recipient_id;
    j["type"] = message.audio ? "audio" : "text";
    j["text"]["body"] = message.text;
    if (message.audio) {
        j["audio"]["b64"] = base64::encode(message.audio->bytes);
        j["audio"]["mime_type"] = message.audio->mime;
    }
    return j.dump();
}

} // namespace polyrag
