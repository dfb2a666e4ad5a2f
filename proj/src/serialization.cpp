#include "polyrag/serialization.hpp"

#include "polyrag/base64.hpp"
#include "polyrag/errors.hpp"

namespace polyrag {

namespace {

Script parse_script(const std::string& s) {
    if (s == "Arabic") return Script::Arabic;
    if (s == "Gurmukhi") return Script::Gurmukhi;
    if (s == "Other") return Script::Other;
    return Script::Latin;
}

Instant parse_instant(const std::string& s) {
    const auto t = parse_rfc3339(s);
    if (!t) throw InvalidArgument("bad timestamp: " + s);
    return *t;
}

} // namespace

ordered_json lang_to_json(const LangTag& lang) {
    ordered_json j;
    j["code"] = lang.code;
    j["script"] = std::string(to_string(lang.script));
    j["confidence"] = lang.confidence;
    return j;
}

LangTag lang_from_json(const nlohmann::json& j) {
    LangTag t;
    t.code = j.at("code").get<std::string>();
    t.script = parse_script(j.at("script").get<std::string>());
    t.confidence = j.at("confidence").get<double>();
    return t;
}

ordered_json turn_to_json(const ChatTurn& turn) {
    ordered_json j;
    j["question_en"] = turn.question_en;
    j["answer_en"] = turn.answer_en;
    j["sources"] = turn.sources;
    j["refused"] = turn.refused;
    j["timestamp"] = format_rfc3339(turn.timestamp);
    j["modality"] = std::string(to_string(turn.modality));
    j["original_lang"] = lang_to_json(turn.original_lang);
    j["original_text"] = turn.original_text;
    j["retrieval_query"] = turn.retrieval_query;
    j["reply_text"] = turn.reply_text;
    j["degraded"] = turn.degraded;
    return j;
}

ChatTurn turn_from_json(const nlohmann::json& j) {
    ChatTurn t;
    t.question_en = j.at("question_en").get<std::string>();
    t.answer_en = j.at("answer_en").get<std::string>();
    t.sources = j.at("sources").get<std::vector<std::string>>();
    t.refused = j.at("refused").get<bool>();
    t.timestamp = parse_instant(j.at("timestamp").get<std::string>());
    const auto modality = parse_modality(j.at("modality").get<std::string>());
    if (!modality) throw InvalidArgument("bad modality");
    t.modality = *modality;
    t.original_lang = lang_from_json(j.at("original_lang"));
    t.original_text = j.value("original_text", std::string{});
    t.retrieval_query = j.value("retrieval_query", std::string{});
    t.reply_text = j.value("reply_text", std::string{});
    t.degraded = j.value("degraded", false);
    return t;
}

ordered_json outbound_to_json(const OutboundMessage& m) {
    ordered_json j;
    j["recipient_id"] = m.recipient_id;
    j["session_id"] = m.session_id;
    j["text"] = m.text;
    j["lang"] = lang_to_json(m.lang);
    j["sources"] = m.sources;
    j["refused"] = m.refused;
    j["degraded"] = m.degraded;
    if (m.audio) {
        j["audio"]["b64"] = base64::encode(m.audio->bytes);
        j["audio"]["mime_type"] = m.audio->mime;
    }
    return j;
}

OutboundMessage outbound_from_json(const nlohmann::json& j) {
    OutboundMessage m;
    m.recipient_id = j.at("recipient_id").get<std::string>();
    m.session_id = j.at("session_id").get<std::string>();
    m.text = j.at("text").get<std::string>();
    m.lang = lang_from_json(j.at("lang"));
    m.sources = j.at("sources").get<std::vector<std::string>>();
    m.refused = j.at("refused").get<bool>();
    m.degraded = j.at("degraded").get<bool>();
    if (j.contains("audio")) {
        AudioBlob blob;
        blob.bytes = base64::decode(j.at("audio").at("b64").get<std::string>());
        blob.mime = j.at("audio").at("mime_type").get<std::string>();
        m.audio = std::move(blob);
    }
    return m;
}

ordered_json session_to_json(const Session& s) {
    ordered_json j;
    j["session_id"] = s.session_id;
    j["channel"] = std::string(to_string(s.channel));
    j["sender_id"] = s.sender_id;
    j["created"] = format_rfc3339(s.created);
    j["last_active"] = format_rfc3339(s.last_active);
    j["turns"] = ordered_json::array();
    for (const auto& t : s.turns) j["turns"].push_back(turn_to_json(t));
    return j;
}

} // namespace polyrag
