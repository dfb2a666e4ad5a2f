#include "polyrag/chat_service.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyrag/errors.hpp"
#include "polyrag/serialization.hpp"

namespace polyrag {

DirectoryMediaStore::DirectoryMediaStore(std::string dir) : dir_(std::move(dir)) {}

AudioBlob DirectoryMediaStore::resolve(const MediaRef& ref) {
    if (ref.id.find('/') != std::string::npos || ref.id.find("..") != std::string::npos) {
        throw ParseError("audio.id", "invalid media id");
    }
    for (const auto& name : {ref.id, ref.id + ".wav"}) {
        const auto path = std::filesystem::path(dir_) / name;
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        const auto s = buf.str();
        AudioBlob blob;
        blob.bytes.assign(s.begin(), s.end());
        blob.mime = ref.mime_type.empty() ? "audio/wav" : ref.mime_type;
        return blob;
    }
    throw ParseError("audio.id", "unknown media id: " + ref.id);
}

void InMemoryMediaStore::put(const std::string& id, AudioBlob blob) {
    std::lock_guard lock(mu_);
    blobs_[id] = std::move(blob);
}

AudioBlob InMemoryMediaStore::resolve(const MediaRef& ref) {
    std::lock_guard lock(mu_);
    const auto it = blobs_.find(ref.id);
    if (it == blobs_.end()) throw ParseError("audio.id", "unknown media id: " + ref.id);
    AudioBlob blob = it->second;
    if (!ref.mime_type.empty()) blob.mime = ref.mime_type;
    return blob;
}

ChatService::ChatService(ConversationEngine& engine, LanguageRouter& router, SpeechToText& stt, TextToSpeech& tts,
                         SessionStore& sessions, AnalyticsCounters& analytics, MediaResolver* media)
    : engine_(engine), router_(router), stt_(stt), tts_(tts), sessions_(sessions), analytics_(analytics),
      media_(media) {}

std::string ChatService::idempotency_key(const InboundMessage& m) {
    return std::string(to_string(m.channel)) + "|" + m.sender_id + "|" + m.message_id;
}

std::shared_ptr<std::mutex> ChatService::lock_for(const std::string& key) {
    std::lock_guard lock(locks_mu_);
    auto& slot = locks_[key];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
}

std::optional<AudioBlob> ChatService::speak(const std::string& answer_en, const RoutedAnswer& reply, bool& degraded) {
    try {
        if (tts_.supports(reply.lang.code)) return tts_.synthesize(reply.text, reply.lang);
        // Spoken replies fall back to Urdu when the asker's language has no voice.
        if (tts_.supports("ur")) {
            const auto urdu = lang_from_code("ur");
            const auto spoken = router_.route_outbound(answer_en, urdu);
            if (!spoken.degraded) return tts_.synthesize(spoken.text, urdu);
        }
        if (tts_.supports("en")) return tts_.synthesize(answer_en, english());
    } catch (const std::exception&) {
        // fall through to text-only
    }
    degraded = true;
    return std::nullopt;
}

ChatResult ChatService::handle(const InboundMessage& message) {
    message.validate();
    const std::string key = idempotency_key(message);

    // Serialize per conversation: per sender, or per pinned web session.
    const std::string lock_key = message.session_id ? "session|" + *message.session_id
                                                    : std::string(to_string(message.channel)) + "|" + message.sender_id;
    const auto conv_lock = lock_for(lock_key);
    std::lock_guard guard(*conv_lock);

    if (auto cached = sessions_.cached_response(key)) return {outbound_from_json(*cached), true};

    // Resolve inbound content to English before touching the session.
    AudioBlob audio;
    if (message.kind == MessageKind::Audio) {
        if (message.audio) {
            audio = *message.audio;
        } else {
            if (!media_) throw ParseError("audio.id", "no media resolver configured");
            audio = media_->resolve(*message.media);
        }
    }

    Session session = sessions_.resolve(message.channel, message.sender_id, message.session_id);

    OutboundMessage out;
    out.recipient_id = message.sender_id.empty() ? session.session_id : message.sender_id;
    out.session_id = session.session_id;

    const auto degraded_reply = [&] {
        out.text = std::string(kDegradedReply);
        out.lang = english();
        out.degraded = true;
        return ChatResult{out, false};
    };

    TurnContext ctx;
    ctx.now = sessions_.now();
    std::string question_en;
    try {
        if (message.kind == MessageKind::Audio) {
            Transcript t;
            try {
                t = stt_.transcribe(audio);
            } catch (const TranscriptionError& e) {
                throw ParseError("audio", std::string("cannot transcribe audio: ") + e.what());
            }
            question_en = t.english_text;
            ctx.modality = Modality::Voice;
            ctx.original_lang = t.detected_lang;
            ctx.original_text = t.original_text;
        } else {
            auto routed = router_.route_inbound(*message.text, message.lang_hint);
            question_en = std::move(routed.english_text);
            ctx.modality = Modality::Text;
            ctx.original_lang = routed.original_lang;
            ctx.original_text = std::move(routed.original_text);
        }
    } catch (const RoutingError&) {
        return degraded_reply();
    }

    ChatTurn turn = engine_.answer(session, question_en, ctx);
    if (turn.answer_en.empty()) return degraded_reply();

    const auto reply = router_.route_outbound(turn.answer_en, turn.original_lang);
    out.text = reply.text;
    out.lang = reply.lang;
    out.sources = turn.sources;
    out.refused = turn.refused;
    out.degraded = turn.degraded || reply.degraded;
    if (ctx.modality == Modality::Voice) out.audio = speak(turn.answer_en, reply, out.degraded);

    turn.reply_text = out.text;
    turn.degraded = out.degraded;
    if (sessions_.append_turn(session.session_id, turn, key, outbound_to_json(out))) {
        analytics_.record(event_of(session.channel, turn));
    }
    return {out, false};
}

void ChatService::record_complaint(const std::string& session_id) {
    sessions_.record_complaint(session_id);
    analytics_.record_complaint();
}

} // namespace polyrag
