#include "polyrag/http_api.hpp"

#include <atomic>

#include <httplib.h>
#include <json.hpp>

#include "polyrag/base64.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/serialization.hpp"

namespace polyrag {

namespace {

ApiResponse json_response(int status, const nlohmann::ordered_json& j) { return {status, j.dump(), "application/json"}; }

ApiResponse error_response(int status, const std::string& message, const std::string& field = {}) {
    nlohmann::ordered_json j;
    j["error"] = message;
    if (!field.empty()) j["field"] = field;
    return json_response(status, j);
}

std::string next_message_id() {
    static std::atomic<std::uint64_t> counter{0};
    return "web-" + random_session_id() + "-" + std::to_string(++counter);
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) throw ParseError(key, std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

} // namespace

HttpApi::HttpApi(ChatService& service, std::size_t index_size, std::string webhook_token,
                 std::map<std::string, std::string> selected_providers)
    : service_(service), index_size_(index_size), webhook_token_(std::move(webhook_token)),
      providers_(std::move(selected_providers)) {}

ApiResponse HttpApi::post_chat(const std::string& body) {
    try {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error&) {
            throw ParseError("body", "body is not valid JSON");
        }
        if (!j.is_object()) throw ParseError("body", "body must be a JSON object");

        InboundMessage m;
        m.channel = Channel::Web;
        m.message_id = next_message_id();
        m.timestamp = now_utc();
        m.session_id = optional_string(j, "session_id");
        m.sender_id = m.session_id.value_or(random_session_id());
        const auto text = optional_string(j, "text");
        const auto audio_b64 = optional_string(j, "audio_b64");
        if (text && audio_b64) throw ParseError("text", "send either text or audio_b64, not both");
        if (audio_b64) {
            AudioBlob blob;
            try {
                blob.bytes = base64::decode(*audio_b64);
            } catch (const InvalidArgument& e) {
                throw ParseError("audio_b64", e.what());
            }
            blob.mime = optional_string(j, "mime").value_or("audio/wav");
            m.kind = MessageKind::Audio;
            m.audio = std::move(blob);
        } else if (text) {
            m.kind = MessageKind::Text;
            m.text = *text;
        } else {
            throw ParseError("text", "one of text or audio_b64 is required");
        }
        if (auto hint = optional_string(j, "lang_hint")) m.lang_hint = lang_from_code(*hint);

        const auto result = service_.handle(m);
        const auto& out = result.message;
        nlohmann::ordered_json r;
        r["session_id"] = out.session_id;
        r["text"] = out.text;
        r["lang"] = out.lang.code;
        if (out.audio) r["audio_b64"] = base64::encode(out.audio->bytes);
        r["sources"] = out.sources;
        r["refused"] = out.refused;
        if (out.degraded) r["degraded"] = true;
        return json_response(200, r);
    } catch (const ParseError& e) {
        return error_response(400, e.what(), e.field());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

ApiResponse HttpApi::get_session(const std::string& session_id) {
    const auto s = service_.sessions().get(session_id);
    if (!s) return error_response(404, "unknown or expired session: " + session_id);
    return json_response(200, session_to_json(*s));
}

ApiResponse HttpApi::post_complaint(const std::string& session_id) {
    try {
        service_.record_complaint(session_id);
    } catch (const InvalidArgument& e) {
        return error_response(404, e.what());
    }
    return json_response(200, {{"status", "recorded"}});
}

ApiResponse HttpApi::get_analytics() { return json_response(200, to_json(service_.analytics().snapshot())); }

ApiResponse HttpApi::get_health() {
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["index_size"] = index_size_;
    if (!providers_.empty()) j["providers"] = providers_;
    return json_response(200, j);
}

ApiResponse HttpApi::post_webhook(const std::string& body, const std::string& token) {
    if (!webhook_token_.empty() && token != webhook_token_) return error_response(401, "bad webhook token");
    try {
        const auto m = parse_webhook(body);
        const auto result = service_.handle(m);
        return {200, webhook_response_json(result.message), "application/json"};
    } catch (const ParseError& e) {
        return error_response(400, e.what(), e.field());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

void HttpApi::mount(httplib::Server& server) {
    const auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server.Post("/v1/chat", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_chat(req.body));
    });
    server.Get(R"(/v1/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, get_session(req.matches[1]));
    });
    server.Post(R"(/v1/sessions/([^/]+)/complaint)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_complaint(req.matches[1]));
    });
    server.Get("/v1/analytics", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, get_analytics());
    });
    server.Get("/v1/health", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, get_health());
    });
    server.Post("/webhook/messages", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_webhook(req.body, req.get_header_value("X-Webhook-Token")));
    });
}

} // namespace polyrag
