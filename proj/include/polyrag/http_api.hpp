#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "polyrag/chat_service.hpp"

namespace httplib {
class Server;
}

namespace polyrag {

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// JSON handlers for the chat API and the messaging webhook. Each handler is
// callable directly; mount() binds them to an httplib server.
//
//   POST /v1/chat                     {"session_id"?,"text"?,"audio_b64"?,"mime"?,"lang_hint"?}
//   GET  /v1/sessions/{id}            session transcript
//   POST /v1/sessions/{id}/complaint  records a user complaint
//   GET  /v1/analytics                analytics snapshot
//   GET  /v1/health                   {"status":"ok","index_size":N}
//   POST /webhook/messages            webhook wire format
class HttpApi {
public:
    HttpApi(ChatService& service, std::size_t index_size, std::string webhook_token = {},
            std::map<std::string, std::string> selected_providers = {});

    ApiResponse post_chat(const std::string& body);
    ApiResponse get_session(const std::string& session_id);
    ApiResponse post_complaint(const std::string& session_id);
    ApiResponse get_analytics();
    ApiResponse get_health();
    ApiResponse post_webhook(const std::string& body, const std::string& token);

    void mount(httplib::Server& server);

private:
    ChatService& service_;
    std::size_t index_size_;
    std::string webhook_token_;
    std::map<std::string, std::string> providers_;
};

} // namespace polyrag
