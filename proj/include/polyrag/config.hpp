#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "polyrag/analytics.hpp"
#include "polyrag/chat_service.hpp"
#include "polyrag/chunking.hpp"
#include "polyrag/conversation.hpp"
#include "polyrag/embedding.hpp"
#include "polyrag/index.hpp"
#include "polyrag/language.hpp"
#include "polyrag/llm.hpp"
#include "polyrag/profiles.hpp"
#include "polyrag/session_store.hpp"
#include "polyrag/speech.hpp"

namespace polyrag {

// Service configuration, read from a JSON file. Relative paths resolve
// against the file's directory. See config/polyrag.example.json.
struct ServiceConfig {
    std::string corpus_root;
    std::string manifest;
    std::string store_path;  // chunk store; built from corpus_root when absent
    std::string index_path;  // optional persisted index
    std::string strategy = "fixed";
    ChunkParams chunk_params;
    std::string lexicon;
    std::string templates;   // empty: built-in templates
    std::string dictionary;  // mock translator phrase table
    std::map<std::string, std::string> profiles; // "translate"|"tts"|"llm" -> CSV
    std::map<std::string, std::string> providers; // role -> "mock"|"real"
    EngineConfig engine;
    std::chrono::seconds session_ttl = kDefaultSessionTtl;
    std::string journal_path;
    std::string media_dir;
    std::string static_dir;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string webhook_token;
    int max_in_flight = kDefaultMaxInFlight;

    static ServiceConfig load(const std::filesystem::path& path);
};

// Every long-lived object the service needs, wired together.
struct Pipeline {
    HashBowEmbedder embedder;
    Index index;
    PromptTemplates templates;
    std::unique_ptr<Translator> translator;
    std::unique_ptr<LanguageRouter> router;
    std::unique_ptr<LlmProvider> llm;
    std::unique_ptr<SpeechToText> stt_inner;
    std::unique_ptr<TextToSpeech> tts_inner;
    std::unique_ptr<SpeechToText> stt;
    std::unique_ptr<TextToSpeech> tts;
    std::unique_ptr<MediaResolver> media;
    std::unique_ptr<SessionStore> sessions;
    AnalyticsCounters analytics;
    std::unique_ptr<ConversationEngine> engine;
    std::unique_ptr<ChatService> service;
    std::map<std::string, std::string> selected_providers; // capability -> profile name

    static std::unique_ptr<Pipeline> build(const ServiceConfig& config);
};

} // namespace polyrag
