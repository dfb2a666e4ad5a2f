#include "polyrag/config.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "polyrag/chunk_store.hpp"
#include "polyrag/corpus.hpp"
#include "polyrag/errors.hpp"

namespace fs = std::filesystem;

namespace polyrag {

namespace {

std::string resolve_path(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    const fs::path path(p);
    return path.is_absolute() ? path.string() : (base / path).lexically_normal().string();
}

} // namespace

ServiceConfig ServiceConfig::load(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot read config");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("config " + path.string() + ": " + e.what());
    }
    const auto base = fs::absolute(path).parent_path();
    ServiceConfig c;
    try {
        const auto str = [&](const char* key) { return resolve_path(base, j.value(key, std::string{})); };
        c.corpus_root = str("corpus_root");
        c.manifest = str("manifest");
        c.store_path = str("store_path");
        c.index_path = str("index_path");
        c.lexicon = str("lexicon");
        c.templates = str("templates");
        c.dictionary = str("dictionary");
        c.journal_path = str("journal_path");
        c.media_dir = str("media_dir");
        c.static_dir = str("static_dir");
        c.strategy = j.value("strategy", c.strategy);
        c.chunk_params.size = j.value("chunk_size", c.chunk_params.size);
        c.chunk_params.overlap = j.value("chunk_overlap", c.chunk_params.overlap);
        if (j.contains("profiles")) {
            for (const auto& [k, v] : j.at("profiles").items()) c.profiles[k] = resolve_path(base, v.get<std::string>());
        }
        if (j.contains("providers")) c.providers = j.at("providers").get<std::map<std::string, std::string>>();
        c.engine.retrieval_k = j.value("retrieval_k", c.engine.retrieval_k);
        c.engine.grounding_threshold = j.value("grounding_threshold", c.engine.grounding_threshold);
        c.engine.history_window = j.value("history_window", c.engine.history_window);
        c.session_ttl = std::chrono::seconds(
            static_cast<long long>(j.value("session_ttl_hours", 24.0) * 3600.0));
        if (j.contains("listen")) {
            c.host = j.at("listen").value("host", c.host);
            c.port = j.at("listen").value("port", c.port);
        }
        c.webhook_token = j.value("webhook_token", std::string{});
        c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config " + path.string() + ": " + e.what());
    }
    c.chunk_params.validate();
    return c;
}

std::unique_ptr<Pipeline> Pipeline::build(const ServiceConfig& config) {
    for (const auto& [role, kind] : config.providers) {
        if (kind != "mock") {
            throw InvalidArgument("provider '" + role + "' set to '" + kind +
                                  "': only mock adapters are built into this binary");
        }
    }
    for (const auto& path : {config.store_path, config.index_path, config.journal_path}) {
        const auto parent = fs::path(path).parent_path();
        if (!path.empty() && !parent.empty()) fs::create_directories(parent);
    }
    auto p = std::make_unique<Pipeline>();

    // Provider choice from the measured profiles.
    static const std::map<std::string, Capability> kRoles{
        {"translate", Capability::Translate}, {"tts", Capability::TTS}, {"stt", Capability::STT}, {"llm", Capability::LLM}};
    for (const auto& [role, csv] : config.profiles) {
        const auto cap = kRoles.find(role);
        if (cap == kRoles.end()) throw InvalidArgument("unknown profile role: " + role);
        p->selected_providers[role] = select_provider(load_profiles_csv(csv), cap->second).name;
    }

    std::vector<Chunk> chunks;
    if (!config.store_path.empty() && fs::exists(config.store_path)) {
        chunks = read_chunk_store(config.store_path);
    } else if (!config.corpus_root.empty()) {
        const auto loaded = load_corpus(config.corpus_root,
                                        config.manifest.empty() ? std::nullopt
                                                                : std::optional<fs::path>(config.manifest));
        for (const auto& f : loaded.failures) std::cerr << "skipped " << f.path << ": " << f.reason << "\n";
        StrategyOptions opts;
        const auto strategy = parse_strategy(config.strategy);
        if (!strategy) throw InvalidArgument("unknown strategy: " + config.strategy);
        opts.strategy = *strategy;
        opts.params = config.chunk_params;
        if (!config.lexicon.empty()) opts.entity_lexicon = load_lexicon(config.lexicon);
        if (!config.store_path.empty()) {
            ingest(loaded.documents, opts, config.store_path);
            chunks = read_chunk_store(config.store_path);
        } else {
            chunks = chunk_corpus(loaded.documents, opts);
        }
    }
    if (!chunks.empty()) {
        if (!config.index_path.empty() && fs::exists(config.index_path)) {
            p->index = Index::load(config.index_path, chunks);
        } else {
            p->index = Index::build(chunks, p->embedder);
            if (!config.index_path.empty()) p->index.save(config.index_path);
        }
    }

    p->templates = config.templates.empty() ? PromptTemplates::defaults() : PromptTemplates::load(config.templates);
    p->translator = config.dictionary.empty()
                        ? std::make_unique<DictionaryTranslator>()
                        : std::make_unique<DictionaryTranslator>(DictionaryTranslator::load(config.dictionary));
    p->router = std::make_unique<LanguageRouter>(*p->translator);
    p->llm = std::make_unique<MockLlm>(p->templates);
    p->stt_inner = std::make_unique<MockSpeechToText>(*p->router);
    p->tts_inner = std::make_unique<MockTextToSpeech>();
    p->stt = std::make_unique<LimitedSpeechToText>(*p->stt_inner, config.max_in_flight);
    p->tts = std::make_unique<LimitedTextToSpeech>(*p->tts_inner, config.max_in_flight);
    if (!config.media_dir.empty()) p->media = std::make_unique<DirectoryMediaStore>(config.media_dir);
    p->sessions = std::make_unique<SessionStore>(config.journal_path, config.session_ttl);
    for (const auto& e : p->sessions->turn_log()) p->analytics.record(e);
    for (std::size_t i = 0; i < p->sessions->complaint_count(); ++i) p->analytics.record_complaint();
    p->engine = std::make_unique<ConversationEngine>(p->index, p->embedder, *p->llm, p->templates, config.engine);
    p->service = std::make_unique<ChatService>(*p->engine, *p->router, *p->stt, *p->tts, *p->sessions, p->analytics,
                                               p->media.get());
    return p;
}

} // namespace polyrag
