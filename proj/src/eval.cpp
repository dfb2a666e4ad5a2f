#include "polyrag/eval.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <set>

#include "polyrag/errors.hpp"
#include "polyrag/profiles.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace polyrag {
namespace {

bool overlaps_answer(const Chunk& c, const QAPair& qa) {
    return c.doc_id == qa.expected_doc_id && c.char_start < qa.answer_end && qa.answer_start < c.char_end;
}

// Counts prompt and completion tokens as a deterministic cost proxy, and
// wall-clock time for the log.
class MeteredLlm final : public LlmProvider {
public:
    explicit MeteredLlm(LlmProvider& inner) : inner_(inner) {}

    std::string complete(const std::string& prompt) override {
        const auto t0 = std::chrono::steady_clock::now();
        auto out = inner_.complete(prompt);
        elapsed_ += std::chrono::steady_clock::now() - t0;
        tokens_ += text::tokenize(prompt).size() + text::tokenize(out).size();
        return out;
    }
    std::string name() const override { return inner_.name(); }

    std::size_t tokens() const { return tokens_; }
    double elapsed_ms() const { return std::chrono::duration<double, std::milli>(elapsed_).count(); }

private:
    LlmProvider& inner_;
    std::size_t tokens_ = 0;
    std::chrono::steady_clock::duration elapsed_{};
};

struct StrategyRow {
    ReportRow row;
    double relevance = 0.0;
};

StrategyRow evaluate_strategy(const std::vector<Document>& corpus, const NamedStrategy& s,
                              const std::vector<QAPair>& qa, std::size_t k) {
    StrategyRow out;
    out.row.name = s.name;
    auto chunks = chunk_corpus(corpus, s.options);
    if (chunks.empty()) {
        out.row.invalid = true;
        out.row.cells = {"invalid", "invalid", "invalid"};
        out.relevance = -1.0;
        return out;
    }

    double total_len = 0.0;
    double coherence_sum = 0.0;
    std::size_t coherence_n = 0;
    for (const auto& c : chunks) {
        total_len += static_cast<double>(utf8::length(c.text));
        if (auto v = chunk_coherence(c.text)) {
            coherence_sum += *v;
            ++coherence_n;
        }
    }
    const double mean_len = total_len / static_cast<double>(chunks.size());
    const double coherence = coherence_n ? coherence_sum / static_cast<double>(coherence_n) : 0.0;

    const HashBowEmbedder embedder;
    const std::size_t n_chunks = chunks.size();
    const Index index = Index::build(std::move(chunks), embedder);
    out.relevance = hit_at_k(index, embedder, qa, k);

    out.row.cells = {std::to_string(static_cast<long long>(mean_len + 0.5)), format_fixed(coherence),
                     format_fixed(out.relevance)};
    out.row.metrics = {{"chunk_size", mean_len},
                       {"chunks", static_cast<double>(n_chunks)},
                       {"coherence", coherence},
                       {"relevance", out.relevance}};
    return out;
}

} // namespace

std::vector<NamedStrategy> default_strategies(const std::vector<std::string>& entity_lexicon,
                                              const ChunkParams& params) {
    auto make = [&](std::string name, ChunkStrategy s) {
        NamedStrategy n;
        n.name = std::move(name);
        n.options.strategy = s;
        n.options.params = params;
        n.options.entity_lexicon = entity_lexicon;
        return n;
    };
    return {
        make("Paragraph-Based", ChunkStrategy::Paragraph),
        make("Semantic Unit Identification", ChunkStrategy::SemanticUnit),
        make("Topic Modeling", ChunkStrategy::Topic),
        make("Entity-Based", ChunkStrategy::Entity),
        make("Fixed Window (Optimal Setting)", ChunkStrategy::FixedWindow),
    };
}

double hit_at_k(const Index& index, const Embedder& embedder, const std::vector<QAPair>& qa, std::size_t k) {
    std::size_t total = 0;
    std::size_t hits = 0;
    for (const auto& q : qa) {
        if (!q.in_context) continue;
        ++total;
        const auto results = index.search(embedder.embed(q.question), k);
        if (std::any_of(results.begin(), results.end(),
                        [&](const ScoredChunk& r) { return overlaps_answer(r.chunk, q); }))
            ++hits;
    }
    return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::optional<double> chunk_coherence(std::string_view chunk_text) {
    const auto sents = text::sentences(chunk_text);
    if (sents.size() < 2) return std::nullopt;
    std::vector<std::set<std::string>> sets;
    sets.reserve(sents.size());
    for (const auto& s : sents) {
        auto toks = text::tokenize(s);
        sets.emplace_back(toks.begin(), toks.end());
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < sets.size(); ++i) {
        std::size_t common = 0;
        for (const auto& t : sets[i - 1]) common += sets[i].count(t);
        const std::size_t uni = sets[i - 1].size() + sets[i].size() - common;
        sum += uni ? static_cast<double>(common) / static_cast<double>(uni) : 0.0;
    }
    return sum / static_cast<double>(sets.size() - 1);
}

EvalReport eval_chunking(const std::vector<Document>& corpus, const std::vector<NamedStrategy>& strategies,
                         const std::vector<QAPair>& qa, std::size_t k) {
    if (k == 0) throw InvalidArgument("k must be positive");
    std::vector<StrategyRow> rows(strategies.size());
    std::vector<std::exception_ptr> errors(strategies.size());
    const long long n = static_cast<long long>(strategies.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            rows[i] = evaluate_strategy(corpus, strategies[i], qa, k);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const StrategyRow& a, const StrategyRow& b) { return a.relevance > b.relevance; });

    EvalReport report;
    report.title = "Comparison of Chunking Strategies";
    report.columns = {"Chunking Strategy", "Chunk Size", "Coherence", "Relevance"};
    for (auto& r : rows) report.rows.push_back(std::move(r.row));
    return report;
}

std::vector<PromptVariant> default_prompt_variants(const PromptTemplates& templates) {
    auto variant = [&](const char* key) {
        auto it = templates.variants.find(key);
        if (it == templates.variants.end()) throw InvalidArgument(std::string("missing prompt variant ") + key);
        return it->second;
    };
    return {
        {"Standard Prompt", variant("standard"), false,
         std::make_shared<MockLlm>(templates, MockLlmMode::AlwaysAnswer)},
        {"Chain-of-Thought Prompt", variant("chain_of_thought"), false,
         std::make_shared<MockLlm>(templates, MockLlmMode::Grounded)},
        {"Final QA Prompt", templates.qa_template, true, std::make_shared<MockLlm>(templates, MockLlmMode::Grounded)},
    };
}

EvalReport eval_prompts(const std::vector<PromptVariant>& variants, const std::vector<QAPair>& qa,
                        const Index& index, const Embedder& embedder, const PromptTemplates& templates,
                        const EngineConfig& config, std::vector<PromptEvalTiming>* timings) {
    EvalReport report;
    report.title = "Prompt Strategy Evaluation";
    report.columns = {"Prompt Strategy", "Hallucination", "Answer Accuracy", "Response Time (tokens)"};

    for (const auto& v : variants) {
        if (!v.llm) throw InvalidArgument("prompt variant '" + v.name + "' has no LLM");
        PromptTemplates t = templates;
        t.qa_template = v.qa_template;
        EngineConfig c = config;
        if (!v.grounding_guard) c.grounding_threshold = -std::numeric_limits<double>::infinity();
        MeteredLlm metered(*v.llm);
        ConversationEngine engine(index, embedder, metered, t, c);

        std::size_t ooc = 0, hallucinated = 0, inc = 0, accurate = 0, answered = 0;
        for (const auto& q : qa) {
            Session session;
            session.session_id = "eval";
            const ChatTurn turn = engine.answer(session, q.question);
            const bool refused = turn.refused || turn.answer_en.find(t.refusal_text) != std::string::npos;
            ++answered;
            if (q.in_context) {
                ++inc;
                if (!refused && !q.expected_answer_substring.empty() &&
                    turn.answer_en.find(q.expected_answer_substring) != std::string::npos)
                    ++accurate;
            } else {
                ++ooc;
                if (!refused && !turn.degraded) ++hallucinated;
            }
        }
        const double hallucination = ooc ? static_cast<double>(hallucinated) / static_cast<double>(ooc) : 0.0;
        const double accuracy = inc ? static_cast<double>(accurate) / static_cast<double>(inc) : 0.0;
        const double tokens = answered ? static_cast<double>(metered.tokens()) / static_cast<double>(answered) : 0.0;

        ReportRow row;
        row.name = v.name;
        row.cells = {format_fixed(hallucination), format_fixed(accuracy), format_fixed(tokens, 1)};
        row.metrics = {{"hallucination", hallucination},
                       {"accuracy", accuracy},
                       {"tokens", tokens},
                       {"hallucinated", static_cast<double>(hallucinated)},
                       {"out_of_context", static_cast<double>(ooc)}};
        report.rows.push_back(std::move(row));
        if (timings)
            timings->push_back({v.name, answered ? metered.elapsed_ms() / static_cast<double>(answered) : 0.0});
    }
    return report;
}

std::vector<ProviderTable> eval_provider_selection(const std::filesystem::path& fixture_dir) {
    struct TableDef {
        const char* file;
        const char* title;
        Capability capability;
        std::vector<std::string> columns;
    };
    const std::vector<TableDef> tables = {
        {"table3", "Translation and Language Detection Comparison", Capability::Translate,
         {"Translation Service", "Accuracy (%)", "Speed (ms)", "Selected"}},
        {"table4", "Text-to-Speech Model Comparison", Capability::TTS,
         {"TTS Model", "Response Time (ms)", "Cost ($)", "Accuracy (%)", "Selected"}},
        {"table5", "Comparison of Large Language Models", Capability::LLM,
         {"LLM", "Accuracy (%)", "Processing Time (ms)", "Selected"}},
    };

    auto num = [](double v) {
        std::string s = format_fixed(v, 3);
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };

    std::vector<ProviderTable> out;
    for (const auto& def : tables) {
        const auto path = fixture_dir / (std::string(def.file) + ".csv");
        if (!std::filesystem::exists(path)) throw IoError(path.string(), "provider fixture missing");
        const auto profiles = load_profiles_csv(path.string());
        const auto chosen = select_provider(profiles, def.capability);

        ProviderTable t;
        t.file = def.file;
        t.selected = chosen.name;
        t.report.title = def.title;
        t.report.columns = def.columns;
        for (const auto& p : profiles) {
            if (p.capability != def.capability) continue;
            ReportRow row;
            row.name = p.name;
            const std::string sel = p.name == chosen.name ? "yes" : "";
            switch (def.capability) {
            case Capability::Translate: row.cells = {num(p.accuracy), num(p.latency_ms), sel}; break;
            case Capability::TTS: row.cells = {num(p.latency_ms), num(p.cost), num(p.accuracy), sel}; break;
            default: row.cells = {num(p.accuracy), num(p.latency_ms), sel}; break;
            }
            row.metrics = {{"accuracy", p.accuracy}, {"latency_ms", p.latency_ms}, {"cost", p.cost},
                           {"selected", p.name == chosen.name ? 1.0 : 0.0}};
            t.report.rows.push_back(std::move(row));
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::optional<EvalSuite> parse_suite(std::string_view s) {
    if (s == "chunking") return EvalSuite::Chunking;
    if (s == "prompts") return EvalSuite::Prompts;
    if (s == "providers") return EvalSuite::Providers;
    if (s == "all") return EvalSuite::All;
    return std::nullopt;
}

std::vector<std::filesystem::path> run_eval_suite(const SuiteOptions& options, std::ostream* log) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw IoError(options.out_dir.string(), "cannot create output directory");

    std::vector<fs::path> written;
    auto emit = [&](const EvalReport& r, const std::string& stem) {
        const auto md = options.out_dir / (stem + ".md");
        const auto csv = options.out_dir / (stem + ".csv");
        emit_report(r, ReportFormat::Markdown, md.string());
        emit_report(r, ReportFormat::Csv, csv.string());
        written.push_back(md);
        written.push_back(csv);
    };

    const bool all = options.suite == EvalSuite::All;
    if (all || options.suite != EvalSuite::Providers) {
        const auto manifest = options.corpus_dir / "manifest.csv";
        auto loaded = load_corpus(options.corpus_dir,
                                  fs::exists(manifest) ? std::optional<fs::path>(manifest) : std::nullopt);
        if (!loaded.failures.empty())
            throw InvalidArgument("corpus has unreadable files, first: " + loaded.failures.front().path + " (" +
                                  loaded.failures.front().reason + ")");
        const auto qa = load_qa_pairs(options.corpus_dir / "qa_pairs.jsonl");

        if (all || options.suite == EvalSuite::Chunking) {
            if (options.lexicon.empty()) throw InvalidArgument("chunking suite needs an entity lexicon");
            const auto lexicon = load_lexicon(options.lexicon.string());
            emit(eval_chunking(loaded.documents, default_strategies(lexicon), qa, options.k), "table1");
        }
        if (all || options.suite == EvalSuite::Prompts) {
            const HashBowEmbedder embedder;
            const Index index = Index::build(chunk_corpus(loaded.documents, StrategyOptions{}), embedder);
            const auto templates = PromptTemplates::defaults();
            std::vector<PromptEvalTiming> timings;
            EngineConfig config = options.engine;
            config.retrieval_k = options.k;
            emit(eval_prompts(default_prompt_variants(templates), qa, index, embedder, templates, config, &timings),
                 "table2");
            if (log)
                for (const auto& t : timings)
                    *log << "latency " << t.variant << ": " << format_fixed(t.mean_latency_ms, 3) << " ms/question\n";
        }
    }
    if (all || options.suite == EvalSuite::Providers) {
        for (const auto& t : eval_provider_selection(options.fixture_dir)) {
            emit(t.report, t.file);
            if (log) *log << t.file << " selected: " << t.selected << "\n";
        }
    }
    if (log) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        *log << "eval finished in " << format_fixed(secs, 2) << " s\n";
    }
    return written;
}

} // namespace polyrag
