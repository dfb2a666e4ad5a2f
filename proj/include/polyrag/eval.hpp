#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string_view>
#include <string>
#include <vector>

#include "polyrag/chunking.hpp"
#include "polyrag/conversation.hpp"
#include "polyrag/embedding.hpp"
#include "polyrag/index.hpp"
#include "polyrag/llm.hpp"
#include "polyrag/report.hpp"
#include "polyrag/synthetic.hpp"

namespace polyrag {

struct NamedStrategy {
    std::string name;
    StrategyOptions options;
};

// Fixed window plus the four alternative strategies, all at `params`.
std::vector<NamedStrategy> default_strategies(const std::vector<std::string>& entity_lexicon,
                                              const ChunkParams& params = {});

// Fraction of in-context questions with an answer-overlapping chunk in the
// top k.
double hit_at_k(const Index& index, const Embedder& embedder, const std::vector<QAPair>& qa, std::size_t k);

// Mean Jaccard similarity of token sets of adjacent sentences; nullopt for
// a chunk with fewer than two sentences.
std::optional<double> chunk_coherence(std::string_view chunk_text);

// Chunking comparison: relevance = hit@k, coherence = mean chunk coherence.
// Rows sorted by relevance, descending.
EvalReport eval_chunking(const std::vector<Document>& corpus, const std::vector<NamedStrategy>& strategies,
                         const std::vector<QAPair>& qa, std::size_t k = kDefaultRetrievalK);

struct PromptVariant {
    std::string name;
    std::string qa_template;
    bool grounding_guard = false;
    std::shared_ptr<LlmProvider> llm;
};

// standard (always-answer mock, no guard), chain_of_thought (grounded mock,
// no guard) and final_qa (grounded mock, grounding guard).
std::vector<PromptVariant> default_prompt_variants(const PromptTemplates& templates);

struct PromptEvalTiming {
    std::string variant;
    double mean_latency_ms = 0.0;
};

// Hallucination = share of out-of-context questions answered with anything
// but the refusal; accuracy = share of in-context answers containing the
// expected substring; cost = mean prompt + completion tokens per question.
// Wall-clock latency goes to `timings` so the report stays deterministic.
EvalReport eval_prompts(const std::vector<PromptVariant>& variants, const std::vector<QAPair>& qa,
                        const Index& index, const Embedder& embedder, const PromptTemplates& templates,
                        const EngineConfig& config = {}, std::vector<PromptEvalTiming>* timings = nullptr);

struct ProviderTable {
    std::string file;      // e.g. "table3"
    EvalReport report;
    std::string selected;
};

// Loads table3/4/5.csv from `fixture_dir` and runs provider selection.
std::vector<ProviderTable> eval_provider_selection(const std::filesystem::path& fixture_dir);

enum class EvalSuite { Chunking, Prompts, Providers, All };

std::optional<EvalSuite> parse_suite(std::string_view s);

struct SuiteOptions {
    EvalSuite suite = EvalSuite::All;
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir;
    std::filesystem::path fixture_dir;
    std::filesystem::path lexicon;
    std::size_t k = kDefaultRetrievalK;
    EngineConfig engine;
};

// Writes table1..table5 (.md and .csv) for the selected suites and returns
// the paths written. Timings are printed to `log` when given.
std::vector<std::filesystem::path> run_eval_suite(const SuiteOptions& options, std::ostream* log = nullptr);

} // namespace polyrag
