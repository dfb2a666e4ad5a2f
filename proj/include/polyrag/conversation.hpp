#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrag/embedding.hpp"
#include "polyrag/index.hpp"
#include "polyrag/language.hpp"
#include "polyrag/llm.hpp"
#include "polyrag/prompts.hpp"
#include "polyrag/time_util.hpp"

namespace polyrag {

enum class Modality { Text, Voice };
enum class Channel { Web, Webhook, CLI };

std::string_view to_string(Modality m);
std::string_view to_string(Channel c);
std::optional<Modality> parse_modality(std::string_view s);
std::optional<Channel> parse_channel(std::string_view s);

struct ChatTurn {
    std::string question_en;
    std::string answer_en;
    std::vector<std::string> sources;
    bool refused = false;
    Instant timestamp{};
    Modality modality = Modality::Text;
    LangTag original_lang;

    std::string original_text;   // as the user sent it
    std::string retrieval_query; // standalone English question used for retrieval
    std::string reply_text;      // answer in original_lang, as delivered
    bool degraded = false;
};

inline constexpr std::size_t kDefaultHistoryWindow = 5;

struct Session {
    std::string session_id;
    Channel channel = Channel::Web;
    std::string sender_id;
    std::vector<ChatTurn> turns;
    Instant created{};
    Instant last_active{};

    // The last `window` turns, oldest first.
    std::vector<ChatTurn> history(std::size_t window) const;
};

// "Human: ..." / "Assistant: ..." lines for the last `window` turns.
std::string format_history(const std::vector<ChatTurn>& history, std::size_t window);

struct CondenseResult {
    std::string question;
    bool degraded = false;
};

// Empty history returns the follow-up untouched without calling the LLM;
// an LLM failure falls back to the raw follow-up with degraded set.
CondenseResult condense_question(const std::vector<ChatTurn>& history, std::string_view follow_up_en,
                                 LlmProvider& llm, const PromptTemplates& templates,
                                 std::size_t window = kDefaultHistoryWindow);

struct EngineConfig {
    std::size_t retrieval_k = kDefaultRetrievalK;
    double grounding_threshold = 0.15;
    std::size_t history_window = kDefaultHistoryWindow;
};

struct TurnContext {
    Modality modality = Modality::Text;
    LangTag original_lang = english();
    std::string original_text;
    Instant now = now_utc();
};

// Condense -> retrieve -> grounding guard -> grounded QA prompt -> LLM.
class ConversationEngine {
public:
    ConversationEngine(const Index& index, const Embedder& embedder, LlmProvider& llm, PromptTemplates templates,
                       EngineConfig config = {});

    // Appends the turn to the session unless the LLM failed after grounding,
    // in which case a degraded turn is returned and the session is untouched.
    ChatTurn answer(Session& session, std::string_view question_en, const TurnContext& ctx = {});

    // Top retrieval results for an English query; empty when the query has
    // no tokens or the index is empty.
    std::vector<ScoredChunk> retrieve(std::string_view query_en) const;

    const PromptTemplates& templates() const { return templates_; }
    const EngineConfig& config() const { return config_; }
    const Index& index() const { return index_; }

private:
    const Index& index_;
    const Embedder& embedder_;
    LlmProvider& llm_;
    PromptTemplates templates_;
    EngineConfig config_;
};

} // namespace polyrag
