#include "polyrag/conversation.hpp"

#include <algorithm>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

std::string_view to_string(Modality m) { return m == Modality::Voice ? "voice" : "text"; }

std::string_view to_string(Channel c) {
    switch (c) {
    case Channel::Web: return "web";
    case Channel::Webhook: return "webhook";
    case Channel::CLI: return "cli";
    }
    return "web";
}

std::optional<Modality> parse_modality(std::string_view s) {
    if (s == "text") return Modality::Text;
    if (s == "voice") return Modality::Voice;
    return std::nullopt;
}

std::optional<Channel> parse_channel(std::string_view s) {
    if (s == "web") return Channel::Web;
    if (s == "webhook") return Channel::Webhook;
    if (s == "cli") return Channel::CLI;
    return std::nullopt;
}

std::vector<ChatTurn> Session::history(std::size_t window) const {
    const std::size_t n = std::min(window, turns.size());
    return {turns.end() - static_cast<std::ptrdiff_t>(n), turns.end()};
}

std::string format_history(const std::vector<ChatTurn>& history, std::size_t window) {
    const std::size_t n = std::min(window, history.size());
    std::vector<std::string> lines;
    for (auto it = history.end() - static_cast<std::ptrdiff_t>(n); it != history.end(); ++it) {
        lines.push_back("Human: " + it->question_en);
        lines.push_back("Assistant: " + it->answer_en);
    }
    return text::join(lines, "\n");
}

CondenseResult condense_question(const std::vector<ChatTurn>& history, std::string_view follow_up_en,
                                 LlmProvider& llm, const PromptTemplates& templates, std::size_t window) {
    if (text::is_blank(follow_up_en)) throw InvalidArgument("follow-up question is empty");
    if (history.empty() || window == 0) return {std::string(follow_up_en), false};
    const auto prompt = render_template(
        templates.condense_template,
        {{"chat_history", format_history(history, window)}, {"question", std::string(follow_up_en)}});
    try {
        auto standalone = text::trim(llm.complete(prompt));
        if (standalone.empty()) return {std::string(follow_up_en), true};
        return {std::move(standalone), false};
    } catch (const std::exception&) {
        return {std::string(follow_up_en), true};
    }
}

ConversationEngine::ConversationEngine(const Index& index, const Embedder& embedder, LlmProvider& llm,
                                       PromptTemplates templates, EngineConfig config)
    : index_(index), embedder_(embedder), llm_(llm), templates_(std::move(templates)), config_(config) {
    templates_.validate();
    if (config_.retrieval_k == 0) throw InvalidArgument("retrieval_k must be >= 1");
}

std::vector<ScoredChunk> ConversationEngine::retrieve(std::string_view query_en) const {
    if (index_.size() == 0) return {};
    Vector q;
    try {
        q = embedder_.embed(query_en);
    } catch (const EmptyTextError&) {
        return {};
    }
    return index_.search(q, config_.retrieval_k);
}

ChatTurn ConversationEngine::answer(Session& session, std::string_view question_en, const TurnContext& ctx) {
    if (text::is_blank(question_en)) throw InvalidArgument("question is empty");

    ChatTurn turn;
    turn.question_en = std::string(question_en);
    turn.modality = ctx.modality;
    turn.original_lang = ctx.original_lang;
    turn.original_text = ctx.original_text.empty() ? std::string(question_en) : ctx.original_text;
    turn.timestamp = session.turns.empty() ? ctx.now : std::max(ctx.now, session.turns.back().timestamp);

    const auto condensed =
        condense_question(session.history(config_.history_window), question_en, llm_, templates_,
                          config_.history_window);
    turn.retrieval_query = condensed.question;
    turn.degraded = condensed.degraded;

    const auto hits = retrieve(turn.retrieval_query);
    if (hits.empty() || hits.front().score < config_.grounding_threshold) {
        turn.refused = true;
        turn.answer_en = templates_.refusal_text;
    } else {
        const auto prompt = assemble_qa_prompt(templates_.qa_template, hits, turn.retrieval_query);
        try {
            turn.answer_en = text::trim(llm_.complete(prompt));
        } catch (const std::exception&) {
            turn.degraded = true;
            turn.answer_en.clear();
            return turn;
        }
        if (turn.answer_en.empty()) {
            turn.degraded = true;
            return turn;
        }
        if (turn.answer_en == templates_.refusal_text) {
            turn.refused = true;
        } else {
            for (const auto& h : hits) turn.sources.push_back(h.chunk.chunk_id);
        }
    }
    session.turns.push_back(turn);
    session.last_active = turn.timestamp;
    return turn;
}

} // namespace polyrag
