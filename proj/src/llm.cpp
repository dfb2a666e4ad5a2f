#include "polyrag/llm.hpp"

#include <set>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

MockLlm::MockLlm(PromptTemplates templates, MockLlmMode mode) : templates_(std::move(templates)), mode_(mode) {}

std::string MockLlm::answer_from_context(const std::string& context, const std::string& question) const {
    const auto q_tokens = text::tokenize(question);
    const std::set<std::string> wanted(q_tokens.begin(), q_tokens.end());

    std::vector<std::string> candidates;
    std::size_t start = 0;
    while (start <= context.size()) {
        const std::size_t sep = context.find(kContextSeparator, start);
        const auto piece = std::string_view(context).substr(start, sep == std::string::npos ? std::string::npos : sep - start);
        for (auto& s : text::sentences(piece)) candidates.push_back(std::move(s));
        if (sep == std::string::npos) break;
        start = sep + kContextSeparator.size();
    }

    std::size_t best_overlap = 0;
    const std::string* best = nullptr;
    for (const auto& sentence : candidates) {
        const auto toks = text::tokenize(sentence);
        const std::set<std::string> distinct(toks.begin(), toks.end());
        std::size_t overlap = 0;
        for (const auto& t : distinct) overlap += wanted.count(t);
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = &sentence;
        }
    }
    if (best) return *best;
    if (mode_ == MockLlmMode::AlwaysAnswer) {
        return candidates.empty() ? std::string("Yes, that is covered by company policy.") : candidates.front();
    }
    return templates_.refusal_text;
}

std::string MockLlm::condense(const std::string& chat_history, const std::string& follow_up) {
    std::string last_human, last_assistant;
    for (const auto& line : text::split(chat_history, '\n')) {
        const auto t = text::trim(line);
        if (t.rfind("Human:", 0) == 0) {
            last_human = t.substr(6);
            last_assistant.clear();
        } else if (t.rfind("Assistant:", 0) == 0) {
            last_assistant = t.substr(10);
        }
    }
    const auto follow_tokens = text::tokenize(follow_up);
    std::set<std::string> seen(follow_tokens.begin(), follow_tokens.end());
    std::vector<std::string> salient;
    for (const auto& src : {last_human, last_assistant}) {
        for (auto& tok : text::tokenize(src)) {
            if (tok.size() >= 4 && seen.insert(tok).second) salient.push_back(std::move(tok));
        }
    }
    auto out = text::trim(follow_up);
    if (!salient.empty()) out += " " + text::join(salient, " ");
    return out;
}

std::string MockLlm::complete(const std::string& prompt) {
    if (auto m = match_template(templates_.condense_template, prompt)) {
        ++condense_calls_;
        return condense((*m)["chat_history"], (*m)["question"]);
    }
    if (auto m = match_template(templates_.qa_template, prompt)) {
        ++qa_calls_;
        return answer_from_context((*m)["context"], (*m)["question"]);
    }
    for (const auto& [name, tpl] : templates_.variants) {
        if (auto m = match_template(tpl, prompt)) {
            ++qa_calls_;
            auto answer = answer_from_context((*m)["context"], (*m)["question"]);
            if (name == "chain_of_thought" && answer != templates_.refusal_text) {
                answer = "First, find the statement in the context that addresses the question. Next, check "
                         "that it answers what was asked. Final answer: " + answer;
            }
            return answer;
        }
    }
    throw LlmError("mock-llm: unrecognized prompt shape");
}

std::string FailingLlm::complete(const std::string&) { throw LlmError("failing-llm: provider unavailable"); }

} // namespace polyrag
