#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrag/index.hpp"

namespace polyrag {

// The grounded QA instruction, verbatim.
inline constexpr std::string_view kQaInstruction =
    "You are a helpful AI assistant. Use the following pieces of context to answer the question at the end. "
    "If you don't know the answer, just say you don't know. DO NOT try to make up an answer. If the question "
    "is not related to the context, politely respond that you are tuned to only answer questions that are "
    "related to the context.";

inline constexpr std::string_view kCondenseInstruction =
    "Given the following conversation and a follow-up question, rephrase the follow-up question to be a "
    "standalone question.";

inline constexpr std::string_view kStandaloneMarker = "Standalone question:";

inline constexpr std::string_view kRefusalText =
    "I am tuned to only answer questions related to the provided context.";

inline constexpr std::string_view kContextSeparator = "\n\n---\n\n";

struct PromptTemplates {
    std::string qa_template;       // placeholders {context}, {question}
    std::string condense_template; // placeholders {chat_history}, {question}
    std::string refusal_text;
    // Alternative QA-shaped templates compared by the eval harness, keyed by
    // variant name ("standard", "chain_of_thought").
    std::map<std::string, std::string> variants;

    static PromptTemplates defaults();

    // JSON file with keys qa_template, condense_template, refusal_text and an
    // optional "variants" object. Throws IoError / InvalidArgument.
    static PromptTemplates load(const std::string& path);

    void validate() const;
};

// Single-pass substitution of {name} placeholders; substituted values are
// never rescanned.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values);

// Recovers placeholder values from a rendered prompt, or nullopt when the
// prompt does not have the template's shape.
std::optional<std::map<std::string, std::string>> match_template(std::string_view tpl, std::string_view rendered);

std::string join_context(const std::vector<ScoredChunk>& chunks);

std::string assemble_qa_prompt(std::string_view qa_template, const std::vector<ScoredChunk>& chunks,
                               std::string_view question_en);

inline std::string assemble_qa_prompt(const std::vector<ScoredChunk>& chunks, std::string_view question_en) {
    return assemble_qa_prompt(PromptTemplates::defaults().qa_template, chunks, question_en);
}

} // namespace polyrag
