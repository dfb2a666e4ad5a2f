#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "polyrag/prompts.hpp"

namespace polyrag {

class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    // Throws LlmError on failure.
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string name() const = 0;
};

enum class MockLlmMode {
    Grounded,     // refuses when nothing in the context overlaps the question
    AlwaysAnswer, // never refuses
};

// Deterministic reference LLM for offline runs.
//
// QA-shaped prompts: returns the context sentence sharing the most distinct
// tokens with the question (first one on ties). With zero overlap, Grounded
// mode returns the refusal text and AlwaysAnswer mode returns the first
// context sentence. The chain_of_thought variant wraps the same answer in a
// short reasoning preamble.
//
// Condense prompts: returns the follow-up followed by the salient tokens
// (length >= 4, first-seen order, not already in the follow-up) of the last
// Human/Assistant exchange, space separated.
class MockLlm final : public LlmProvider {
public:
    explicit MockLlm(PromptTemplates templates, MockLlmMode mode = MockLlmMode::Grounded);

    std::string complete(const std::string& prompt) override;
    std::string name() const override { return "mock-llm"; }

    std::size_t qa_calls() const { return qa_calls_.load(); }
    std::size_t condense_calls() const { return condense_calls_.load(); }

    std::string answer_from_context(const std::string& context, const std::string& question) const;
    static std::string condense(const std::string& chat_history, const std::string& follow_up);

private:
    PromptTemplates templates_;
    MockLlmMode mode_;
    std::atomic<std::size_t> qa_calls_{0};
    std::atomic<std::size_t> condense_calls_{0};
};

// Always throws LlmError.
class FailingLlm final : public LlmProvider {
public:
    std::string complete(const std::string& prompt) override;
    std::string name() const override { return "failing-llm"; }
};

} // namespace polyrag
