#include "polyrag/prompts.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.qa_template = std::string(kQaInstruction) + "\n\n{context}\n\nQuestion: {question}\nHelpful Answer:";
    t.condense_template = std::string(kCondenseInstruction) +
                          "\nChat History: {chat_history}\nFollow-Up Input: {question}\n" +
                          std::string(kStandaloneMarker);
    t.refusal_text = std::string(kRefusalText);
    t.variants["standard"] =
        "Use the following pieces of context to answer the question at the end.\n\n{context}\n\nQuestion: "
        "{question}\nAnswer:";
    t.variants["chain_of_thought"] =
        "Use the following pieces of context to answer the question at the end. Think through the problem step "
        "by step, then state the final answer.\n\n{context}\n\nQuestion: {question}\nLet's think step by step.";
    return t;
}

void PromptTemplates::validate() const {
    const auto require = [](const std::string& tpl, std::string_view what, std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            if (tpl.find(k) == std::string::npos) {
                throw InvalidArgument(std::string(what) + " template lacks placeholder " + k);
            }
        }
    };
    require(qa_template, "qa", {"{context}", "{question}"});
    require(condense_template, "condense", {"{chat_history}", "{question}"});
    for (const auto& [name, tpl] : variants) require(tpl, name, {"{context}", "{question}"});
    if (text::is_blank(refusal_text)) throw InvalidArgument("refusal text is empty");
}

PromptTemplates PromptTemplates::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read prompt templates");
    PromptTemplates t;
    try {
        const auto j = nlohmann::json::parse(in);
        t.qa_template = j.at("qa_template").get<std::string>();
        t.condense_template = j.at("condense_template").get<std::string>();
        t.refusal_text = j.at("refusal_text").get<std::string>();
        if (j.contains("variants")) t.variants = j.at("variants").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("bad template file " + path + ": " + e.what());
    }
    t.validate();
    return t;
}

namespace {

struct Piece {
    bool placeholder = false;
    std::string text; // literal text or placeholder name
};

std::vector<Piece> parse_pieces(std::string_view tpl) {
    std::vector<Piece> pieces;
    std::string literal;
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] == '{') {
            const std::size_t close = tpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                const auto name = tpl.substr(i + 1, close - i - 1);
                const bool ident = !name.empty() && name.find_first_not_of("abcdefghijklmnopqrstuvwxyz_") ==
                                                        std::string_view::npos;
                if (ident) {
                    pieces.push_back({false, std::move(literal)});
                    literal.clear();
                    pieces.push_back({true, std::string(name)});
                    i = close + 1;
                    continue;
                }
            }
        }
        literal.push_back(tpl[i]);
        ++i;
    }
    pieces.push_back({false, std::move(literal)});
    return pieces;
}

} // namespace

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& values) {
    std::string out;
    for (const auto& p : parse_pieces(tpl)) {
        if (!p.placeholder) {
            out += p.text;
        } else if (auto it = values.find(p.text); it != values.end()) {
            out += it->second;
        } else {
            out += "{" + p.text + "}";
        }
    }
    return out;
}

std::optional<std::map<std::string, std::string>> match_template(std::string_view tpl, std::string_view rendered) {
    // Pieces alternate literal, placeholder, literal, ... and end on a literal.
    // Separators are found by last occurrence, so earlier values (the context)
    // may contain them and later ones may not.
    const auto pieces = parse_pieces(tpl);
    const std::string& head = pieces.front().text;
    const std::string& tail = pieces.back().text;
    if (rendered.size() < head.size() + tail.size()) return std::nullopt;
    if (rendered.substr(0, head.size()) != head) return std::nullopt;
    if (rendered.substr(rendered.size() - tail.size()) != tail) return std::nullopt;

    std::map<std::string, std::string> values;
    std::size_t pos = head.size();
    const std::size_t limit = rendered.size() - tail.size();
    for (std::size_t i = 1; i + 1 < pieces.size(); i += 2) {
        const std::string& name = pieces[i].text;
        if (i + 2 == pieces.size()) {
            values[name] = std::string(rendered.substr(pos, limit - pos));
            pos = limit;
            break;
        }
        const std::string& sep = pieces[i + 1].text;
        const auto window = rendered.substr(0, limit);
        const std::size_t at = window.rfind(sep);
        if (at == std::string_view::npos || at < pos) return std::nullopt;
        values[name] = std::string(rendered.substr(pos, at - pos));
        pos = at + sep.size();
    }
    if (pos != limit) return std::nullopt;
    return values;
}

std::string join_context(const std::vector<ScoredChunk>& chunks) {
    std::string context;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (i) context += kContextSeparator;
        context += chunks[i].chunk.text;
    }
    return context;
}

std::string assemble_qa_prompt(std::string_view qa_template, const std::vector<ScoredChunk>& chunks,
                               std::string_view question_en) {
    return render_template(qa_template, {{"context", join_context(chunks)}, {"question", std::string(question_en)}});
}

} // namespace polyrag
