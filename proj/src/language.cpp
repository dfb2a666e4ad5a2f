#include "polyrag/language.hpp"

#include <array>
#include <fstream>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace polyrag {

std::string_view to_string(Script s) {
    switch (s) {
    case Script::Latin: return "Latin";
    case Script::Arabic: return "Arabic";
    case Script::Gurmukhi: return "Gurmukhi";
    case Script::Other: return "Other";
    }
    return "Other";
}

LangTag lang_from_code(std::string_view code) {
    LangTag tag;
    tag.code = std::string(code);
    if (code == "ur" || code == "ar" || code == "fa") {
        tag.script = Script::Arabic;
    } else if (code == "pa") {
        tag.script = Script::Gurmukhi;
    } else {
        tag.script = Script::Latin;
    }
    tag.confidence = 1.0;
    return tag;
}

namespace {

enum class Letter { None, Latin, Arabic, Gurmukhi, Other };

Letter classify(char32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return Letter::Latin;
    if (cp < 0x80) return Letter::None;
    if ((cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) || (cp >= 0x1E00 && cp <= 0x1EFF)) {
        return Letter::Latin;
    }
    // Arabic blocks, minus digits and punctuation.
    if ((cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) || (cp >= 0x08A0 && cp <= 0x08FF) ||
        (cp >= 0xFB50 && cp <= 0xFDFF) || (cp >= 0xFE70 && cp <= 0xFEFF)) {
        if ((cp >= 0x0660 && cp <= 0x066D) || (cp >= 0x06F0 && cp <= 0x06F9) || cp == 0x060C || cp == 0x061B ||
            cp == 0x061F || cp == 0x06D4 || cp <= 0x0605) {
            return Letter::None;
        }
        return Letter::Arabic;
    }
    if (cp >= 0x0A00 && cp <= 0x0A7F) {
        if (cp >= 0x0A66 && cp <= 0x0A6F) return Letter::None;
        return Letter::Gurmukhi;
    }
    // General punctuation, symbols, spaces.
    if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) || cp == 0x00A0 ||
        (cp >= 0x0080 && cp <= 0x00BF) || (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0x1F000 && cp <= 0x1FAFF)) {
        return Letter::None;
    }
    return Letter::Other;
}

} // namespace

LangTag detect_language(std::string_view text) {
    // Counts indexed by Script enum order; ties resolve to the earlier script.
    std::array<std::size_t, 4> counts{};
    std::size_t letters = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        switch (classify(utf8::decode_next(text, pos))) {
        case Letter::None: continue;
        case Letter::Latin: ++counts[0]; break;
        case Letter::Arabic: ++counts[1]; break;
        case Letter::Gurmukhi: ++counts[2]; break;
        case Letter::Other: ++counts[3]; break;
        }
        ++letters;
    }
    LangTag tag;
    if (letters == 0) {
        tag.code = "en";
        tag.script = Script::Latin;
        tag.confidence = 0.0;
        return tag;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best]) best = i;
    }
    tag.script = static_cast<Script>(best);
    switch (tag.script) {
    case Script::Arabic: tag.code = "ur"; break;
    case Script::Gurmukhi: tag.code = "pa"; break;
    default: tag.code = "en"; break;
    }
    tag.confidence = static_cast<double>(counts[best]) / static_cast<double>(letters);
    return tag;
}

DictionaryTranslator::DictionaryTranslator(std::string name) : name_(std::move(name)) {}

DictionaryTranslator DictionaryTranslator::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read translation dictionary");
    DictionaryTranslator dict;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::is_blank(line) || line.front() == '#') continue;
        const auto f = text::split(line, '\t');
        if (f.size() != 4) {
            throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected 4 tab-separated fields");
        }
        if (line_no == 1 && f[0] == "src_lang") continue;
        dict.add(f[0], f[1], f[2], f[3]);
    }
    return dict;
}

void DictionaryTranslator::add(std::string_view src_lang, std::string_view dst_lang, std::string_view src_text,
                               std::string_view dst_text) {
    const auto s = text::trim(src_text);
    const auto d = text::trim(dst_text);
    table_[{std::string(src_lang), std::string(dst_lang), s}] = d;
    table_.try_emplace({std::string(dst_lang), std::string(src_lang), d}, s);
    entries_.push_back({std::string(src_lang), std::string(dst_lang), s, d});
}

std::string DictionaryTranslator::translate(std::string_view text, std::string_view src, std::string_view dst) {
    ++calls_;
    const auto it = table_.find({std::string(src), std::string(dst), text::trim(text)});
    if (it == table_.end()) {
        throw TranslationError(name_, "no entry for " + std::string(src) + "->" + std::string(dst) + " \"" +
                                          std::string(text) + "\"");
    }
    return it->second;
}

std::string FailingTranslator::translate(std::string_view, std::string_view, std::string_view) {
    throw TranslationError(name(), "provider unavailable");
}

LanguageRouter::LanguageRouter(Translator& translator, const LanguageDetector* detector)
    : translator_(translator), detector_(detector) {}

LangTag LanguageRouter::detect(std::string_view text) const {
    return detector_ ? detector_->detect(text) : detect_language(text);
}

std::string LanguageRouter::translate(std::string_view text, const LangTag& src, const LangTag& dst) {
    if (src.same_language(dst)) return std::string(text);
    try {
        return translator_.translate(text, src.code, dst.code);
    } catch (const TranslationError&) {
        throw;
    } catch (const std::exception& e) {
        throw TranslationError(translator_.name(), e.what());
    }
}

RoutedQuery LanguageRouter::route_inbound(std::string_view text, const std::optional<LangTag>& hint) {
    if (text::is_blank(text)) throw InvalidArgument("cannot route empty text");
    RoutedQuery q;
    q.original_text = std::string(text);
    q.original_lang = hint ? *hint : detect(text);
    if (q.original_lang.code == "en") {
        q.english_text = q.original_text;
        return q;
    }
    try {
        q.english_text = translate(text, q.original_lang, english());
    } catch (const TranslationError& e) {
        throw RoutingError(q.original_text, q.original_lang.code, std::string("inbound translation failed: ") + e.what());
    }
    if (text::is_blank(q.english_text)) {
        throw RoutingError(q.original_text, q.original_lang.code, "translator returned empty text");
    }
    return q;
}

RoutedAnswer LanguageRouter::route_outbound(std::string_view answer_en, const LangTag& original_lang) {
    if (text::is_blank(answer_en)) throw InvalidArgument("cannot route an empty answer");
    if (original_lang.code == "en") return {std::string(answer_en), original_lang, false};
    try {
        return {translate(answer_en, english(), original_lang), original_lang, false};
    } catch (const TranslationError&) {
        return {std::string(answer_en), english(), true};
    }
}

} // namespace polyrag
