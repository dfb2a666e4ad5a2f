#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace polyrag {

enum class Script { Latin, Arabic, Gurmukhi, Other };

std::string_view to_string(Script s);

struct LangTag {
    std::string code = "en";
    Script script = Script::Latin;
    double confidence = 1.0;

    bool same_language(const LangTag& other) const { return code == other.code; }
};

// Tag for a known code with its usual script and confidence 1.
LangTag lang_from_code(std::string_view code);
inline LangTag english() { return lang_from_code("en"); }

// Majority Unicode script over letters: Arabic -> "ur", Gurmukhi -> "pa",
// anything else -> "en". Text without letters yields "en" with confidence 0.
LangTag detect_language(std::string_view text);

class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;
    virtual LangTag detect(std::string_view text) const = 0;
};

class Translator {
public:
    virtual ~Translator() = default;
    // Throws TranslationError on failure.
    virtual std::string translate(std::string_view text, std::string_view src, std::string_view dst) = 0;
    virtual std::string name() const = 0;
};

// Offline translator backed by a bidirectional phrase table. Lookups are
// exact on the trimmed text; a miss is a TranslationError.
class DictionaryTranslator final : public Translator {
public:
    explicit DictionaryTranslator(std::string name = "mock-dictionary");
    DictionaryTranslator(DictionaryTranslator&& other) noexcept
        : name_(std::move(other.name_)), table_(std::move(other.table_)), entries_(std::move(other.entries_)),
          calls_(other.calls_.load()) {}

    // TSV rows: src_lang, dst_lang, src_text, dst_text.
    static DictionaryTranslator load(const std::string& path);

    // Registers src->dst and, unless already present, dst->src.
    void add(std::string_view src_lang, std::string_view dst_lang, std::string_view src_text,
             std::string_view dst_text);

    std::string translate(std::string_view text, std::string_view src, std::string_view dst) override;
    std::string name() const override { return name_; }

    std::size_t calls() const { return calls_.load(); }
    std::size_t size() const { return table_.size(); }

    struct Entry {
        std::string src_lang, dst_lang, src_text, dst_text;
    };
    // Entries in insertion order, as given (reverse directions omitted).
    const std::vector<Entry>& entries() const { return entries_; }

private:
    using Key = std::tuple<std::string, std::string, std::string>;
    std::string name_;
    std::map<Key, std::string> table_;
    std::vector<Entry> entries_;
    std::atomic<std::size_t> calls_{0};
};

// Translator that always fails; stands in for a provider outage.
class FailingTranslator final : public Translator {
public:
    std::string translate(std::string_view, std::string_view, std::string_view) override;
    std::string name() const override { return "failing"; }
};

struct RoutedQuery {
    std::string english_text;
    LangTag original_lang;
    std::string original_text;
};

struct RoutedAnswer {
    std::string text;
    LangTag lang;
    bool degraded = false;
};

// Pivots every inbound message to English and every answer back to the
// asker's language.
class LanguageRouter {
public:
    explicit LanguageRouter(Translator& translator, const LanguageDetector* detector = nullptr);

    LangTag detect(std::string_view text) const;

    // src == dst returns `text` without calling the provider.
    std::string translate(std::string_view text, const LangTag& src, const LangTag& dst);

    // Throws InvalidArgument on empty text and RoutingError when translation
    // fails.
    RoutedQuery route_inbound(std::string_view text, const std::optional<LangTag>& hint = std::nullopt);

    // Translation failure returns the English answer with degraded = true.
    RoutedAnswer route_outbound(std::string_view answer_en, const LangTag& original_lang);

    Translator& translator() { return translator_; }

private:
    Translator& translator_;
    const LanguageDetector* detector_;
};

} // namespace polyrag
