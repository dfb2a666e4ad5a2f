#include "polyrag/mock_dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace polyrag {
namespace {

constexpr char32_t kArabic[26] = {
    U'ا', U'ب', U'پ', U'ت', U'ٹ', U'ث', U'ج', U'چ', U'ح',
    U'خ', U'د', U'ڈ', U'ذ', U'ر', U'ڑ', U'ز', U'ژ', U'س',
    U'ش', U'ص', U'ض', U'ط', U'ظ', U'ع', U'غ', U'ف',
};
constexpr char32_t kArabicUpper = U'ـ'; // tatweel

constexpr char32_t kGurmukhi[26] = {
    U'ਅ', U'ਆ', U'ਇ', U'ਈ', U'ਉ', U'ਊ', U'ਏ', U'ਐ', U'ਓ',
    U'ਔ', U'ਕ', U'ਖ', U'ਗ', U'ਘ', U'ਚ', U'ਛ', U'ਜ', U'ਝ',
    U'ਟ', U'ਠ', U'ਡ', U'ਢ', U'ਤ', U'ਥ', U'ਦ', U'ਧ',
};
constexpr char32_t kGurmukhiUpper = U'ੴ';

} // namespace

std::string transliterate(std::string_view english, std::string_view lang) {
    const char32_t* table = nullptr;
    char32_t upper = 0;
    if (lang == "ur") {
        table = kArabic;
        upper = kArabicUpper;
    } else if (lang == "pa") {
        table = kGurmukhi;
        upper = kGurmukhiUpper;
    } else {
        throw UnsupportedLanguageError(std::string(lang));
    }
    std::string out;
    out.reserve(english.size() * 2);
    for (char c : english) {
        if (c >= 'a' && c <= 'z') {
            utf8::append(out, table[c - 'a']);
        } else if (c >= 'A' && c <= 'Z') {
            utf8::append(out, upper);
            utf8::append(out, table[c - 'A']);
        } else {
            out += c;
        }
    }
    return out;
}

std::vector<DictionaryTranslator::Entry> build_mock_dictionary(const SyntheticCorpus& corpus,
                                                               const std::vector<std::string>& extra_phrases) {
    std::vector<std::string> phrases;
    std::set<std::string> seen;
    auto add = [&](std::string_view s) {
        auto t = text::trim(s);
        const bool has_letter = std::any_of(t.begin(), t.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
        if (has_letter && t.find_first_of("\t\n") == std::string::npos && seen.insert(t).second) phrases.push_back(std::move(t));
    };
    for (const auto& p : extra_phrases) add(p);
    for (const auto& qa : corpus.qa_pairs) add(qa.question);
    for (const auto& d : corpus.documents)
        for (const auto& s : text::sentences(d.text)) add(s);
    for (const auto& c : chunk_corpus(corpus.documents, StrategyOptions{}))
        for (const auto& s : text::sentences(c.text)) add(s);

    std::vector<DictionaryTranslator::Entry> out;
    out.reserve(phrases.size() * 2);
    for (const char* lang : {"ur", "pa"})
        for (const auto& p : phrases) out.push_back({"en", lang, p, transliterate(p, lang)});
    return out;
}

void write_dictionary_tsv(const std::vector<DictionaryTranslator::Entry>& entries, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path, "cannot write dictionary");
    f << "src_lang\tdst_lang\tsrc_text\tdst_text\n";
    for (const auto& e : entries) {
        for (const auto* field : {&e.src_text, &e.dst_text})
            if (field->find_first_of("\t\n") != std::string::npos)
                throw InvalidArgument("dictionary text contains a tab or newline: " + *field);
        f << e.src_lang << '\t' << e.dst_lang << '\t' << e.src_text << '\t' << e.dst_text << '\n';
    }
    if (!f) throw IoError(path, "write failed");
}

} // namespace polyrag
