#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polyrag/language.hpp"
#include "polyrag/synthetic.hpp"

namespace polyrag {

// Injective letter-by-letter rendering of ASCII text in Arabic ("ur") or
// Gurmukhi ("pa") script. Digits, spaces and punctuation pass through;
// uppercase letters get a script-specific marker. Throws
// UnsupportedLanguageError for other codes.
std::string transliterate(std::string_view english, std::string_view lang);

// en->ur and en->pa entries for every sentence of the corpus and of its
// fixed-window chunks, every question, and the given extra phrases.
// Deterministic order, no duplicates.
std::vector<DictionaryTranslator::Entry> build_mock_dictionary(const SyntheticCorpus& corpus,
                                                               const std::vector<std::string>& extra_phrases);

void write_dictionary_tsv(const std::vector<DictionaryTranslator::Entry>& entries, const std::string& path);

} // namespace polyrag
