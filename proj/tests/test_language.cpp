#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "polyrag/errors.hpp"
#include "polyrag/language.hpp"
#include "polyrag/mock_dictionary.hpp"
#include "polyrag/profiles.hpp"
#include "polyrag/speech.hpp"
#include "test_util.hpp"

using namespace polyrag;
using testutil::TempDir;

namespace {

std::string data(const std::string& rel) { return std::string(POLYRAG_DATA_DIR) + "/" + rel; }

class FixedDetector final : public LanguageDetector {
public:
    LangTag detect(std::string_view) const override { return lang_from_code("pa"); }
};

} // namespace

TEST_CASE("script-majority language detection") {
    const auto ur = detect_language("چھٹی کی پالیسی");
    CHECK(ur.code == "ur");
    CHECK(ur.script == Script::Arabic);
    const auto pa = detect_language("ਸਤ ਸ੍ਰੀ ਅਕਾਲ");
    CHECK(pa.code == "pa");
    CHECK(pa.script == Script::Gurmukhi);
    const auto en = detect_language("leave policy");
    CHECK(en.code == "en");
    CHECK(en.confidence == doctest::Approx(1.0));
    const auto none = detect_language("123 ?!");
    CHECK(none.code == "en");
    CHECK(none.confidence == 0.0);
    const auto mixed = detect_language("leave چھٹی");
    CHECK(mixed.code == "en");
    CHECK(mixed.confidence == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("dictionary translator") {
    DictionaryTranslator t;
    t.add("ur", "en", "چھٹی", "leave");
    CHECK(t.translate("چھٹی", "ur", "en") == "leave");
    CHECK(t.translate(" leave ", "en", "ur") == "چھٹی");
    CHECK(t.calls() == 2);
    try {
        t.translate("unknown", "ur", "en");
        FAIL("expected TranslationError");
    } catch (const TranslationError& e) {
        CHECK(e.provider() == "mock-dictionary");
    }
}

TEST_CASE("dictionary TSV loading") {
    TempDir dir;
    testutil::write_file(dir / "d.tsv", "src_lang\tdst_lang\tsrc_text\tdst_text\nur\ten\tچھٹی\tleave\n\n");
    auto t = DictionaryTranslator::load((dir / "d.tsv").string());
    CHECK(t.entries().size() == 1);
    CHECK(t.translate("leave", "en", "ur") == "چھٹی");
    testutil::write_file(dir / "bad.tsv", "ur\ten\tonly three\n");
    CHECK_THROWS_AS(DictionaryTranslator::load((dir / "bad.tsv").string()), InvalidArgument);
    CHECK_THROWS_AS(DictionaryTranslator::load((dir / "missing.tsv").string()), IoError);
}

TEST_CASE("router identity short-circuit and inbound routing") {
    DictionaryTranslator t;
    t.add("ur", "en", "چھٹی کی پالیسی", "leave policy");
    LanguageRouter router(t);
    CHECK(router.translate("anything", english(), english()) == "anything");
    CHECK(t.calls() == 0);

    const auto en = router.route_inbound("what is the leave policy");
    CHECK(en.english_text == "what is the leave policy");
    CHECK(en.original_lang.code == "en");
    CHECK(t.calls() == 0);

    const auto ur = router.route_inbound("چھٹی کی پالیسی");
    CHECK(ur.english_text == "leave policy");
    CHECK(ur.original_lang.code == "ur");
    CHECK(ur.original_text == "چھٹی کی پالیسی");

    t.add("ur", "en", "leave policy", "leave policy (ur)");
    const auto hinted = router.route_inbound("leave policy", lang_from_code("ur"));
    CHECK(hinted.original_lang.code == "ur");
    CHECK(hinted.english_text == "leave policy (ur)");

    try {
        router.route_inbound("ਸਤ ਸ੍ਰੀ ਅਕਾਲ");
        FAIL("expected RoutingError");
    } catch (const RoutingError& e) {
        CHECK(e.original_text() == "ਸਤ ਸ੍ਰੀ ਅਕਾਲ");
        CHECK(e.lang_code() == "pa");
    }
    CHECK_THROWS_AS(router.route_inbound("  "), InvalidArgument);
}

TEST_CASE("configured detector overrides the heuristic") {
    DictionaryTranslator t;
    t.add("pa", "en", "hello", "hello");
    FixedDetector det;
    LanguageRouter router(t, &det);
    CHECK(router.route_inbound("hello").original_lang.code == "pa");
}

TEST_CASE("outbound routing and degraded fallback") {
    DictionaryTranslator t;
    t.add("en", "ur", "leave", "چھٹی");
    LanguageRouter router(t);
    const auto same = router.route_outbound("answer", english());
    CHECK(same.text == "answer");
    CHECK_FALSE(same.degraded);
    const auto ur = router.route_outbound("leave", lang_from_code("ur"));
    CHECK(ur.text == "چھٹی");
    CHECK(ur.lang.code == "ur");

    FailingTranslator failing;
    LanguageRouter broken(failing);
    const auto fb = broken.route_outbound("leave", lang_from_code("ur"));
    CHECK(fb.text == "leave");
    CHECK(fb.lang.code == "en");
    CHECK(fb.degraded);
}

TEST_CASE("shipped dictionary round-trips every entry") {
    auto dict = DictionaryTranslator::load(data("dictionary.tsv"));
    REQUIRE(dict.entries().size() >= 50);
    for (const auto& e : dict.entries()) {
        const auto there = dict.translate(e.src_text, e.src_lang, e.dst_lang);
        CHECK(dict.translate(there, e.dst_lang, e.src_lang) == e.src_text);
        CHECK(detect_language(e.dst_text).code == e.dst_lang);
    }
}

TEST_CASE("transliteration is injective on ASCII") {
    std::mt19937_64 rng(1);
    std::set<std::string> outs;
    std::set<std::string> ins;
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        for (int j = 0; j < 4; ++j) s += static_cast<char>(' ' + rng() % 95);
        if (!ins.insert(s).second) continue;
        CHECK(outs.insert(transliterate(s, "ur")).second);
    }
    CHECK(transliterate("Ab 1.", "pa") == "ੴਅਆ 1.");
    CHECK_THROWS_AS(transliterate("x", "fr"), UnsupportedLanguageError);
}

TEST_CASE("provider selection reproduces the fixture winners") {
    const auto t3 = load_profiles_csv(data("profiles/table3.csv"));
    const auto t4 = load_profiles_csv(data("profiles/table4.csv"));
    const auto t5 = load_profiles_csv(data("profiles/table5.csv"));
    CHECK(select_provider(t3, Capability::Translate).name == "Google Translator");
    CHECK(select_provider(t4, Capability::TTS).name == "Google TTS");
    CHECK(select_tts(t4).name == "Google TTS");
    CHECK(select_provider(t5, Capability::LLM).name == "GPT-4");
}

TEST_CASE("selection is permutation-invariant and honours budgets and tie-breaks") {
    auto t5 = load_profiles_csv(data("profiles/table5.csv"));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(t5.begin(), t5.end(), rng);
        CHECK(select_provider(t5, Capability::LLM).name == "GPT-4");
    }
    CHECK(select_provider(t5, Capability::LLM, 100.0).name == "GPT-4");
    CHECK_THROWS_AS(select_provider(t5, Capability::TTS), SelectionError);

    const auto t4 = load_profiles_csv(data("profiles/table4.csv"));
    try {
        select_provider(t4, Capability::TTS, 49.0);
        FAIL("expected SelectionError");
    } catch (const SelectionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("49") != std::string::npos);
        CHECK(msg.find("Google TTS") != std::string::npos);
    }
    CHECK(select_provider(t4, Capability::TTS, 85.0).name == "Google TTS");
    CHECK_THROWS_AS(select_tts({}), SelectionError);
    CHECK(select_tts({{"Only", Capability::TTS, 10, 500, 1}}).name == "Only");

    const std::vector<ProviderProfile> ties = {{"b", Capability::LLM, 80, 100, 2},
                                               {"a", Capability::LLM, 80, 100, 2},
                                               {"c", Capability::LLM, 80, 100, 1},
                                               {"d", Capability::LLM, 80, 90, 9}};
    CHECK(select_provider(ties, Capability::LLM).name == "d");
    CHECK(select_provider({ties[0], ties[1], ties[2]}, Capability::LLM).name == "c");
    CHECK(select_provider({ties[0], ties[1]}, Capability::LLM).name == "a");
}

TEST_CASE("profile CSV validation") {
    TempDir dir;
    testutil::write_file(dir / "bad_header.csv", "name,accuracy\nx,1\n");
    CHECK_THROWS_AS(load_profiles_csv((dir / "bad_header.csv").string()), InvalidArgument);
    testutil::write_file(dir / "bad_cap.csv", "name,capability,accuracy,latency_ms,cost\nx,fax,1,1,0\n");
    CHECK_THROWS_AS(load_profiles_csv((dir / "bad_cap.csv").string()), InvalidArgument);
    testutil::write_file(dir / "bad_acc.csv", "name,capability,accuracy,latency_ms,cost\nx,llm,101,1,0\n");
    CHECK_THROWS_AS(load_profiles_csv((dir / "bad_acc.csv").string()), InvalidArgument);
    CHECK_THROWS_AS(load_profiles_csv((dir / "none.csv").string()), IoError);
}
