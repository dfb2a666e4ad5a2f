#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "polyrag/chunk_store.hpp"
#include "polyrag/chunking.hpp"
#include "polyrag/corpus.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"
#include "test_util.hpp"

using namespace polyrag;
using testutil::TempDir;

namespace {

std::vector<std::pair<std::size_t, std::size_t>> spans(const std::vector<Chunk>& chunks) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : chunks) out.emplace_back(c.char_start, c.char_end);
    return out;
}

using SpanList = std::vector<std::pair<std::size_t, std::size_t>>;

// Code-point slice, computed independently of the library's offset table.
std::string cp_slice(const std::string& s, std::size_t a, std::size_t b) {
    const auto cps = utf8::decode(s);
    std::string out;
    for (std::size_t i = a; i < b; ++i) utf8::append(out, cps[i]);
    return out;
}

void check_span_fidelity(const std::string& text, const std::vector<Chunk>& chunks) {
    const std::size_t n = utf8::length(text);
    for (const auto& c : chunks) {
        REQUIRE(c.char_start < c.char_end);
        REQUIRE(c.char_end <= n);
        CHECK(c.text == cp_slice(text, c.char_start, c.char_end));
    }
}

// Every non-whitespace code point lies inside some chunk.
void check_coverage(const std::string& text, const std::vector<Chunk>& chunks, bool strict) {
    const auto cps = utf8::decode(text);
    std::vector<bool> covered(cps.size(), false);
    for (const auto& c : chunks)
        for (std::size_t i = c.char_start; i < c.char_end; ++i) covered[i] = true;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const bool space = cps[i] == U' ' || cps[i] == U'\n' || cps[i] == U'\t' || cps[i] == U'\r';
        if (strict || !space) {
            INFO("offset " << i);
            REQUIRE(covered[i]);
        }
    }
}

std::string mixed_script_text(std::mt19937_64& rng, std::size_t n) {
    std::string base = testutil::random_text(rng, n);
    std::string out;
    for (char c : base) {
        if (c == 'q' || (c == 'a' && rng() % 7 == 0)) out += "چ";
        else if (c == 'z') out += "ਸ";
        else out += c;
    }
    return out;
}

} // namespace

TEST_CASE("load_corpus maps files to documents in path order") {
    TempDir dir;
    testutil::write_file(dir / "b.txt", "world");
    testutil::write_file(dir / "a.txt", "hello");
    testutil::write_file(dir / "notes.bin", "ignored");
    const auto r = load_corpus(dir.path());
    REQUIRE(r.documents.size() == 2);
    CHECK(r.documents[0].doc_id == "a");
    CHECK(r.documents[1].doc_id == "b");
    CHECK(r.documents[0].text == "hello");
    CHECK(r.documents[0].collection == Collection::OTHER);
    CHECK(r.failures.empty());
}

TEST_CASE("load_corpus applies the manifest") {
    TempDir dir;
    testutil::write_file(dir / "a.txt", "hello");
    testutil::write_file(dir / "sub/b.md", "# Title\n\nbody");
    testutil::write_file(dir / "manifest.csv", "filename,collection\na.txt,HR\nsub/b.md,QA\n");
    const auto r = load_corpus(dir.path(), dir / "manifest.csv");
    REQUIRE(r.documents.size() == 2);
    CHECK(r.documents[0].collection == Collection::HR);
    CHECK(r.documents[1].doc_id == "sub/b");
    CHECK(r.documents[1].collection == Collection::QA);
    CHECK(r.documents[1].title == "Title");
}

TEST_CASE("load_corpus errors and per-file failures") {
    TempDir empty;
    CHECK_THROWS_AS(load_corpus(empty.path()), EmptyCorpusError);
    CHECK_THROWS_AS(load_corpus(empty / "missing"), IoError);

    TempDir dir;
    testutil::write_file(dir / "good.txt", "\xEF\xBB\xBFline one\r\nline two");
    testutil::write_file(dir / "bad.txt", "caf\xC3");
    testutil::write_file(dir / "blank.txt", "  \n ");
    const auto r = load_corpus(dir.path());
    REQUIRE(r.documents.size() == 1);
    CHECK(r.documents[0].text == "line one\nline two");
    CHECK(r.failures.size() == 2);
}

TEST_CASE("chunk params validation") {
    CHECK_NOTHROW(ChunkParams{}.validate());
    CHECK_THROWS_AS((ChunkParams{0, 0, 0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((ChunkParams{10, 10, 0}.validate()), InvalidArgument);
}

TEST_CASE("chunk_fixed window rule") {
    const ChunkParams p{1000, 200, 0};
    CHECK(spans(chunk_fixed(std::string(2500, 'x'), p)) == SpanList{{0, 1000}, {800, 1800}, {1600, 2500}});
    CHECK(spans(chunk_fixed(std::string(500, 'x'), p)) == SpanList{{0, 500}});
    CHECK(spans(chunk_fixed(std::string(1000, 'x'), p)) == SpanList{{0, 1000}});
    CHECK(chunk_fixed("", p).empty());
}

TEST_CASE("chunk_fixed counts code points, not bytes") {
    std::string s;
    for (int i = 0; i < 25; ++i) s += "چ";
    const auto chunks = chunk_fixed(s, ChunkParams{10, 2, 0});
    CHECK(spans(chunks) == SpanList{{0, 10}, {8, 18}, {16, 25}});
    check_span_fidelity(s, chunks);
}

TEST_CASE("chunk_paragraph merges greedily under the cap") {
    auto a = chunk_paragraph("A\n\nB", ChunkParams{1000, 200, 0});
    REQUIRE(a.size() == 1);
    CHECK(a[0].text == "A\n\nB");

    auto b = chunk_paragraph("A\n\nB", ChunkParams{1, 0, 0});
    REQUIRE(b.size() == 2);
    CHECK(b[0].text == "A");
    CHECK(b[1].text == "B");

    auto c = chunk_paragraph(std::string(2500, 'x'), ChunkParams{1000, 200, 0});
    CHECK(spans(c) == SpanList{{0, 1000}, {800, 1800}, {1600, 2500}});
    CHECK(chunk_paragraph("", ChunkParams{}).empty());
}

TEST_CASE("chunk_semantic_unit splits at headings") {
    const auto pats = default_heading_patterns();
    auto a = chunk_semantic_unit("# A\nx\n# B\ny", pats, ChunkParams{});
    REQUIRE(a.size() == 2);
    CHECK(a[0].text == "# A\nx");
    CHECK(a[1].text == "# B\ny");

    auto b = chunk_semantic_unit("no headings", pats, ChunkParams{});
    REQUIRE(b.size() == 1);
    CHECK(b[0].text == "no headings");

    auto steps = chunk_semantic_unit("intro\nStep 1 mix\nStep 2 bake\n1. serve", pats, ChunkParams{});
    REQUIRE(steps.size() == 4);
    CHECK(steps[1].text == "Step 1 mix");
    CHECK(steps[3].text == "1. serve");
}

TEST_CASE("chunk_semantic_unit delegates oversized sections to the window rule") {
    const std::string body(2500 - 4, 'x');
    const std::string text = "pre\n# A\n" + body;
    const auto chunks = chunk_semantic_unit(text, default_heading_patterns(), ChunkParams{1000, 200, 0});
    const std::size_t s = 4; // section starts after "pre\n"
    REQUIRE(chunks.size() == 4);
    CHECK(chunks[0].text == "pre");
    CHECK(spans({chunks[1], chunks[2], chunks[3]}) ==
          SpanList{{s, s + 1000}, {s + 800, s + 1800}, {s + 1600, s + 2500}});
    check_span_fidelity(text, chunks);
}

TEST_CASE("chunk_topic clusters by term-frequency cosine") {
    auto same = chunk_topic("leave policy\n\nleave policy", 1, ChunkParams{});
    REQUIRE(same.size() == 1);
    CHECK(same[0].text == "leave policy\n\nleave policy");

    auto disjoint = chunk_topic("aa bb\n\ncc dd", 2, ChunkParams{});
    REQUIRE(disjoint.size() == 2);
    CHECK(disjoint[0].text == "aa bb");
    CHECK(disjoint[1].text == "cc dd");

    const std::string doc = "annual leave policy for staff\n\naudit schedule for the quality team\n\n"
                            "leave policy days annual\n\nquality audit findings schedule";
    auto four = chunk_topic(doc, 2, ChunkParams{});
    REQUIRE(four.size() == 2);
    CHECK(four[0].text == "annual leave policy for staff\n\nleave policy days annual");
    CHECK(four[1].text == "audit schedule for the quality team\n\nquality audit findings schedule");
    CHECK(four[0].char_start == 0);
    CHECK(four[0].char_end == doc.find("\n\nquality"));
    CHECK_FALSE(is_span_preserving(ChunkStrategy::Topic));
    CHECK_THROWS_AS(chunk_topic("x", 0, ChunkParams{}), InvalidArgument);
    CHECK(chunk_topic("", 2, ChunkParams{}).empty());
}

TEST_CASE("chunk_entity windows") {
    auto single = chunk_entity("leave policy applies.", {"leave"}, ChunkParams{});
    REQUIRE(single.size() == 1);
    CHECK(single[0].text == "leave policy applies.");

    std::mt19937_64 rng(3);
    const std::string no_hits = testutil::random_text(rng, 2600);
    auto fixed = chunk_fixed(no_hits, ChunkParams{});
    auto entity = chunk_entity(no_hits, {"zebra"}, ChunkParams{});
    REQUIRE(entity.size() == fixed.size());
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        CHECK(entity[i].char_start == fixed[i].char_start);
        CHECK(entity[i].char_end == fixed[i].char_end);
    }

    std::string two = std::string(600, 'x') + " leave " + std::string(92, 'y') + " leave " + std::string(600, 'z');
    auto merged = chunk_entity(two, {"leave"}, ChunkParams{});
    std::size_t covering = 0;
    for (const auto& c : merged)
        if (c.text.find("leave") != std::string::npos) {
            ++covering;
            CHECK(c.text.find("leave", c.text.find("leave") + 1) != std::string::npos);
        }
    CHECK(covering == 1);
    CHECK_THROWS_AS(chunk_entity("x", {}, ChunkParams{}), InvalidArgument);
}

TEST_CASE("entity matches are whole-word and case-insensitive") {
    auto c = chunk_entity("Leaves fall. LEAVE is granted. Cleave it.", {"leave"}, ChunkParams{2, 0, 0});
    bool found = false;
    for (const auto& ch : c) {
        if (ch.text == "LEAVE is granted.") found = true;
        CHECK(ch.text != "Leaves fall.");
        CHECK(ch.text != "Cleave it.");
    }
    CHECK(found);
}

TEST_CASE("span-preserving strategies keep fidelity and coverage on random text") {
    std::mt19937_64 rng(11);
    const ChunkParams p{120, 30, 0};
    for (int round = 0; round < 40; ++round) {
        const std::string doc = mixed_script_text(rng, 1 + rng() % 900);
        const auto fixed = chunk_fixed(doc, p);
        check_span_fidelity(doc, fixed);
        check_coverage(doc, fixed, true);

        const auto para = chunk_paragraph(doc, p);
        check_span_fidelity(doc, para);
        check_coverage(doc, para, false);

        const auto sem = chunk_semantic_unit(doc, default_heading_patterns(), p);
        check_span_fidelity(doc, sem);
        check_coverage(doc, sem, false);

        const auto ent = chunk_entity(doc, {"audit", "carton"}, p);
        check_span_fidelity(doc, ent);
        check_coverage(doc, ent, false);

        for (const auto& c : para) {
            if (c.text.find("\n\n") != std::string::npos) CHECK(utf8::length(c.text) <= p.size);
        }
    }
}

TEST_CASE("chunk_document assigns gapless ordinal ids") {
    Document d{"hr/leave", Collection::HR, "t", std::string(2500, 'x'), "hr/leave.md"};
    const auto chunks = chunk_document(d, StrategyOptions{});
    REQUIRE(chunks.size() == 3);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        CHECK(chunks[i].doc_id == "hr/leave");
        CHECK(chunks[i].chunk_id == make_chunk_id("hr/leave", i));
    }
    CHECK(chunks[0].chunk_id == "hr/leave#0000");
}

TEST_CASE("strategy names parse") {
    for (auto s : {ChunkStrategy::FixedWindow, ChunkStrategy::Paragraph, ChunkStrategy::SemanticUnit,
                   ChunkStrategy::Topic, ChunkStrategy::Entity})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK(parse_strategy("semantic") == ChunkStrategy::SemanticUnit);
    CHECK_FALSE(parse_strategy("lda"));
}

TEST_CASE("ingest writes a deterministic JSONL store") {
    TempDir dir;
    std::vector<Document> docs = {{"a", Collection::HR, "", std::string(500, 'a'), "a.txt"},
                                  {"b", Collection::QA, "", std::string(500, 'b'), "b.txt"}};
    const auto s1 = ingest(docs, StrategyOptions{}, (dir / "s1.jsonl").string());
    const auto s2 = ingest(docs, StrategyOptions{}, (dir / "s2.jsonl").string());
    CHECK(s1.doc_count == 2);
    CHECK(s1.chunk_count == 2);
    CHECK(s2.chunk_count == 2);
    const auto bytes = testutil::read_file(dir / "s1.jsonl");
    CHECK(bytes == testutil::read_file(dir / "s2.jsonl"));
    CHECK(bytes.rfind("{\"doc_id\":\"a\",\"chunk_id\":\"a#0000\",\"text\":", 0) == 0);
    CHECK(bytes.find("\"char_start\":0,\"char_end\":500,\"strategy\":\"FixedWindow\"}\n") != std::string::npos);

    std::vector<Document> one = {{"c", Collection::OTHER, "", std::string(2500, 'c'), "c.txt"}};
    CHECK(ingest(one, StrategyOptions{}, (dir / "s3.jsonl").string()).chunk_count == 3);

    const auto back = read_chunk_store((dir / "s1.jsonl").string());
    CHECK(back == chunk_corpus(docs, StrategyOptions{}));

    CHECK_THROWS_AS(ingest({}, StrategyOptions{}, (dir / "e.jsonl").string()), EmptyCorpusError);
    CHECK_THROWS_AS(ingest(docs, StrategyOptions{}, (dir / "no/such/dir/x.jsonl").string()), IoError);
}

TEST_CASE("chunk_corpus matches serial chunking") {
    std::mt19937_64 rng(5);
    std::vector<Document> docs;
    for (int i = 0; i < 30; ++i)
        docs.push_back({"d" + std::to_string(i), Collection::OTHER, "", testutil::random_text(rng, 3000), ""});
    StrategyOptions opt;
    opt.strategy = ChunkStrategy::Paragraph;
    std::vector<Chunk> serial;
    for (const auto& d : docs)
        for (auto& c : chunk_document(d, opt)) serial.push_back(std::move(c));
    CHECK(chunk_corpus(docs, opt) == serial);
}

TEST_CASE("load_lexicon skips comments and blanks") {
    TempDir dir;
    testutil::write_file(dir / "lex.txt", "# terms\nannual leave\n\n  audit \n");
    const auto lex = load_lexicon((dir / "lex.txt").string());
    REQUIRE(lex.size() == 2);
    CHECK(lex[0] == "annual leave");
    CHECK(lex[1] == "audit");
}
