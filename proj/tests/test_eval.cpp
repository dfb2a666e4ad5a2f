#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "polyrag/errors.hpp"
#include "polyrag/eval.hpp"
#include "polyrag/search_kernel.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"
#include "stack.hpp"
#include "test_util.hpp"

using namespace polyrag;
using testutil::TempDir;

namespace {

const std::string kData = POLYRAG_DATA_DIR;

double cosine(const Vector& va, const Vector& vb) {
    const auto& a = va.values;
    const auto& b = vb.values;
    long double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return static_cast<double>(dot / std::sqrt(na * nb));
}

// Brute-force hit@k: rescan every chunk and check span overlap directly.
double brute_hit_at_k(const std::vector<Chunk>& chunks, const Embedder& e, const std::vector<QAPair>& qa,
                      std::size_t k) {
    std::size_t hits = 0, total = 0;
    for (const auto& q : qa) {
        if (!q.in_context) continue;
        ++total;
        const auto qv = e.embed(q.question);
        std::vector<std::pair<double, const Chunk*>> scored;
        for (const auto& c : chunks) scored.emplace_back(cosine(qv, e.embed(c.text)), &c);
        std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            const auto ka = kernels::rank_key(a.first), kb = kernels::rank_key(b.first);
            return ka != kb ? ka > kb : a.second->chunk_id < b.second->chunk_id;
        });
        for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) {
            const Chunk& c = *scored[i].second;
            if (c.doc_id == q.expected_doc_id && c.char_start < q.answer_end && q.answer_start < c.char_end) {
                ++hits;
                break;
            }
        }
    }
    return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

} // namespace

TEST_CASE("synthetic corpus is deterministic and well labelled") {
    const auto a = generate_synthetic_corpus();
    const auto b = generate_synthetic_corpus();
    REQUIRE(a.documents.size() == 20);
    REQUIRE(a.qa_pairs.size() == 100);
    for (std::size_t i = 0; i < a.documents.size(); ++i) CHECK(a.documents[i].text == b.documents[i].text);

    const auto chunks = chunk_corpus(a.documents, StrategyOptions{});
    std::size_t in = 0;
    for (std::size_t i = 0; i < a.qa_pairs.size(); ++i) {
        const auto& q = a.qa_pairs[i];
        CHECK(q.question == b.qa_pairs[i].question);
        if (!q.in_context) continue;
        ++in;
        CHECK_FALSE(q.expected_chunk_ids.empty());
        CHECK(q.expected_chunk_ids == chunk_ids_covering(q, chunks));
        const auto doc = std::find_if(a.documents.begin(), a.documents.end(),
                                      [&](const Document& d) { return d.doc_id == q.expected_doc_id; });
        REQUIRE(doc != a.documents.end());
        const auto offs = utf8::codepoint_offsets(doc->text);
        REQUIRE(q.answer_end < offs.size());
        const auto answer = doc->text.substr(offs[q.answer_start], offs[q.answer_end] - offs[q.answer_start]);
        CHECK(answer.find(q.expected_answer_substring) != std::string::npos);
    }
    CHECK(in == 50);

    const auto other = generate_synthetic_corpus(SyntheticOptions{.seed = 8});
    CHECK(other.qa_pairs[0].question != a.qa_pairs[0].question);
}

TEST_CASE("out-of-context questions stay below the grounding threshold") {
    const auto& corpus = testutil::synthetic();
    HashBowEmbedder e;
    const auto chunks = chunk_corpus(corpus.documents, StrategyOptions{});
    std::set<std::string> vocab;
    for (const auto& d : corpus.documents)
        for (auto& t : text::tokenize(d.text)) vocab.insert(t);
    std::size_t ooc = 0;
    for (const auto& q : corpus.qa_pairs) {
        if (q.in_context) continue;
        ++ooc;
        CHECK(q.expected_chunk_ids.empty());
        for (const auto& t : text::tokenize(q.question)) CHECK(vocab.count(t) == 0);
        double best = -1;
        for (const auto& c : chunks) best = std::max(best, cosine(e.embed(q.question), e.embed(c.text)));
        CHECK(best < 0.15);
    }
    CHECK(ooc == 50);
}

TEST_CASE("written corpus reloads identically") {
    TempDir dir;
    const auto& corpus = testutil::synthetic();
    write_synthetic_corpus(corpus, dir.path());
    const auto loaded = load_corpus(dir.path(), dir / "manifest.csv");
    CHECK(loaded.failures.empty());
    REQUIRE(loaded.documents.size() == corpus.documents.size());
    std::map<std::string, const Document*> by_id;
    for (const auto& d : loaded.documents) by_id[d.doc_id] = &d;
    for (const auto& d : corpus.documents) {
        REQUIRE(by_id.count(d.doc_id));
        CHECK(by_id[d.doc_id]->text == d.text);
        CHECK(by_id[d.doc_id]->collection == d.collection);
    }
    const auto qa = load_qa_pairs(dir / "qa_pairs.jsonl");
    REQUIRE(qa.size() == corpus.qa_pairs.size());
    CHECK(qa[3].question == corpus.qa_pairs[3].question);
    CHECK(qa[3].expected_chunk_ids == corpus.qa_pairs[3].expected_chunk_ids);
    CHECK(qa[3].answer_start == corpus.qa_pairs[3].answer_start);
}

TEST_CASE("hit@k agrees with a brute-force scan and grows with k") {
    const auto& corpus = testutil::synthetic();
    HashBowEmbedder e;
    const auto lexicon = load_lexicon(kData + "/entity_lexicon.txt");
    for (const auto& s : default_strategies(lexicon)) {
        CAPTURE(s.name);
        const auto chunks = chunk_corpus(corpus.documents, s.options);
        const auto index = Index::build(chunks, e);
        double prev = 0.0;
        for (std::size_t k : {1, 2, 4, 8}) {
            const double h = hit_at_k(index, e, corpus.qa_pairs, k);
            CHECK(h >= 0.0);
            CHECK(h <= 1.0);
            CHECK(h >= prev);
            CHECK(h == doctest::Approx(brute_hit_at_k(chunks, e, corpus.qa_pairs, k)).epsilon(1e-12));
            prev = h;
        }
    }
}

TEST_CASE("a single-chunk corpus always hits") {
    Document d{"only", Collection::HR, "only", "Staff get 12 days of leave. Nothing else matters.", ""};
    QAPair q;
    q.question = "How many days of leave?";
    q.expected_doc_id = "only";
    q.answer_start = 0;
    q.answer_end = 27;
    q.expected_answer_substring = "12";
    HashBowEmbedder e;
    const auto index = Index::build(chunk_corpus({d}, StrategyOptions{}), e);
    CHECK(index.size() == 1);
    CHECK(hit_at_k(index, e, {q}, 1) == 1.0);
    q.in_context = false;
    CHECK(hit_at_k(index, e, {q}, 1) == 0.0);
}

TEST_CASE("chunk coherence is adjacent-sentence Jaccard") {
    CHECK_FALSE(chunk_coherence("One sentence only."));
    CHECK(*chunk_coherence("Alpha beta. Gamma delta.") == 0.0);
    CHECK(*chunk_coherence("Alpha beta. Alpha beta.") == 1.0);
    // {a,b,c} vs {b,c,d}: 2/4; {b,c,d} vs {d}: 1/3
    CHECK(*chunk_coherence("A b c. B c d. D.") == doctest::Approx((0.5 + 1.0 / 3.0) / 2));
}

TEST_CASE("paragraph chunking finds every answer on a paragraph fixture") {
    std::vector<Document> docs;
    std::vector<QAPair> qa;
    const char* topics[] = {"leave", "overtime", "grievance", "calibration"};
    for (int i = 0; i < 4; ++i) {
        Document d;
        d.doc_id = "p" + std::to_string(i);
        d.collection = Collection::HR;
        std::string text;
        for (int j = 0; j < 4; ++j) {
            if (!text.empty()) text += "\n\n";
            const std::string para = std::string("Rule ") + topics[j] + " " + std::to_string(i * 10 + j) +
                                     " applies to " + topics[j] + " requests.";
            if (j == i) {
                QAPair q;
                q.question = std::string("Which rule applies to ") + topics[j] + " requests?";
                q.expected_doc_id = d.doc_id;
                q.answer_start = utf8::length(text);
                q.answer_end = q.answer_start + utf8::length(para);
                q.expected_answer_substring = std::to_string(i * 10 + j);
                qa.push_back(q);
            }
            text += para;
        }
        d.text = text;
        docs.push_back(d);
    }
    StrategyOptions opts;
    opts.strategy = ChunkStrategy::Paragraph;
    opts.params = {60, 0, 0};
    HashBowEmbedder e;
    const auto index = Index::build(chunk_corpus(docs, opts), e);
    CHECK(index.size() == 16);
    CHECK(hit_at_k(index, e, qa, 4) == 1.0);
}

TEST_CASE("chunking report has the expected shape") {
    const auto& corpus = testutil::synthetic();
    const auto lexicon = load_lexicon(kData + "/entity_lexicon.txt");
    const auto report = eval_chunking(corpus.documents, default_strategies(lexicon), corpus.qa_pairs);
    REQUIRE(report.rows.size() == 5);
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        CHECK(report.rows[i - 1].metrics.at("relevance") >= report.rows[i].metrics.at("relevance"));
    REQUIRE(report.find("Fixed Window (Optimal Setting)"));
    const auto md = to_markdown(report);
    CHECK(md.find("| Chunking Strategy | Chunk Size | Coherence | Relevance |") != std::string::npos);
    CHECK(to_markdown(eval_chunking(corpus.documents, default_strategies(lexicon), corpus.qa_pairs)) == md);
}

TEST_CASE("final QA with the guard never hallucinates and standard always does") {
    for (std::uint64_t seed : {7, 11, 23}) {
        CAPTURE(seed);
        SyntheticOptions o;
        o.seed = seed;
        o.in_context = 20;
        o.out_of_context = 20;
        const auto corpus = generate_synthetic_corpus(o);
        HashBowEmbedder e;
        const auto index = Index::build(chunk_corpus(corpus.documents, StrategyOptions{}), e);
        const auto templates = PromptTemplates::defaults();
        const auto report = eval_prompts(default_prompt_variants(templates), corpus.qa_pairs, index, e, templates);
        REQUIRE(report.rows.size() == 3);
        const auto& standard = *report.find("Standard Prompt");
        const auto& cot = *report.find("Chain-of-Thought Prompt");
        const auto& final_qa = *report.find("Final QA Prompt");
        CHECK(standard.metrics.at("hallucination") == 1.0);
        CHECK(final_qa.metrics.at("hallucination") == 0.0);
        CHECK(cot.metrics.at("hallucination") <= standard.metrics.at("hallucination"));
        CHECK(final_qa.metrics.at("accuracy") >= standard.metrics.at("accuracy"));
        CHECK(final_qa.metrics.at("tokens") < standard.metrics.at("tokens"));
    }
}

TEST_CASE("prompt variants without an LLM are rejected") {
    HashBowEmbedder e;
    const auto index = Index::build(chunk_corpus(testutil::synthetic().documents, StrategyOptions{}), e);
    const auto templates = PromptTemplates::defaults();
    CHECK_THROWS_AS(eval_prompts({{"x", templates.qa_template, true, nullptr}}, {}, index, e, templates),
                    InvalidArgument);
}

TEST_CASE("provider tables mark the paper's selections") {
    const auto tables = eval_provider_selection(kData + "/profiles");
    REQUIRE(tables.size() == 3);
    CHECK(tables[0].selected == "Google Translator");
    CHECK(tables[1].selected == "Google TTS");
    CHECK(tables[2].selected == "GPT-4");
    for (const auto& t : tables) {
        std::size_t marked = 0;
        for (const auto& r : t.report.rows) {
            if (r.cells.back() == "yes") {
                ++marked;
                CHECK(r.name == t.selected);
            }
        }
        CHECK(marked == 1);
    }
    CHECK_THROWS_AS(eval_provider_selection(TempDir().path()), IoError);
}

TEST_CASE("report rendering quotes CSV and refuses empty reports") {
    EvalReport r;
    r.title = "T";
    r.columns = {"Name", "Value"};
    r.rows.push_back({"a,b", {"1.5"}, {}, false});
    r.rows.push_back({"say \"hi\"", {"2"}, {}, false});
    CHECK(to_csv(r) == "Name,Value\n\"a,b\",1.5\n\"say \"\"hi\"\"\",2\n");
    const auto md = to_markdown(r);
    CHECK(md.find("### T") == 0);
    CHECK(md.find("| a,b | 1.5 |") != std::string::npos);

    TempDir dir;
    emit_report(r, ReportFormat::Csv, (dir / "t.csv").string());
    CHECK(testutil::read_file(dir / "t.csv") == to_csv(r));
    CHECK_THROWS_AS(emit_report(EvalReport{}, ReportFormat::Markdown, (dir / "e.md").string()), InvalidArgument);
    CHECK_THROWS_AS(emit_report(r, ReportFormat::Markdown, (dir / "missing" / "x" / "e.md").string()), IoError);
    CHECK(format_fixed(0.123456) == "0.1235");
    CHECK(format_fixed(2.0, 1) == "2.0");
}

TEST_CASE("eval suite writes identical tables on every run") {
    TempDir a, b;
    SuiteOptions o;
    o.corpus_dir = kData + "/corpus";
    o.fixture_dir = kData + "/profiles";
    o.lexicon = kData + "/entity_lexicon.txt";
    o.out_dir = a.path();
    std::ostringstream log;
    const auto written = run_eval_suite(o, &log);
    CHECK(written.size() == 10);
    o.out_dir = b.path();
    run_eval_suite(o);
    for (const auto& p : written) CHECK(testutil::read_file(p) == testutil::read_file(b / p.filename()));
    CHECK(log.str().find("GPT-4") != std::string::npos);

    CHECK(parse_suite("prompts") == EvalSuite::Prompts);
    CHECK_FALSE(parse_suite("everything"));
    o.corpus_dir = a / "nowhere";
    o.suite = EvalSuite::Providers;
    CHECK_NOTHROW(run_eval_suite(o));
}
