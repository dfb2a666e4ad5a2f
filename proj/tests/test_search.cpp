#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "polyrag/embedding.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/index.hpp"
#include "polyrag/search_kernel.hpp"
#include "test_util.hpp"

using namespace polyrag;
using testutil::TempDir;

namespace {

// Reference FNV-1a 64, written from the published constants.
std::uint64_t fnv_oracle(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct OracleHit {
    std::string id;
    double score;
};

// Full scan over freshly embedded chunk texts, full sort.
std::vector<OracleHit> brute_force(const std::vector<Chunk>& chunks, const Embedder& e, const Vector& q,
                                   std::size_t k) {
    std::vector<OracleHit> all;
    long double qn = 0.0L;
    for (double v : q.values) qn += static_cast<long double>(v) * v;
    qn = std::sqrt(qn);
    for (const auto& c : chunks) {
        const auto v = e.embed(c.text);
        long double dot = 0.0L, vn = 0.0L;
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            dot += static_cast<long double>(v.values[i]) * q.values[i];
            vn += static_cast<long double>(v.values[i]) * v.values[i];
        }
        vn = std::sqrt(vn);
        all.push_back({c.chunk_id, (qn > 0 && vn > 0) ? static_cast<double>(dot / (qn * vn)) : 0.0});
    }
    // Mathematical ties are resolved by id, as the contract requires.
    const auto key = [](double s) { return std::llround(std::ldexp(s, 32)); };
    std::sort(all.begin(), all.end(), [&](const OracleHit& a, const OracleHit& b) {
        if (key(a.score) != key(b.score)) return a.score > b.score;
        return a.id < b.id;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

std::vector<Chunk> random_chunks(std::mt19937_64& rng, std::size_t n) {
    std::vector<Chunk> chunks;
    for (std::size_t i = 0; i < n; ++i) {
        Chunk c;
        c.doc_id = "d" + std::to_string(i % 7);
        c.chunk_id = c.doc_id + "#" + std::to_string(100000 + rng() % 900000) + "-" + std::to_string(i);
        c.text = testutil::random_text(rng, 20 + rng() % 200) + " w" + std::to_string(rng() % 50);
        c.char_end = 1;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

} // namespace

TEST_CASE("fnv1a64 matches the reference constants") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    for (std::string s : {"leave", "policy", "چھٹی"}) CHECK(fnv1a64(s) == fnv_oracle(s));
}

TEST_CASE("hash bag-of-words embedding") {
    const HashBowEmbedder e;
    CHECK(e.dimension() == 256);
    CHECK(e.name() == "hash-bow-v1");
    const auto v = e.embed("hello hello");
    std::size_t nonzero = 0;
    for (double x : v.values) {
        if (x != 0.0) {
            ++nonzero;
            CHECK(x == doctest::Approx(1.0));
        }
    }
    CHECK(nonzero == 1);
    CHECK(v.values[fnv_oracle("hello") % 256] == doctest::Approx(1.0));
    CHECK(e.embed("Leave policy") == e.embed("Leave policy"));
    CHECK(std::abs(e.embed("a b c d").norm() - 1.0) < 1e-12);
    CHECK_THROWS_AS(e.embed(" ... "), EmptyTextError);
}

TEST_CASE("disjoint token sets with distinct buckets have zero cosine") {
    const HashBowEmbedder e;
    const std::vector<std::string> words = {"leave", "audit", "carton", "shift", "defect", "staff", "hours"};
    bool tested = false;
    for (std::size_t i = 0; i < words.size() && !tested; ++i)
        for (std::size_t j = i + 1; j < words.size() && !tested; ++j) {
            if (fnv_oracle(words[i]) % 256 == fnv_oracle(words[j]) % 256) continue;
            const auto a = e.embed(words[i]);
            const auto b = e.embed(words[j]);
            double dot = 0.0;
            for (std::size_t d = 0; d < 256; ++d) dot += a.values[d] * b.values[d];
            CHECK(dot == 0.0);
            tested = true;
        }
    CHECK(tested);
}

TEST_CASE("index build errors") {
    const HashBowEmbedder e;
    CHECK_THROWS_AS(Index::build({}, e), IndexError);
    Chunk a{"d", "d#0000", "leave policy", 0, 12, ChunkStrategy::FixedWindow};
    CHECK_THROWS_AS(Index::build({a, a}, e), IndexError);
    Chunk blank{"d", "d#0001", "...", 0, 3, ChunkStrategy::FixedWindow};
    try {
        Index::build({a, blank}, e);
        FAIL("expected IndexError");
    } catch (const IndexError& err) {
        CHECK(std::string(err.what()).find("d#0001") != std::string::npos);
    }
}

TEST_CASE("search basics") {
    const HashBowEmbedder e;
    std::vector<Chunk> chunks = {{"d", "d#0000", "annual leave days", 0, 1, ChunkStrategy::FixedWindow},
                                 {"d", "d#0001", "audit schedule weeks", 0, 1, ChunkStrategy::FixedWindow},
                                 {"d", "d#0002", "carton pairs socks", 0, 1, ChunkStrategy::FixedWindow}};
    const auto index = Index::build(chunks, e);
    CHECK(index.size() == 3);
    CHECK(index.dimension() == 256);

    const auto self = index.search(e.embed("audit schedule weeks"), 1);
    REQUIRE(self.size() == 1);
    CHECK(self[0].chunk.chunk_id == "d#0001");
    CHECK(std::abs(self[0].score - 1.0) < 1e-9);

    CHECK(index.search(e.embed("leave"), 10).size() == 3);
    CHECK_THROWS_AS(index.search(e.embed("leave"), 0), InvalidArgument);
    CHECK_THROWS_AS(index.search(Vector{std::vector<double>(3, 1.0)}, 1), InvalidArgument);
    CHECK(Index{}.search(e.embed("leave"), 4).empty());

    for (std::size_t r = 0; r < index.size(); ++r) {
        double n = 0.0;
        for (double x : index.vector_of(r)) n += x * x;
        CHECK(std::abs(std::sqrt(n) - 1.0) < 1e-9);
    }
}

TEST_CASE("ties break by chunk_id ascending") {
    const HashBowEmbedder e;
    std::vector<Chunk> chunks = {{"d", "z", "same words", 0, 1, ChunkStrategy::FixedWindow},
                                 {"d", "a", "same words", 0, 1, ChunkStrategy::FixedWindow},
                                 {"d", "m", "same words", 0, 1, ChunkStrategy::FixedWindow}};
    const auto index = Index::build(chunks, e);
    const auto hits = index.search(e.embed("same words"), 3);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].chunk.chunk_id == "a");
    CHECK(hits[1].chunk.chunk_id == "m");
    CHECK(hits[2].chunk.chunk_id == "z");
}

TEST_CASE("search equals the brute-force oracle on random indexes") {
    const HashBowEmbedder e;
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 20; ++round) {
        const auto chunks = random_chunks(rng, 1 + rng() % 300);
        const auto index = Index::build(chunks, e);
        for (int q = 0; q < 5; ++q) {
            const auto query = e.embed(testutil::random_text(rng, 30) + " w" + std::to_string(rng() % 50));
            for (std::size_t k : {1u, 4u, 17u}) {
                const auto got = index.search(query, k);
                const auto ref = index.search_reference(query, k);
                const auto want = brute_force(chunks, e, query, k);
                REQUIRE(got.size() == want.size());
                REQUIRE(ref.size() == want.size());
                for (std::size_t i = 0; i < want.size(); ++i) {
                    CHECK(got[i].chunk.chunk_id == want[i].id);
                    CHECK(std::abs(got[i].score - want[i].score) <= 1e-9);
                    CHECK(ref[i].chunk.chunk_id == got[i].chunk.chunk_id);
                    CHECK(ref[i].score == got[i].score);
                    CHECK(got[i].score >= -1.0);
                    CHECK(got[i].score <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("zero vectors score zero") {
    std::vector<double> m = {0, 0, 1, 0};
    std::vector<double> norms = {0, 1};
    std::vector<std::string> ids = {"a", "b"};
    kernels::MatrixView view{m, norms, 2};
    std::vector<double> q = {1, 0};
    CHECK(kernels::cosine_row(view, q, 1.0, 0) == 0.0);
    CHECK(kernels::cosine_row(view, q, 1.0, 1) == 1.0);
    const auto hits = kernels::top_k_parallel(view, ids, q, 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].row == 1);
}

TEST_CASE("persistence round trip") {
    TempDir dir;
    const HashBowEmbedder e;
    std::mt19937_64 rng(9);
    const auto chunks = random_chunks(rng, 60);
    const auto index = Index::build(chunks, e);
    const auto path = (dir / "index.jsonl").string();
    index.save(path);
    const auto header = testutil::read_file(path).substr(0, testutil::read_file(path).find('\n'));
    CHECK(header == R"({"dimension":256,"count":60,"embedder":"hash-bow-v1"})");

    const auto loaded = Index::load(path, chunks);
    REQUIRE(loaded.size() == index.size());
    for (int q = 0; q < 10; ++q) {
        const auto query = e.embed(testutil::random_text(rng, 40));
        const auto a = index.search(query, 4);
        const auto b = loaded.search(query, 4);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].chunk == b[i].chunk);
            CHECK(a[i].score == b[i].score);
        }
    }

    auto missing = chunks;
    missing.pop_back();
    CHECK_THROWS(Index::load(path, missing));
    CHECK_THROWS_AS(Index::load((dir / "nope").string(), chunks), IoError);
}

TEST_CASE("rebuild from the same chunks gives identical results") {
    const HashBowEmbedder e;
    std::mt19937_64 rng(77);
    const auto chunks = random_chunks(rng, 120);
    const auto a = Index::build(chunks, e);
    const auto b = Index::build(chunks, e);
    for (int q = 0; q < 20; ++q) {
        const auto query = e.embed(testutil::random_text(rng, 25));
        const auto ra = a.search(query, 4);
        const auto rb = b.search(query, 4);
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].chunk.chunk_id == rb[i].chunk.chunk_id);
    }
}
