// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "polyrag/chunking.hpp"
#include "polyrag/search_kernel.hpp"
#include "polyrag/synthetic.hpp"

using namespace polyrag;

namespace {

struct Matrix {
    std::vector<double> values;
    std::vector<double> norms;
    std::vector<std::string> ids;
    std::vector<double> query;
    std::size_t dim = 256;

    explicit Matrix(std::size_t rows) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        values.resize(rows * dim);
        for (auto& v : values) v = u(rng) < 0.05 ? u(rng) : 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            norms.push_back(kernels::l2_norm({values.data() + r * dim, dim}));
            ids.push_back(make_chunk_id("doc", r));
        }
        for (std::size_t i = 0; i < dim; ++i) query.push_back(u(rng) < 0.05 ? 1.0 : 0.0);
    }

    kernels::MatrixView view() const { return {values, norms, dim}; }
};

template <auto Kernel>
void BM_top_k(benchmark::State& state) {
    const Matrix m(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(m.view(), m.ids, m.query, 4));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

const std::vector<Document>& corpus() {
    static const auto docs = [] {
        SyntheticOptions o;
        o.units = 24;
        o.in_context = 0;
        o.out_of_context = 0;
        const auto base = generate_synthetic_corpus(o).documents;
        std::vector<Document> out;
        for (int copy = 0; copy < 10; ++copy) {
            for (auto d : base) {
                d.doc_id += "_" + std::to_string(copy);
                out.push_back(std::move(d));
            }
        }
        return out;
    }();
    return docs;
}

void BM_chunk_corpus_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(chunk_corpus(corpus(), StrategyOptions{}));
}

void BM_chunk_corpus_serial(benchmark::State& state) {
    for (auto _ : state) {
        std::vector<Chunk> all;
        for (const auto& d : corpus()) {
            auto c = chunk_document(d, StrategyOptions{});
            all.insert(all.end(), c.begin(), c.end());
        }
        benchmark::DoNotOptimize(all);
    }
}

} // namespace

BENCHMARK(BM_top_k<kernels::top_k_reference>)->Name("top_k/reference")->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_top_k<kernels::top_k_parallel>)->Name("top_k/parallel")->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_chunk_corpus_serial)->Name("chunk_corpus/serial");
BENCHMARK(BM_chunk_corpus_parallel)->Name("chunk_corpus/parallel");

BENCHMARK_MAIN();
