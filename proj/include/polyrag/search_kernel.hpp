#pragma once

// Exact cosine top-k over a row-major matrix of stored vectors.
//
// Two implementations share one contract: the OpenMP kernel used for
// serving, and a single-threaded reference kept for tests and benchmarks.
// Both compute each row's dot product in the same order, so their scores
// are bit-identical and their rankings equal.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace polyrag::kernels {

struct Hit {
    std::size_t row = 0;
    double score = 0.0;
};

struct MatrixView {
    std::span<const double> values; // rows * dim
    std::span<const double> row_norms;
    std::size_t dim = 0;

    std::size_t rows() const { return row_norms.size(); }
};

// Cosine of `query` against row r; 0 when either side is the zero vector,
// clamped to [-1, 1].
double cosine_row(const MatrixView& m, std::span<const double> query, double query_norm, std::size_t r);

// Scores compared on a 2^-32 grid, so rounding noise never splits a tie.
long long rank_key(double score);

// Ranking order: rank_key descending, then id ascending.
bool ranks_before(const Hit& a, const Hit& b, std::span<const std::string> ids);

std::vector<Hit> top_k_parallel(const MatrixView& m, std::span<const std::string> ids,
                                std::span<const double> query, std::size_t k);

std::vector<Hit> top_k_reference(const MatrixView& m, std::span<const std::string> ids,
                                 std::span<const double> query, std::size_t k);

double l2_norm(std::span<const double> v);

} // namespace polyrag::kernels
