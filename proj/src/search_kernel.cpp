#include "polyrag/search_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace polyrag::kernels {

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double cosine_row(const MatrixView& m, std::span<const double> query, double query_norm, std::size_t r) {
    const double rn = m.row_norms[r];
    if (rn == 0.0 || query_norm == 0.0) return 0.0;
    const double* row = m.values.data() + r * m.dim;
    double dot = 0.0;
    for (std::size_t d = 0; d < m.dim; ++d) dot += row[d] * query[d];
    return std::clamp(dot / (rn * query_norm), -1.0, 1.0);
}

long long rank_key(double score) { return std::llround(std::ldexp(score, 32)); }

bool ranks_before(const Hit& a, const Hit& b, std::span<const std::string> ids) {
    const auto ka = rank_key(a.score);
    const auto kb = rank_key(b.score);
    if (ka != kb) return ka > kb;
    return ids[a.row] < ids[b.row];
}

std::vector<Hit> top_k_reference(const MatrixView& m, std::span<const std::string> ids,
                                 std::span<const double> query, std::size_t k) {
    const double qn = l2_norm(query);
    std::vector<Hit> all(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) all[r] = {r, cosine_row(m, query, qn, r)};
    std::sort(all.begin(), all.end(), [&](const Hit& a, const Hit& b) { return ranks_before(a, b, ids); });
    if (all.size() > k) all.resize(k);
    return all;
}

std::vector<Hit> top_k_parallel(const MatrixView& m, std::span<const std::string> ids,
                                std::span<const double> query, std::size_t k) {
    const double qn = l2_norm(query);
    const auto rows = static_cast<std::ptrdiff_t>(m.rows());
    const auto cmp = [&](const Hit& a, const Hit& b) { return ranks_before(a, b, ids); };

    std::vector<Hit> merged;
#pragma omp parallel
    {
        // Per-thread candidates, trimmed to k whenever they reach 2k.
        std::vector<Hit> local;
        local.reserve(2 * k + 1);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t r = 0; r < rows; ++r) {
            const auto row = static_cast<std::size_t>(r);
            local.push_back({row, cosine_row(m, query, qn, row)});
            if (local.size() >= 2 * k) {
                std::nth_element(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(k) - 1, local.end(), cmp);
                local.resize(k);
            }
        }
#pragma omp critical(polyrag_topk_merge)
        merged.insert(merged.end(), local.begin(), local.end());
    }
    std::sort(merged.begin(), merged.end(), cmp);
    if (merged.size() > k) merged.resize(k);
    return merged;
}

} // namespace polyrag::kernels
