#include "polyrag/index.hpp"

#include <exception>
#include <fstream>

#include <json.hpp>

#include "polyrag/errors.hpp"
#include "polyrag/search_kernel.hpp"

namespace polyrag {

Index::Index(std::vector<Chunk> chunks, std::vector<double> matrix, std::size_t dim, std::string embedder_name)
    : chunks_(std::move(chunks)), matrix_(std::move(matrix)), dim_(dim), embedder_name_(std::move(embedder_name)) {
    ids_.reserve(chunks_.size());
    norms_.reserve(chunks_.size());
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (!by_id_.emplace(chunks_[i].chunk_id, i).second) {
            throw IndexError("duplicate chunk_id: " + chunks_[i].chunk_id);
        }
        ids_.push_back(chunks_[i].chunk_id);
        norms_.push_back(kernels::l2_norm(vector_of(i)));
    }
}

Index Index::build(std::vector<Chunk> chunks, const Embedder& embedder) {
    if (chunks.empty()) throw IndexError("cannot build an index from zero chunks");
    {
        std::unordered_map<std::string, int> seen;
        for (const auto& c : chunks) {
            if (++seen[c.chunk_id] > 1) throw IndexError("duplicate chunk_id: " + c.chunk_id);
        }
    }
    const std::size_t dim = embedder.dimension();
    std::vector<double> matrix(chunks.size() * dim, 0.0);
    std::exception_ptr failure;
    std::string failed_id;
    const auto count = static_cast<std::ptrdiff_t>(chunks.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto row = static_cast<std::size_t>(i);
        try {
            Vector v = embedder.embed(chunks[row].text);
            if (v.dimension() != dim) throw IndexError("embedder returned wrong dimension");
            const double n = v.norm();
            for (std::size_t d = 0; d < dim; ++d) matrix[row * dim + d] = n > 0.0 ? v.values[d] / n : 0.0;
        } catch (const std::exception& e) {
#pragma omp critical(polyrag_index_failure)
            if (!failure || chunks[row].chunk_id < failed_id) {
                failed_id = chunks[row].chunk_id;
                failure = std::make_exception_ptr(
                    IndexError("embedding failed for chunk " + chunks[row].chunk_id + ": " + e.what()));
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return Index(std::move(chunks), std::move(matrix), dim, embedder.name());
}

std::span<const double> Index::vector_of(std::size_t row) const {
    return std::span<const double>(matrix_).subspan(row * dim_, dim_);
}

const Chunk* Index::find(std::string_view chunk_id) const {
    const auto it = by_id_.find(std::string(chunk_id));
    return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

void Index::check_query(const Vector& query, std::size_t k) const {
    if (k == 0) throw InvalidArgument("k must be >= 1");
    if (!chunks_.empty() && query.dimension() != dim_) {
        throw InvalidArgument("query dimension " + std::to_string(query.dimension()) + " != index dimension " +
                              std::to_string(dim_));
    }
}

namespace {

std::vector<ScoredChunk> to_scored(const std::vector<kernels::Hit>& hits, const std::vector<Chunk>& chunks) {
    std::vector<ScoredChunk> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({chunks[h.row], h.score});
    return out;
}

} // namespace

std::vector<ScoredChunk> Index::search(const Vector& query, std::size_t k) const {
    check_query(query, k);
    if (chunks_.empty()) return {};
    const kernels::MatrixView m{matrix_, norms_, dim_};
    return to_scored(kernels::top_k_parallel(m, ids_, query.values, k), chunks_);
}

std::vector<ScoredChunk> Index::search_reference(const Vector& query, std::size_t k) const {
    check_query(query, k);
    if (chunks_.empty()) return {};
    const kernels::MatrixView m{matrix_, norms_, dim_};
    return to_scored(kernels::top_k_reference(m, ids_, query.values, k), chunks_);
}

void Index::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open index file for writing");
    nlohmann::ordered_json header;
    header["dimension"] = dim_;
    header["count"] = chunks_.size();
    header["embedder"] = embedder_name_;
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        nlohmann::ordered_json row;
        row["chunk_id"] = chunks_[i].chunk_id;
        const auto v = vector_of(i);
        row["vector"] = std::vector<double>(v.begin(), v.end());
        out << row.dump() << '\n';
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

Index Index::load(const std::string& path, const std::vector<Chunk>& store) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read index file");
    std::unordered_map<std::string, const Chunk*> by_id;
    for (const auto& c : store) by_id.emplace(c.chunk_id, &c);

    std::string line;
    if (!std::getline(in, line)) throw IndexError("index file has no header: " + path);
    std::size_t dim = 0, count = 0;
    std::string embedder;
    try {
        const auto h = nlohmann::json::parse(line);
        dim = h.at("dimension").get<std::size_t>();
        count = h.at("count").get<std::size_t>();
        embedder = h.at("embedder").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IndexError("bad index header in " + path + ": " + e.what());
    }

    std::vector<Chunk> chunks;
    std::vector<double> matrix;
    chunks.reserve(count);
    matrix.reserve(count * dim);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::string id;
        std::vector<double> v;
        try {
            const auto row = nlohmann::json::parse(line);
            id = row.at("chunk_id").get<std::string>();
            v = row.at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw IndexError("bad index row in " + path + ": " + e.what());
        }
        if (v.size() != dim) throw IndexError("vector dimension mismatch for chunk " + id);
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw IndexError("chunk " + id + " missing from chunk store");
        chunks.push_back(*it->second);
        matrix.insert(matrix.end(), v.begin(), v.end());
    }
    if (chunks.size() != count) {
        throw IndexError("index header count " + std::to_string(count) + " != rows " + std::to_string(chunks.size()));
    }
    return Index(std::move(chunks), std::move(matrix), dim, embedder);
}

} // namespace polyrag
