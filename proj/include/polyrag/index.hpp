#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polyrag/chunking.hpp"
#include "polyrag/embedding.hpp"

namespace polyrag {

struct ScoredChunk {
    Chunk chunk;
    double score = 0.0;
};

inline constexpr std::size_t kDefaultRetrievalK = 4;

// Exact-scan vector index. Immutable after construction, so a const Index
// can be shared by concurrent readers.
class Index {
public:
    Index() = default;

    // Embeds every chunk. Throws IndexError on an empty list, a duplicate
    // chunk_id, or an embedder failure (the message names the chunk_id).
    static Index build(std::vector<Chunk> chunks, const Embedder& embedder);

    // Reads the persistence file; chunk text is resolved from `store`.
    static Index load(const std::string& path, const std::vector<Chunk>& store);

    void save(const std::string& path) const;

    std::size_t size() const { return chunks_.size(); }
    std::size_t dimension() const { return dim_; }
    const std::string& embedder_name() const { return embedder_name_; }
    const std::vector<Chunk>& chunks() const { return chunks_; }
    std::span<const double> vector_of(std::size_t row) const;
    const Chunk* find(std::string_view chunk_id) const;

    // Exact top-k by cosine (OpenMP kernel). Throws InvalidArgument for k == 0
    // or a dimension mismatch; an empty index yields an empty list.
    std::vector<ScoredChunk> search(const Vector& query, std::size_t k) const;

    // Same contract, single-threaded reference path.
    std::vector<ScoredChunk> search_reference(const Vector& query, std::size_t k) const;

private:
    Index(std::vector<Chunk> chunks, std::vector<double> matrix, std::size_t dim, std::string embedder_name);

    void check_query(const Vector& query, std::size_t k) const;

    std::vector<Chunk> chunks_;
    std::vector<std::string> ids_;
    std::vector<double> matrix_;
    std::vector<double> norms_;
    std::size_t dim_ = 0;
    std::string embedder_name_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

} // namespace polyrag
