#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polyrag/chunking.hpp"

namespace polyrag {

struct ChunkStoreSummary {
    std::size_t doc_count = 0;
    std::size_t chunk_count = 0;
};

// One JSON object per chunk, keys in the fixed order
// doc_id, chunk_id, text, char_start, char_end, strategy.
std::string chunk_to_jsonl(const Chunk& chunk);

void write_chunk_store(const std::vector<Chunk>& chunks, const std::string& path);

std::vector<Chunk> read_chunk_store(const std::string& path);

// Chunks the corpus and writes the store. Throws EmptyCorpusError on an
// empty corpus and IoError naming the path on write failure.
ChunkStoreSummary ingest(const std::vector<Document>& corpus, const StrategyOptions& options,
                         const std::string& store_path);

} // namespace polyrag
