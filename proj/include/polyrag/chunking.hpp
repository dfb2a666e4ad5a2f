#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyrag/corpus.hpp"

namespace polyrag {

enum class ChunkStrategy { FixedWindow, Paragraph, SemanticUnit, Topic, Entity };

std::string_view to_string(ChunkStrategy s);
std::optional<ChunkStrategy> parse_strategy(std::string_view s);

// True for strategies whose chunk text is always the exact document slice.
bool is_span_preserving(ChunkStrategy s);

// Sizes are in Unicode code points.
struct ChunkParams {
    std::size_t size = 1000;
    std::size_t overlap = 200;
    std::size_t max_size = 0; // 0: no extra cap beyond `size`

    void validate() const; // throws InvalidArgument
};

struct Chunk {
    std::string doc_id;
    std::string chunk_id;
    std::string text;
    std::size_t char_start = 0; // code point offset, inclusive
    std::size_t char_end = 0;   // code point offset, exclusive
    ChunkStrategy strategy = ChunkStrategy::FixedWindow;

    bool operator==(const Chunk&) const = default;
};

// Chunkers return chunks with empty doc_id/chunk_id; assign_ids fills them.
std::vector<Chunk> chunk_fixed(std::string_view text, const ChunkParams& params);

std::vector<Chunk> chunk_paragraph(std::string_view text, const ChunkParams& params);

std::vector<std::string> default_heading_patterns();

// Each pattern is an ECMAScript regex matched at the start of a line.
std::vector<Chunk> chunk_semantic_unit(std::string_view text,
                                       const std::vector<std::string>& heading_patterns,
                                       const ChunkParams& params);

inline constexpr double kTopicJoinThreshold = 0.2;

std::vector<Chunk> chunk_topic(std::string_view text, std::size_t k, const ChunkParams& params);

// Throws InvalidArgument on an empty lexicon.
std::vector<Chunk> chunk_entity(std::string_view text,
                                const std::vector<std::string>& entity_lexicon,
                                const ChunkParams& params);

std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal);

void assign_ids(std::vector<Chunk>& chunks, std::string_view doc_id);

struct StrategyOptions {
    ChunkStrategy strategy = ChunkStrategy::FixedWindow;
    ChunkParams params;
    std::vector<std::string> heading_patterns = default_heading_patterns();
    std::size_t topic_k = 4;
    std::vector<std::string> entity_lexicon;
};

// Dispatches to the strategy's chunker and assigns ids for `doc`.
std::vector<Chunk> chunk_document(const Document& doc, const StrategyOptions& options);

// Chunks every document (in parallel) and concatenates in corpus order.
std::vector<Chunk> chunk_corpus(const std::vector<Document>& corpus, const StrategyOptions& options);

// One term per line; blank lines and lines starting with '#' are ignored.
std::vector<std::string> load_lexicon(const std::string& path);

} // namespace polyrag
