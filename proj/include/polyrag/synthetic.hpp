#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polyrag/chunking.hpp"
#include "polyrag/corpus.hpp"

namespace polyrag {

struct QAPair {
    std::string question;
    // Chunks (under the default fixed-window setting) whose span overlaps
    // the answer sentence.
    std::vector<std::string> expected_chunk_ids;
    std::string expected_doc_id;
    std::size_t answer_start = 0; // code points, within the expected document
    std::size_t answer_end = 0;
    std::string expected_answer_substring;
    bool in_context = true; // false: should be refused
};

struct SyntheticOptions {
    std::uint64_t seed = 7;
    std::size_t units = 20;          // one document per unit
    std::size_t in_context = 50;
    std::size_t out_of_context = 50;
    double grounding_threshold = 0.15;
    ChunkParams params;
};

struct SyntheticCorpus {
    std::vector<Document> documents;
    std::vector<QAPair> qa_pairs;
};

// Templated HR/QA handbooks with one numeric fact per section, labelled
// in-context questions about those facts, and out-of-context questions
// whose vocabulary is disjoint from the corpus and whose best cosine
// against the fixed-window chunks stays below the grounding threshold.
SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options = {});

// Writes <doc_id>.md files, manifest.csv and qa_pairs.jsonl into `dir`.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

std::vector<QAPair> load_qa_pairs(const std::filesystem::path& path);

// Ids of chunks from the expected document whose span overlaps the answer.
std::vector<std::string> chunk_ids_covering(const QAPair& qa, const std::vector<Chunk>& chunks);

} // namespace polyrag
