#include "polyrag/chunk_store.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "polyrag/errors.hpp"

namespace polyrag {

using ordered_json = nlohmann::ordered_json;

std::string chunk_to_jsonl(const Chunk& chunk) {
    ordered_json j;
    j["doc_id"] = chunk.doc_id;
    j["chunk_id"] = chunk.chunk_id;
    j["text"] = chunk.text;
    j["char_start"] = chunk.char_start;
    j["char_end"] = chunk.char_end;
    j["strategy"] = std::string(to_string(chunk.strategy));
    return j.dump();
}

void write_chunk_store(const std::vector<Chunk>& chunks, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open chunk store for writing");
    for (const auto& c : chunks) out << chunk_to_jsonl(c) << '\n';
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

std::vector<Chunk> read_chunk_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read chunk store");
    std::vector<Chunk> chunks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            Chunk c;
            c.doc_id = j.at("doc_id").get<std::string>();
            c.chunk_id = j.at("chunk_id").get<std::string>();
            c.text = j.at("text").get<std::string>();
            c.char_start = j.at("char_start").get<std::size_t>();
            c.char_end = j.at("char_end").get<std::size_t>();
            const auto strategy = parse_strategy(j.at("strategy").get<std::string>());
            if (!strategy) throw InvalidArgument("unknown strategy");
            c.strategy = *strategy;
            chunks.push_back(std::move(c));
        } catch (const std::exception& e) {
            throw IoError(path, "malformed chunk store line " + std::to_string(line_no) + " (" + e.what() + ")");
        }
    }
    return chunks;
}

ChunkStoreSummary ingest(const std::vector<Document>& corpus, const StrategyOptions& options,
                         const std::string& store_path) {
    if (corpus.empty()) throw EmptyCorpusError("cannot ingest an empty corpus");
    const auto chunks = chunk_corpus(corpus, options);
    write_chunk_store(chunks, store_path);
    return {corpus.size(), chunks.size()};
}

} // namespace polyrag
