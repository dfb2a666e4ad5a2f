#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag {

enum class Collection { HR, QA, OTHER };

std::string_view to_string(Collection c);
std::optional<Collection> parse_collection(std::string_view s);

struct Document {
    std::string doc_id;
    Collection collection = Collection::OTHER;
    std::string title;
    std::string text; // UTF-8, LF newlines
    std::string source_path;
};

struct LoadFailure {
    std::string path;
    std::string reason;
};

struct LoadResult {
    std::vector<Document> documents;
    std::vector<LoadFailure> failures;
};

// Loads every .txt/.md file under `root` (recursively) in lexicographic path
// order. doc_id is the relative path without extension. The manifest is a
// CSV with header `filename,collection`; unlisted files get OTHER.
// Throws EmptyCorpusError when the directory holds no candidate files and
// IoError when root or the manifest cannot be read. Per-file problems are
// reported in LoadResult::failures and loading continues.
LoadResult load_corpus(const std::filesystem::path& root,
                       const std::optional<std::filesystem::path>& manifest = std::nullopt);

} // namespace polyrag
