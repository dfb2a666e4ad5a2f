#include "polyrag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace fs = std::filesystem;

namespace polyrag {

std::string_view to_string(Collection c) {
    switch (c) {
    case Collection::HR: return "HR";
    case Collection::QA: return "QA";
    case Collection::OTHER: return "OTHER";
    }
    return "OTHER";
}

std::optional<Collection> parse_collection(std::string_view s) {
    const auto upper = [&] {
        std::string u(s);
        for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return u;
    }();
    if (upper == "HR") return Collection::HR;
    if (upper == "QA") return Collection::QA;
    if (upper == "OTHER") return Collection::OTHER;
    return std::nullopt;
}

namespace {

bool is_corpus_file(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".txt" || ext == ".md";
}

std::map<std::string, Collection> read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot read manifest");
    std::map<std::string, Collection> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = text::trim(line);
        if (line.empty()) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != 2) {
            throw InvalidArgument("manifest line " + std::to_string(line_no) + ": expected filename,collection");
        }
        const auto name = text::trim(fields[0]);
        const auto coll = text::trim(fields[1]);
        if (line_no == 1 && name == "filename") continue;
        const auto parsed = parse_collection(coll);
        if (!parsed) {
            throw InvalidArgument("manifest line " + std::to_string(line_no) + ": unknown collection '" + coll + "'");
        }
        out[name] = *parsed;
    }
    return out;
}

std::string title_of(std::string_view body) {
    for (const auto& line : text::split(body, '\n')) {
        auto t = text::trim(line);
        if (t.empty()) continue;
        const auto first = t.find_first_not_of("# ");
        return first == std::string::npos ? t : t.substr(first);
    }
    return {};
}

} // namespace

LoadResult load_corpus(const fs::path& root, const std::optional<fs::path>& manifest) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError(root.string(), "corpus root is not a directory");

    std::map<std::string, Collection> collections;
    if (manifest) collections = read_manifest(*manifest);

    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (it->is_regular_file(ec) && is_corpus_file(it->path())) files.push_back(it->path());
    }
    if (ec) throw IoError(root.string(), "cannot list corpus directory");
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    if (files.empty()) throw EmptyCorpusError("no .txt or .md files under " + root.string());

    LoadResult result;
    std::set<std::string> seen;
    for (const auto& file : files) {
        const auto rel = fs::relative(file, root).generic_string();
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            result.failures.push_back({file.string(), "unreadable"});
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string body = buf.str();
        if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.erase(0, 3);
        if (!utf8::is_valid(body)) {
            result.failures.push_back({file.string(), "invalid UTF-8"});
            continue;
        }
        body = text::normalize_newlines(body);
        if (text::is_blank(body)) {
            result.failures.push_back({file.string(), "empty text"});
            continue;
        }
        auto id = fs::path(rel).replace_extension().generic_string();
        if (!seen.insert(id).second) {
            result.failures.push_back({file.string(), "duplicate doc_id '" + id + "'"});
            continue;
        }
        Document doc;
        doc.doc_id = std::move(id);
        doc.title = title_of(body);
        doc.text = std::move(body);
        doc.source_path = file.generic_string();
        if (auto hit = collections.find(rel); hit != collections.end()) {
            doc.collection = hit->second;
        } else if (auto by_name = collections.find(file.filename().string()); by_name != collections.end()) {
            doc.collection = by_name->second;
        }
        result.documents.push_back(std::move(doc));
    }
    return result;
}

} // namespace polyrag
