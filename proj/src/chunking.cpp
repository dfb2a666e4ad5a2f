#include "polyrag/chunking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <regex>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/utf8.hpp"

namespace polyrag {

std::string_view to_string(ChunkStrategy s) {
    switch (s) {
    case ChunkStrategy::FixedWindow: return "FixedWindow";
    case ChunkStrategy::Paragraph: return "Paragraph";
    case ChunkStrategy::SemanticUnit: return "SemanticUnit";
    case ChunkStrategy::Topic: return "Topic";
    case ChunkStrategy::Entity: return "Entity";
    }
    return "FixedWindow";
}

std::optional<ChunkStrategy> parse_strategy(std::string_view s) {
    const auto lower = text::to_lower_ascii(s);
    if (lower == "fixed" || lower == "fixedwindow") return ChunkStrategy::FixedWindow;
    if (lower == "paragraph") return ChunkStrategy::Paragraph;
    if (lower == "semantic" || lower == "semanticunit") return ChunkStrategy::SemanticUnit;
    if (lower == "topic") return ChunkStrategy::Topic;
    if (lower == "entity") return ChunkStrategy::Entity;
    return std::nullopt;
}

bool is_span_preserving(ChunkStrategy s) { return s != ChunkStrategy::Topic; }

void ChunkParams::validate() const {
    if (size == 0) throw InvalidArgument("chunk size must be > 0");
    if (overlap >= size) throw InvalidArgument("chunk overlap must be < size");
}

namespace {

using text::Span;

// UTF-8 text addressed by code point offsets.
class CodepointText {
public:
    explicit CodepointText(std::string_view s) : text_(s), offsets_(utf8::codepoint_offsets(s)) {}

    std::size_t size() const { return offsets_.size() - 1; }

    std::string slice(std::size_t cp_start, std::size_t cp_end) const {
        return std::string(text_.substr(offsets_[cp_start], offsets_[cp_end] - offsets_[cp_start]));
    }

    std::size_t to_cp(std::size_t byte) const {
        return static_cast<std::size_t>(std::lower_bound(offsets_.begin(), offsets_.end(), byte) - offsets_.begin());
    }

    Span to_cp(Span bytes) const { return {to_cp(bytes.start), to_cp(bytes.end)}; }

    std::string_view bytes() const { return text_; }

private:
    std::string_view text_;
    std::vector<std::size_t> offsets_;
};

// Sliding windows over [0, n): starts at multiples of size - overlap, and a
// window is kept only if it ends past the previously kept one.
std::vector<Span> fixed_spans(std::size_t n, const ChunkParams& params) {
    std::vector<Span> spans;
    if (n == 0) return spans;
    const std::size_t step = params.size - params.overlap;
    std::size_t prev_end = 0;
    for (std::size_t start = 0; start < n; start += step) {
        const std::size_t end = std::min(start + params.size, n);
        if (spans.empty() || end > prev_end) {
            spans.push_back({start, end});
            prev_end = end;
        }
        if (end == n) break;
    }
    return spans;
}

Chunk make_chunk(const CodepointText& t, Span cp, ChunkStrategy strategy) {
    Chunk c;
    c.text = t.slice(cp.start, cp.end);
    c.char_start = cp.start;
    c.char_end = cp.end;
    c.strategy = strategy;
    return c;
}

void emit_fixed(const CodepointText& t, Span region, const ChunkParams& params, ChunkStrategy strategy,
                std::vector<Chunk>& out) {
    for (const auto& s : fixed_spans(region.end - region.start, params)) {
        out.push_back(make_chunk(t, {region.start + s.start, region.start + s.end}, strategy));
    }
}

std::size_t merge_cap(const ChunkParams& params) { return params.max_size ? params.max_size : params.size; }

std::vector<Span> paragraphs_cp(const CodepointText& t) {
    std::vector<Span> out;
    for (const auto& p : text::paragraph_spans(t.bytes())) out.push_back(t.to_cp(p));
    return out;
}

using TermVector = std::map<std::string, double>;

TermVector term_frequencies(std::string_view s) {
    TermVector tf;
    for (auto& tok : text::tokenize(s)) tf[tok] += 1.0;
    return tf;
}

double cosine(const TermVector& a, const TermVector& b) {
    double dot = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    if (dot == 0.0) return 0.0;
    double na = 0.0, nb = 0.0;
    for (const auto& [_, v] : a) na += v * v;
    for (const auto& [_, v] : b) nb += v * v;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void accumulate(TermVector& into, const TermVector& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

bool is_word_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
}

// Byte offsets of whole-word, case-insensitive occurrences of `term`.
std::vector<std::size_t> find_occurrences(std::string_view lowered, std::string_view term) {
    std::vector<std::size_t> hits;
    if (term.empty()) return hits;
    std::size_t pos = 0;
    while ((pos = lowered.find(term, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || !is_word_byte(lowered[pos - 1]);
        const std::size_t after = pos + term.size();
        const bool right_ok = after >= lowered.size() || !is_word_byte(lowered[after]);
        if (left_ok && right_ok) hits.push_back(pos);
        ++pos;
    }
    return hits;
}

std::vector<Span> merge_spans(std::vector<Span> spans) {
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.start != b.start ? a.start < b.start : a.end < b.end; });
    std::vector<Span> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.start <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, s.end);
        } else {
            merged.push_back(s);
        }
    }
    return merged;
}

} // namespace

std::vector<Chunk> chunk_fixed(std::string_view text, const ChunkParams& params) {
    params.validate();
    const CodepointText t(text);
    std::vector<Chunk> out;
    emit_fixed(t, {0, t.size()}, params, ChunkStrategy::FixedWindow, out);
    return out;
}

std::vector<Chunk> chunk_paragraph(std::string_view text, const ChunkParams& params) {
    params.validate();
    const CodepointText t(text);
    const std::size_t cap = merge_cap(params);
    std::vector<Chunk> out;
    std::optional<Span> group;
    const auto flush = [&] {
        if (group) out.push_back(make_chunk(t, *group, ChunkStrategy::Paragraph));
        group.reset();
    };
    for (const auto& p : paragraphs_cp(t)) {
        if (p.end - p.start > cap) {
            flush();
            emit_fixed(t, p, params, ChunkStrategy::Paragraph, out);
            continue;
        }
        if (group && p.end - group->start <= cap) {
            group->end = p.end;
        } else {
            flush();
            group = p;
        }
    }
    flush();
    return out;
}

std::vector<std::string> default_heading_patterns() { return {"#", "Step ", "[0-9]+\\. "}; }

std::vector<Chunk> chunk_semantic_unit(std::string_view text, const std::vector<std::string>& heading_patterns,
                                       const ChunkParams& params) {
    params.validate();
    if (heading_patterns.empty()) throw InvalidArgument("heading patterns must be non-empty");
    std::vector<std::regex> patterns;
    patterns.reserve(heading_patterns.size());
    for (const auto& p : heading_patterns) patterns.emplace_back(p, std::regex::ECMAScript);

    const CodepointText t(text);
    const auto bytes = t.bytes();

    // Byte offsets where a section begins.
    std::vector<std::size_t> starts{0};
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const std::size_t nl = bytes.find('\n', pos);
        const std::size_t line_end = nl == std::string_view::npos ? bytes.size() : nl;
        const std::string line(bytes.substr(pos, line_end - pos));
        const bool heading = std::any_of(patterns.begin(), patterns.end(), [&](const std::regex& re) {
            return std::regex_search(line, re, std::regex_constants::match_continuous);
        });
        if (heading && pos != 0) starts.push_back(pos);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    starts.push_back(bytes.size());

    const std::size_t cap = merge_cap(params);
    std::vector<Chunk> out;
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
        std::size_t b = starts[i];
        std::size_t e = starts[i + 1];
        while (b < e && std::isspace(static_cast<unsigned char>(bytes[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(bytes[e - 1]))) --e;
        if (b == e) continue;
        const Span section = t.to_cp(Span{b, e});
        if (section.end - section.start > cap) {
            emit_fixed(t, section, params, ChunkStrategy::SemanticUnit, out);
        } else {
            out.push_back(make_chunk(t, section, ChunkStrategy::SemanticUnit));
        }
    }
    return out;
}

std::vector<Chunk> chunk_topic(std::string_view text, std::size_t k, const ChunkParams& params) {
    params.validate();
    if (k == 0) throw InvalidArgument("topic cluster count must be >= 1");
    const CodepointText t(text);
    const auto paras = paragraphs_cp(t);
    if (paras.empty()) return {};

    struct Cluster {
        std::vector<std::size_t> members;
        TermVector terms;
    };
    std::vector<TermVector> vectors;
    vectors.reserve(paras.size());
    for (const auto& p : paras) vectors.push_back(term_frequencies(t.slice(p.start, p.end)));

    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < paras.size(); ++i) {
        double best = -1.0;
        std::size_t best_idx = 0;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double sim = cosine(vectors[i], clusters[c].terms);
            if (sim > best) {
                best = sim;
                best_idx = c;
            }
        }
        if (!clusters.empty() && best >= kTopicJoinThreshold) {
            clusters[best_idx].members.push_back(i);
            accumulate(clusters[best_idx].terms, vectors[i]);
        } else {
            clusters.push_back({{i}, vectors[i]});
        }
    }

    while (clusters.size() > k) {
        double best = -1.0;
        std::size_t bi = 0, bj = 1;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double sim = cosine(clusters[i].terms, clusters[j].terms);
                if (sim > best) {
                    best = sim;
                    bi = i;
                    bj = j;
                }
            }
        }
        auto& into = clusters[bi];
        into.members.insert(into.members.end(), clusters[bj].members.begin(), clusters[bj].members.end());
        std::sort(into.members.begin(), into.members.end());
        accumulate(into.terms, clusters[bj].terms);
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.members.front() < b.members.front(); });
    std::vector<Chunk> out;
    for (const auto& c : clusters) {
        Chunk chunk;
        std::vector<std::string> parts;
        for (auto m : c.members) parts.push_back(t.slice(paras[m].start, paras[m].end));
        chunk.text = text::join(parts, "\n\n");
        chunk.char_start = paras[c.members.front()].start;
        chunk.char_end = paras[c.members.back()].end;
        chunk.strategy = ChunkStrategy::Topic;
        out.push_back(std::move(chunk));
    }
    return out;
}

std::vector<Chunk> chunk_entity(std::string_view text, const std::vector<std::string>& entity_lexicon,
                                const ChunkParams& params) {
    params.validate();
    if (entity_lexicon.empty()) throw InvalidArgument("entity lexicon must be non-empty");
    const CodepointText t(text);
    const std::size_t n = t.size();
    if (n == 0) return {};

    std::vector<Span> sentences;
    for (const auto& s : text::sentence_spans(t.bytes())) sentences.push_back(t.to_cp(s));

    const auto lowered = text::to_lower_ascii(t.bytes());
    const std::size_t half = params.size / 2;
    std::vector<Span> windows;
    for (const auto& raw : entity_lexicon) {
        const auto term = text::to_lower_ascii(text::trim(raw));
        std::vector<Span> per_entity;
        for (auto byte_pos : find_occurrences(lowered, term)) {
            const std::size_t occ = t.to_cp(byte_pos);
            const std::size_t occ_end = t.to_cp(byte_pos + term.size());
            const std::size_t lo = occ > half ? occ - half : 0;
            const std::size_t hi = std::min(n, std::max(occ + half, occ_end));
            std::optional<Span> w;
            for (const auto& s : sentences) {
                if (s.end > lo && s.start < hi) {
                    if (!w) w = s;
                    w->end = s.end;
                }
            }
            if (!w) w = Span{occ, occ_end};
            per_entity.push_back(*w);
        }
        for (const auto& w : merge_spans(std::move(per_entity))) windows.push_back(w);
    }
    std::sort(windows.begin(), windows.end(),
              [](const Span& a, const Span& b) { return a.start != b.start ? a.start < b.start : a.end < b.end; });
    windows.erase(std::unique(windows.begin(), windows.end()), windows.end());

    std::vector<Chunk> out;
    for (const auto& w : windows) out.push_back(make_chunk(t, w, ChunkStrategy::Entity));

    // Residual coverage for text outside every entity window.
    std::size_t cursor = 0;
    std::vector<Span> gaps;
    for (const auto& w : merge_spans(windows)) {
        if (w.start > cursor) gaps.push_back({cursor, w.start});
        cursor = std::max(cursor, w.end);
    }
    if (cursor < n) gaps.push_back({cursor, n});
    for (const auto& g : gaps) {
        if (text::is_blank(t.slice(g.start, g.end))) continue;
        emit_fixed(t, g, params, ChunkStrategy::Entity, out);
    }
    std::stable_sort(out.begin(), out.end(), [](const Chunk& a, const Chunk& b) {
        return a.char_start != b.char_start ? a.char_start < b.char_start : a.char_end < b.char_end;
    });
    return out;
}

std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "#%04zu", ordinal);
    return std::string(doc_id) + buf;
}

void assign_ids(std::vector<Chunk>& chunks, std::string_view doc_id) {
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        chunks[i].doc_id = std::string(doc_id);
        chunks[i].chunk_id = make_chunk_id(doc_id, i);
    }
}

std::vector<Chunk> chunk_document(const Document& doc, const StrategyOptions& options) {
    std::vector<Chunk> chunks;
    switch (options.strategy) {
    case ChunkStrategy::FixedWindow: chunks = chunk_fixed(doc.text, options.params); break;
    case ChunkStrategy::Paragraph: chunks = chunk_paragraph(doc.text, options.params); break;
    case ChunkStrategy::SemanticUnit:
        chunks = chunk_semantic_unit(doc.text, options.heading_patterns, options.params);
        break;
    case ChunkStrategy::Topic: chunks = chunk_topic(doc.text, options.topic_k, options.params); break;
    case ChunkStrategy::Entity: chunks = chunk_entity(doc.text, options.entity_lexicon, options.params); break;
    }
    assign_ids(chunks, doc.doc_id);
    return chunks;
}

std::vector<Chunk> chunk_corpus(const std::vector<Document>& corpus, const StrategyOptions& options) {
    std::vector<std::vector<Chunk>> per_doc(corpus.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            per_doc[static_cast<std::size_t>(i)] = chunk_document(corpus[static_cast<std::size_t>(i)], options);
        } catch (...) {
#pragma omp critical(polyrag_chunk_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<Chunk> all;
    for (auto& v : per_doc) {
        all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    return all;
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot read lexicon");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace polyrag
