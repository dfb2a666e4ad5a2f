#include "polyrag/embedding.hpp"

#include <cmath>

#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"

namespace polyrag {

double Vector::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

HashBowEmbedder::HashBowEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw InvalidArgument("embedding dimension must be > 0");
}

std::size_t HashBowEmbedder::bucket_of(std::string_view token) const {
    return static_cast<std::size_t>(fnv1a64(token) % dimension_);
}

Vector HashBowEmbedder::embed(std::string_view text) const {
    const auto tokens = text::tokenize(text);
    if (tokens.empty()) throw EmptyTextError("text has no tokens to embed");
    Vector v{std::vector<double>(dimension_, 0.0)};
    for (const auto& tok : tokens) v.values[bucket_of(tok)] += 1.0;
    const double n = v.norm();
    for (double& x : v.values) x /= n;
    return v;
}

} // namespace polyrag
