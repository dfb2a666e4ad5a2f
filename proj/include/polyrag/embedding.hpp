#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polyrag {

struct Vector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }
    double norm() const;
    bool operator==(const Vector&) const = default;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    // Throws EmptyTextError when the text has no tokens.
    virtual Vector embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::string name() const = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Hashed bag of words: each token's FNV-1a hash picks a bucket, counts are
// L2-normalized.
class HashBowEmbedder final : public Embedder {
public:
    static constexpr std::size_t kDefaultDimension = 256;
    static constexpr const char* kName = "hash-bow-v1";

    explicit HashBowEmbedder(std::size_t dimension = kDefaultDimension);

    Vector embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }
    std::string name() const override { return kName; }

    std::size_t bucket_of(std::string_view token) const;

private:
    std::size_t dimension_;
};

} // namespace polyrag
