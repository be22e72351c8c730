#ifndef CAMS_EMBEDDING_HPP
#define CAMS_EMBEDDING_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cams/core.hpp"
#include "cams/numerics.hpp"

namespace cams {

// SHA-256 hex digest of the NFC-normalized UTF-8 text; the store key.
std::string content_key(const std::string& text);

// Immutable once built. Entries are keyed by content hash so identical texts
// share one vector.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool contains(const std::string& text) const;
    const Vector& lookup(const std::string& text) const;

    // Rejects wrong-dimension and zero-norm vectors. Re-inserting the same
    // text with a different vector is an error.
    void insert(const std::string& text, Vector v);
    void insert_by_key(const std::string& key, Vector v);

    const std::map<std::string, Vector>& entries() const { return entries_; }

    void save(const std::string& path) const;
    static EmbeddingStore load(const std::string& path);

private:
    std::size_t dim_ = 0;
    std::map<std::string, Vector> entries_;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // Order-preserving: vectors[i] embeds texts[i]. Fixed dimension per provider.
    virtual std::vector<Vector> embed(const std::vector<std::string>& texts) = 0;
};

// Serves pre-computed vectors from a store file; fails on unknown text.
class FileEmbeddingProvider : public EmbeddingProvider {
public:
    explicit FileEmbeddingProvider(const std::string& store_path);
    explicit FileEmbeddingProvider(EmbeddingStore store) : store_(std::move(store)) {}
    std::vector<Vector> embed(const std::vector<std::string>& texts) override;

private:
    EmbeddingStore store_;
};

// POST {"texts":[...]} to endpoint, expects {"dim":n,"vectors":[[...],...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(std::string host_port, std::string path = "/embed",
                          int retries = 3);
    std::vector<Vector> embed(const std::vector<std::string>& texts) override;

private:
    std::string host_port_;
    std::string path_;
    int retries_;
};

struct EmbedOptions {
    bool l2_normalize = false;
    std::size_t batch_size = 64;
};

// Extends `cache` to cover every distinct answer and ground-truth text of the
// dataset. Cache hits are not re-requested.
EmbeddingStore embed_dataset(const Dataset& d, EmbeddingProvider& provider,
                             EmbeddingStore cache, const EmbedOptions& opts = {});

// Fails fast, naming the first uncovered text.
void require_coverage(const Dataset& d, const EmbeddingStore& store);

}  // namespace cams

#endif
