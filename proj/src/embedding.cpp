#include "cams/embedding.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "httplib.h"
#include "json.hpp"

namespace cams {

std::string content_key(const std::string& text) {
    const std::string norm = normalize_text(text);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(norm.data(), norm.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

double vector_norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

bool EmbeddingStore::contains(const std::string& text) const {
    return entries_.count(content_key(text)) != 0;
}

const Vector& EmbeddingStore::lookup(const std::string& text) const {
    auto it = entries_.find(content_key(text));
    if (it == entries_.end()) throw Error("embedding missing for text: \"" + text + "\"");
    return it->second;
}

void EmbeddingStore::insert(const std::string& text, Vector v) {
    insert_by_key(content_key(text), std::move(v));
}

void EmbeddingStore::insert_by_key(const std::string& key, Vector v) {
    if (dim_ == 0) dim_ = v.size();
    if (v.size() != dim_)
        throw Error("embedding dimension mismatch: store dim " + std::to_string(dim_) +
                    ", got " + std::to_string(v.size()));
    for (double x : v)
        if (!std::isfinite(x)) throw Error("non-finite embedding component");
    if (vector_norm2(v) == 0.0) throw Error("zero-norm embedding vector");
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        if (it->second != v) throw Error("conflicting vectors for key " + key);
        return;
    }
    entries_.emplace(key, std::move(v));
}

void EmbeddingStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write embedding store: " + path);
    out << "CAMSEMB v1 dim=" << dim_ << "\n";
    for (auto& [key, vec] : entries_) {
        out << key << "\t";
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (i) out << ",";
            out << format_double(vec[i]);
        }
        out << "\n";
    }
}

EmbeddingStore EmbeddingStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open embedding store: " + path);
    std::string header;
    std::getline(in, header);
    std::size_t dim = 0;
    if (std::sscanf(header.c_str(), "CAMSEMB v1 dim=%zu", &dim) != 1)
        throw Error("bad embedding store header: " + header);
    EmbeddingStore store(dim);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error("bad embedding store line: " + line);
        std::string key = line.substr(0, tab);
        Vector v;
        v.reserve(dim);
        const char* p = line.data() + tab + 1;
        const char* end = line.data() + line.size();
        while (p < end) {
            double x;
            auto [np, ec] = std::from_chars(p, end, x);
            if (ec != std::errc{}) throw Error("bad float in embedding store line");
            v.push_back(x);
            p = np;
            if (p < end && *p == ',') ++p;
        }
        store.insert_by_key(key, std::move(v));
    }
    return store;
}

FileEmbeddingProvider::FileEmbeddingProvider(const std::string& store_path)
    : store_(EmbeddingStore::load(store_path)) {}

std::vector<Vector> FileEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (auto& t : texts) out.push_back(store_.lookup(t));
    return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string host_port, std::string path,
                                             int retries)
    : host_port_(std::move(host_port)), path_(std::move(path)), retries_(retries) {}

std::vector<Vector> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    nlohmann::json req{{"texts", texts}};
    std::string body = req.dump();
    std::string err;
    for (int attempt = 0; attempt <= retries_; ++attempt) {
        httplib::Client cli(host_port_);
        auto res = cli.Post(path_, body, "application/json");
        if (!res || res->status != 200) {
            err = res ? "HTTP " + std::to_string(res->status) : "connection failed";
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("vectors")) {
            err = "malformed provider response";
            continue;
        }
        std::vector<Vector> out;
        for (auto& jv : j["vectors"]) out.push_back(jv.get<Vector>());
        if (out.size() != texts.size()) throw Error("provider returned wrong batch size");
        return out;
    }
    throw Error("embedding provider failed after retries: " + err);
}

EmbeddingStore embed_dataset(const Dataset& d, EmbeddingProvider& provider,
                             EmbeddingStore cache, const EmbedOptions& opts) {
    std::vector<std::string> missing;
    for (auto& t : d.distinct_texts())
        if (!cache.contains(t)) missing.push_back(t);

    for (std::size_t off = 0; off < missing.size(); off += opts.batch_size) {
        std::size_t n = std::min(opts.batch_size, missing.size() - off);
        std::vector<std::string> batch(missing.begin() + off, missing.begin() + off + n);
        auto vectors = provider.embed(batch);
        for (std::size_t i = 0; i < n; ++i) {
            Vector v = std::move(vectors[i]);
            if (opts.l2_normalize) {
                double norm = std::sqrt(vector_norm2(v));
                if (norm == 0.0) throw Error("zero-norm embedding vector");
                for (double& x : v) x /= norm;
            }
            cache.insert(batch[i], std::move(v));
        }
    }
    require_coverage(d, cache);
    return cache;
}

void require_coverage(const Dataset& d, const EmbeddingStore& store) {
    for (auto& t : d.distinct_texts())
        if (!store.contains(t)) throw Error("embedding missing for text: \"" + t + "\"");
}

}  // namespace cams
