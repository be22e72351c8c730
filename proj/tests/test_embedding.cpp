#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cams/embedding.hpp"

using namespace cams;

namespace {

struct CountingProvider : EmbeddingProvider {
    std::size_t calls = 0;
    std::size_t dim = 3;
    std::vector<Vector> embed(const std::vector<std::string>& texts) override {
        ++calls;
        std::vector<Vector> out;
        for (auto& t : texts) {
            Vector v(dim, 0.0);
            // deterministic, text-dependent, nonzero
            for (std::size_t i = 0; i < t.size(); ++i)
                v[i % dim] += static_cast<double>(static_cast<unsigned char>(t[i]));
            v[0] += 1.0;
            out.push_back(v);
        }
        return out;
    }
};

Dataset three_text_dataset() {
    return dataset_from_json_text(R"({
      "instances": [{"id": "q1", "source": "s", "truth": "gamma"}],
      "answers": [
        {"instance": "q1", "worker": "w1", "role": "CC", "text": "alpha"},
        {"instance": "q1", "worker": "w2", "role": "CC", "text": "beta"}
      ]})");
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("embed_dataset covers all texts including ground truth") {
    CountingProvider p;
    auto store = embed_dataset(three_text_dataset(), p, EmbeddingStore{});
    CHECK(store.size() == 3);
    CHECK_NOTHROW(store.lookup("alpha"));
    CHECK_NOTHROW(store.lookup("gamma"));
    CHECK_NOTHROW(require_coverage(three_text_dataset(), store));
}

TEST_CASE("warm cache issues zero provider calls") {
    CountingProvider p;
    auto store = embed_dataset(three_text_dataset(), p, EmbeddingStore{});
    CHECK(p.calls > 0);
    CountingProvider p2;
    auto store2 = embed_dataset(three_text_dataset(), p2, store);
    CHECK(p2.calls == 0);
    CHECK(store2.size() == store.size());
}

TEST_CASE("dimension mismatch between provider and cache") {
    CountingProvider p;
    auto store = embed_dataset(three_text_dataset(), p, EmbeddingStore{});
    CountingProvider wide;
    wide.dim = 5;
    Dataset extra = dataset_from_json_text(R"({
      "instances": [{"id": "q1", "source": "s"}],
      "answers": [{"instance": "q1", "worker": "w1", "role": "CC", "text": "delta"}]})");
    CHECK_THROWS_AS(embed_dataset(extra, wide, store), Error);
}

TEST_CASE("zero-norm vectors rejected") {
    EmbeddingStore store;
    CHECK_THROWS_AS(store.insert("x", Vector{0, 0, 0}), Error);
}

TEST_CASE("lookup errors name the missing text") {
    EmbeddingStore store;
    store.insert("present", {1, 2});
    try {
        store.lookup("absent text");
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("absent text") != std::string::npos);
    }
}

TEST_CASE("unicode normalization forms share one key") {
    CHECK(content_key("caf\xC3\xA9") == content_key("caf"
                                                    "e\xCC\x81"));
    EmbeddingStore store;
    store.insert("caf\xC3\xA9", {1, 0});
    CHECK(store.lookup("caf"
                       "e\xCC\x81") == Vector{1, 0});
}

TEST_CASE("store file round-trips bit-exactly") {
    EmbeddingStore store;
    store.insert("a", {1.0, -0.333333333333333314829616256247, 1e-17});
    store.insert("b", {0.1, 0.2, 0.3000000000000000444089209850062616169452667236328125});
    auto path = temp_path("cams_store_test.camsemb");
    store.save(path);
    auto loaded = EmbeddingStore::load(path);
    CHECK(loaded.dim() == store.dim());
    CHECK(loaded.entries() == store.entries());
    // a second save is byte-identical
    auto path2 = temp_path("cams_store_test2.camsemb");
    loaded.save(path2);
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    std::string c1((std::istreambuf_iterator<char>(f1)), {});
    std::string c2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(c1 == c2);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("l2 normalization option") {
    CountingProvider p;
    EmbedOptions opts;
    opts.l2_normalize = true;
    auto store = embed_dataset(three_text_dataset(), p, EmbeddingStore{}, opts);
    for (auto& [key, v] : store.entries()) {
        double n2 = 0;
        for (double x : v) n2 += x * x;
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
    }
}
