#include "doctest.h"

#include <cmath>

#include "cams/numerics.hpp"
#include "cams/synthgen.hpp"

using namespace cams;

namespace {

SynthConfig base_config() {
    SynthConfig cfg;
    cfg.dim = 8;
    cfg.n_instances = 12;
    cfg.seed = 77;
    for (int i = 0; i < 5; ++i)
        cfg.workers.push_back({WorkerRole::CrowdCreator, 0.1 + 0.2 * i, 1.0});
    return cfg;
}

}  // namespace

TEST_CASE("same seed reproduces bit-identical output") {
    auto a = generate(base_config());
    auto b = generate(base_config());
    CHECK(a.store.entries() == b.store.entries());
    CHECK(a.truth == b.truth);
    CHECK(a.best == b.best);
    REQUIRE(a.dataset.answers().size() == b.dataset.answers().size());
    for (std::size_t i = 0; i < a.dataset.answers().size(); ++i)
        CHECK(a.dataset.answers()[i].text == b.dataset.answers()[i].text);
}

TEST_CASE("different seeds differ") {
    auto a = generate(base_config());
    auto cfg = base_config();
    cfg.seed = 78;
    auto b = generate(cfg);
    CHECK(a.truth != b.truth);
}

TEST_CASE("all generated vectors are unit norm and dimension-consistent") {
    auto out = generate(base_config());
    CHECK(out.store.dim() == 8);
    for (auto& [key, v] : out.store.entries()) {
        REQUIRE(v.size() == 8);
        double n2 = 0;
        for (double x : v) n2 += x * x;
        CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-9);
    }
    for (auto& [id, z] : out.truth) {
        double n2 = 0;
        for (double x : z) n2 += x * x;
        CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-9);
    }
}

TEST_CASE("noiseless workers answer with the true vector exactly") {
    SynthConfig cfg = base_config();
    for (auto& w : cfg.workers) w.noise_scale = 0.0;
    auto out = generate(cfg);
    for (auto& a : out.dataset.answers()) {
        const Vector& v = out.store.lookup(a.text);
        CHECK(cosine_sim(v, out.truth.at(a.instance)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // all answers to one instance share one text
    for (auto& inst : out.dataset.instances()) {
        auto answers = out.dataset.answers_of_instance(inst.id);
        for (auto& a : answers) CHECK(a.text == answers.front().text);
    }
}

TEST_CASE("coverage bookkeeping is exact") {
    SynthConfig cfg = base_config();
    cfg.workers[1].coverage = 0.5;   // ceil(0.5 * 12) = 6
    cfg.workers[2].coverage = 0.26;  // ceil(0.26 * 12) = 4
    auto out = generate(cfg);
    CHECK(out.dataset.answers_of_worker({WorkerRole::CrowdCreator, "w2"}).size() == 6);
    CHECK(out.dataset.answers_of_worker({WorkerRole::CrowdCreator, "w3"}).size() == 4);
    CHECK(out.dataset.answers_of_worker({WorkerRole::CrowdCreator, "w1"}).size() == 12);
}

TEST_CASE("best map names the cosine-nearest answer") {
    auto out = generate(base_config());
    for (auto& inst : out.dataset.instances()) {
        auto answers = out.dataset.answers_of_instance(inst.id);
        double best_score = -2;
        for (auto& a : answers)
            best_score = std::max(best_score,
                                  cosine_sim(out.store.lookup(a.text), out.truth.at(inst.id)));
        // the recorded best worker achieves that score
        for (auto& a : answers) {
            if (a.worker == out.best.at(inst.id))
                CHECK(cosine_sim(out.store.lookup(a.text), out.truth.at(inst.id)) ==
                      doctest::Approx(best_score).epsilon(1e-12));
        }
    }
}

TEST_CASE("invalid configs rejected") {
    SynthConfig cfg = base_config();
    cfg.dim = 1;
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg = base_config();
    cfg.workers.clear();
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg = base_config();
    cfg.workers[0].coverage = 0.0;
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg = base_config();
    cfg.workers[0].noise_scale = -1.0;
    CHECK_THROWS_AS(generate(cfg), Error);
}
