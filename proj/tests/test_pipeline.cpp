#include "doctest.h"

#include <algorithm>
#include <random>

#include "cams/llm.hpp"
#include "cams/pipeline.hpp"
#include "cams/report.hpp"
#include "cams/synthgen.hpp"

using namespace cams;

namespace {

// J1-shaped bookkeeping: 250 instances, 70 C.C. / 2490 answers,
// 106 C.A. / 1250 answers, 5 L.A. / 1250 answers.
Dataset j1_shaped() {
    const int n_instances = 250;
    std::vector<Instance> instances;
    std::vector<std::string> ids;
    for (int i = 0; i < n_instances; ++i) {
        std::string id = "q" + std::to_string(i + 1);
        ids.push_back(id);
        instances.push_back({id, "src", std::nullopt});
    }
    std::vector<AnswerRecord> answers;
    // 2490 creator answers spread round-robin over 70 workers
    for (int k = 0; k < 2490; ++k) {
        WorkerId w{WorkerRole::CrowdCreator, "c" + std::to_string(k % 70 + 1)};
        // distinct (instance, worker) pairs: worker k%70 answers instance
        // (k/70 offset by worker index)
        std::string id = ids[(k / 70 + (k % 70) * 3) % n_instances];
        answers.push_back({id, w, "cc answer " + std::to_string(k)});
    }
    // 5 aggregator answers per instance over 106 workers
    for (int k = 0; k < 1250; ++k) {
        WorkerId w{WorkerRole::CrowdAggregator, "a" + std::to_string(k % 106 + 1)};
        std::string id = ids[k / 5];
        answers.push_back({id, w, "ca answer " + std::to_string(k)});
    }
    // 5 LLM aggregators, all instances each
    for (int t = 0; t < 5; ++t)
        for (int i = 0; i < n_instances; ++i)
            answers.push_back({ids[i], {WorkerRole::LlmAggregator, "t=" + std::to_string(t)},
                               "la answer " + std::to_string(t) + " " + std::to_string(i)});
    return Dataset(std::move(instances), std::move(answers));
}

std::pair<Dataset, EmbeddingStore> three_role_synth(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.dim = 8;
    cfg.n_instances = 15;
    cfg.seed = seed;
    for (int i = 0; i < 4; ++i)
        cfg.workers.push_back({WorkerRole::CrowdCreator, 0.2 + 0.2 * i, 1.0});
    for (int i = 0; i < 3; ++i)
        cfg.workers.push_back({WorkerRole::CrowdAggregator, 0.15 + 0.2 * i, 1.0});
    for (int i = 0; i < 2; ++i)
        cfg.workers.push_back({WorkerRole::LlmAggregator, 0.1 + 0.1 * i, 1.0});
    auto out = generate(cfg);
    return {out.dataset, out.store};
}

}  // namespace

TEST_CASE("default selections are the seven combination rows") {
    auto sels = default_selections();
    REQUIRE(sels.size() == 7);
    std::vector<std::string> labels;
    for (auto& s : sels) labels.push_back(s.label());
    CHECK(labels == std::vector<std::string>{"CC", "CA", "LA", "CC+CA", "CC+LA", "CA+LA",
                                             "CC+CA+LA"});
}

TEST_CASE("J1-shaped merge counts: 70 + 106 + 5 workers") {
    Dataset d = j1_shaped();
    CHECK(d.instances().size() == 250);
    CHECK(d.worker_count(WorkerRole::CrowdCreator) == 70);
    CHECK(d.worker_count(WorkerRole::CrowdAggregator) == 106);
    CHECK(d.worker_count(WorkerRole::LlmAggregator) == 5);
    CHECK(d.answer_count(WorkerRole::CrowdCreator) == 2490);
    CHECK(d.answer_count(WorkerRole::CrowdAggregator) == 1250);
    CHECK(d.answer_count(WorkerRole::LlmAggregator) == 1250);

    Dataset merged = select_resources(d, {true, true, true});
    CHECK(merged.workers().size() == 70 + 106 + 5);
    CHECK(merged.answers().size() == 2490 + 1250 + 1250);
}

TEST_CASE("CC-only selection is the creator part unchanged") {
    auto [d, store] = three_role_synth(17);
    Dataset cc = select_resources(d, {true, false, false});
    CHECK(cc.answers().size() == d.answer_count(WorkerRole::CrowdCreator));
    for (auto& a : cc.answers()) CHECK(a.worker.role == WorkerRole::CrowdCreator);
}

TEST_CASE("same local id under CC and CA counts as two workers after merge") {
    std::vector<Instance> instances{{"q1", "s", std::nullopt}};
    std::vector<AnswerRecord> answers{
        {"q1", {WorkerRole::CrowdCreator, "alice"}, "one"},
        {"q1", {WorkerRole::CrowdAggregator, "alice"}, "two"},
    };
    Dataset d(std::move(instances), std::move(answers));
    Dataset merged = select_resources(d, {true, true, false});
    CHECK(merged.workers().size() == 2);
}

TEST_CASE("empty selection rejected") {
    auto [d, store] = three_role_synth(1);
    CHECK_THROWS_AS(select_resources(d, {false, false, false}), Error);
}

TEST_CASE("merge_resources demands a shared instance set") {
    auto [d, store] = three_role_synth(2);
    Dataset cc = select_resources(d, {true, false, false});
    Dataset ca = select_resources(d, {false, true, false});
    Dataset la = select_resources(d, {false, false, true});
    Dataset merged = merge_resources(cc, ca, la, {true, true, true});
    CHECK(merged.answers().size() == d.answers().size());

    std::vector<Instance> other{{"different", "s", std::nullopt}};
    std::vector<AnswerRecord> oa{{"different", {WorkerRole::CrowdAggregator, "x"}, "t"}};
    Dataset mismatched(std::move(other), std::move(oa));
    CHECK_THROWS_AS(merge_resources(cc, mismatched, la, {true, true, true}), Error);
}

TEST_CASE("run_matrix default config yields 7 x 3 cells") {
    auto [d, store] = three_role_synth(23);
    auto results = run_matrix(d, store, default_selections(),
                              {AggregatorKind::SMV, AggregatorKind::SMS, AggregatorKind::RASA});
    CHECK(results.size() == 21);
    for (auto& [key, est] : results) CHECK(est.size() == d.instances().size());
}

TEST_CASE("run_matrix single cell") {
    auto [d, store] = three_role_synth(29);
    auto results = run_matrix(d, store, {{true, false, false}}, {AggregatorKind::SMV});
    CHECK(results.size() == 1);
    CHECK(results.count({"CC", AggregatorKind::SMV}) == 1);
}

TEST_CASE("merging is order-insensitive") {
    auto [d, store] = three_role_synth(31);
    std::vector<AnswerRecord> shuffled = d.answers();
    std::mt19937_64 rng(4);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Dataset permuted(d.instances(), std::move(shuffled));

    auto a = run_matrix(d, store, default_selections(), {AggregatorKind::SMS});
    auto b = run_matrix(permuted, store, default_selections(), {AggregatorKind::SMS});
    CHECK(a == b);
}

TEST_CASE("la_subset_for_count follows the temperature nesting") {
    std::vector<Instance> instances{{"q1", "s", std::nullopt}};
    std::vector<AnswerRecord> answers;
    for (double t : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25})
        answers.push_back({"q1", la_worker(t), "ans " + la_worker_local_id(t)});
    answers.push_back({"q1", {WorkerRole::CrowdCreator, "w"}, "creator"});
    Dataset d(std::move(instances), std::move(answers));

    auto one = la_subset_for_count(d, 1);
    CHECK(one == std::vector<WorkerId>{la_worker(0)});
    auto three = la_subset_for_count(d, 3);
    CHECK(three == std::vector<WorkerId>{la_worker(0), la_worker(0.5), la_worker(1)});
    auto five = la_subset_for_count(d, 5);
    CHECK(five == std::vector<WorkerId>{la_worker(0), la_worker(0.5), la_worker(1),
                                        la_worker(0.25), la_worker(0.75)});
    CHECK(la_subset_for_count(d, 9).size() == 9);
    CHECK_THROWS_AS(la_subset_for_count(d, 10), Error);
    CHECK_THROWS_AS(la_subset_for_count(d, 0), Error);
}

TEST_CASE("la subset restricts the LA resource in a selection") {
    auto [d, store] = three_role_synth(37);
    auto la_workers = d.workers_of_role(WorkerRole::LlmAggregator);
    REQUIRE(la_workers.size() == 2);
    ResourceSelection sel{false, false, true,
                          std::vector<WorkerId>{la_workers.front()}};
    Dataset part = select_resources(d, sel);
    CHECK(part.workers().size() == 1);
    CHECK(part.workers().front() == la_workers.front());
}
