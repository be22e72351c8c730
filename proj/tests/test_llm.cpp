#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "cams/embedding.hpp"
#include "cams/llm.hpp"

#include "json.hpp"

using namespace cams;
namespace fs = std::filesystem;

namespace {

std::vector<AnswerRecord> numbered_answers(int n) {
    std::vector<AnswerRecord> answers;
    for (int i = 0; i < n; ++i)
        answers.push_back({"q1", {WorkerRole::CrowdCreator, "w" + std::to_string(i + 1)},
                           "sentence number " + std::to_string(i + 1)});
    return answers;
}

Dataset creators_dataset(int n_instances, int n_workers) {
    std::vector<Instance> instances;
    std::vector<AnswerRecord> answers;
    for (int i = 0; i < n_instances; ++i) {
        std::string id = "q" + std::to_string(i + 1);
        instances.push_back({id, "src " + id, std::nullopt});
        for (int w = 0; w < n_workers; ++w)
            answers.push_back({id, {WorkerRole::CrowdCreator, "w" + std::to_string(w + 1)},
                               "answer " + std::to_string(w + 1) + " for " + id});
    }
    return Dataset(std::move(instances), std::move(answers));
}

std::string write_mock_script() {
    auto path = (fs::temp_directory_path() / "cams_mock_echo.json").string();
    std::ofstream out(path);
    out << R"({"mode": "echo_first"})";
    return path;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("render_prompt numbers all answers and is byte-stable") {
    auto answers = numbered_answers(10);
    std::string prompt = render_prompt(answers);
    for (int i = 1; i <= 10; ++i)
        CHECK(prompt.find("\n" + std::to_string(i) + ". sentence number " +
                          std::to_string(i)) != std::string::npos);
    CHECK(prompt.find("Only output the text") != std::string::npos);
    CHECK(prompt == render_prompt(answers));
}

TEST_CASE("render_prompt single answer") {
    std::string prompt = render_prompt(numbered_answers(1));
    CHECK(prompt.find("1. sentence number 1") != std::string::npos);
    CHECK(prompt.find("2. ") == std::string::npos);
    CHECK_THROWS_AS(render_prompt({}), Error);
}

TEST_CASE("parse_response splits on tab and strips quotes") {
    auto r = parse_response(
        "\"\xE7\xA7\x81\xE3\x81\xAB\xE3\x81\xAF\xE8\xBB\x8A\xE6\xA4\x85\xE5\xAD\x90"
        "\xE3\x81\xAA\xE3\x82\x93\xE3\x81\x8B\xE5\x85\xA8\xE3\x81\x8F\xE5\xBF\x85"
        "\xE8\xA6\x81\xE3\x81\x8C\xE7\x84\xA1\xE3\x81\x84\"\t\"I don't need a wheelchair at all.\"");
    CHECK(r.target_text == "I don't need a wheelchair at all.");
    CHECK(!r.source_text.empty());
}

TEST_CASE("parse_response error and leniency cases") {
    CHECK_THROWS_AS(parse_response("no tab here"), Error);
    CHECK_THROWS_AS(parse_response("source\t  \"\"  "), Error);
    auto r = parse_response("plain source\tplain target");
    CHECK(r.source_text == "plain source");
    CHECK(r.target_text == "plain target");
}

TEST_CASE("la worker ids are a pure function of temperature") {
    CHECK(la_worker_local_id(0.0) == "t=0");
    CHECK(la_worker_local_id(0.25) == "t=0.25");
    CHECK(la_worker(0.5).role == WorkerRole::LlmAggregator);
    CHECK(la_worker(0.5) == la_worker(0.5));
}

TEST_CASE("run_ensemble with echo mock yields one answer per instance x temperature") {
    Dataset d = creators_dataset(4, 3);
    MockChatProvider mock(write_mock_script());
    LlmEnsembleConfig cfg;
    cfg.temperatures = {0, 0.5, 1};
    auto result = run_ensemble(d, cfg, &mock);
    CHECK(result.answers.size() == 4 * 3);
    CHECK(result.requests_sent == 4 * 3);
    // echo mock returns each instance's first creator answer
    for (auto& a : result.answers) {
        CHECK(a.worker.role == WorkerRole::LlmAggregator);
        CHECK(a.text == "answer 1 for " + a.instance);
    }
}

TEST_CASE("warm cache rerun needs no provider and is byte-identical") {
    TempDir cache("cams_llm_cache_test");
    Dataset d = creators_dataset(3, 2);
    LlmEnsembleConfig cfg;
    cfg.temperatures = {0, 1};
    cfg.cache_dir = cache.path.string();

    MockChatProvider mock(write_mock_script());
    auto first = run_ensemble(d, cfg, &mock);
    CHECK(first.requests_sent == 6);

    // no provider at all: cache must cover everything
    auto second = run_ensemble(d, cfg, nullptr);
    CHECK(second.requests_sent == 0);
    REQUIRE(first.answers.size() == second.answers.size());
    for (std::size_t i = 0; i < first.answers.size(); ++i) {
        CHECK(first.answers[i].instance == second.answers[i].instance);
        CHECK(first.answers[i].worker == second.answers[i].worker);
        CHECK(first.answers[i].text == second.answers[i].text);
    }
}

TEST_CASE("cold cache without provider fails") {
    TempDir cache("cams_llm_cache_cold");
    Dataset d = creators_dataset(2, 2);
    LlmEnsembleConfig cfg;
    cfg.cache_dir = cache.path.string();
    CHECK_THROWS_AS(run_ensemble(d, cfg, nullptr), Error);
}

TEST_CASE("scripted mock responses keyed by prompt hash") {
    Dataset d = creators_dataset(1, 2);
    std::string prompt = render_prompt(d.answers_of_instance("q1"));
    auto path = (fs::temp_directory_path() / "cams_mock_scripted.json").string();
    {
        nlohmann::json j;
        j["responses"][content_key(prompt)] = "\"src\"\t\"scripted target\"";
        std::ofstream out(path);
        out << j.dump();
    }
    MockChatProvider mock(path);
    LlmEnsembleConfig cfg;
    cfg.temperatures = {0};
    auto result = run_ensemble(d, cfg, &mock);
    REQUIRE(result.answers.size() == 1);
    CHECK(result.answers[0].text == "scripted target");
}
