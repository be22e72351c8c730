#ifndef CAMS_LLM_HPP
#define CAMS_LLM_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cams/core.hpp"

namespace cams {

// Numbered-list aggregation prompt over an instance's creator answers.
// Byte-stable for identical inputs.
std::string render_prompt(const std::vector<AnswerRecord>& instance_answers);

struct ParsedResponse {
    std::string source_text;  // stored but unused by aggregation
    std::string target_text;
};

// Split on the first tab, strip wrapping double quotes and whitespace from
// both fields. Throws on missing tab or empty target.
ParsedResponse parse_response(const std::string& raw);

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string complete(const std::string& model, double temperature,
                                 const std::string& prompt) = 0;
};

// POST {model, temperature, messages:[{role:"user", content}]} to endpoint;
// response text is choices[0].message.content.
class HttpChatProvider : public ChatProvider {
public:
    HttpChatProvider(std::string host_port, std::string path = "/v1/chat/completions");
    std::string complete(const std::string& model, double temperature,
                         const std::string& prompt) override;

private:
    std::string host_port_;
    std::string path_;
};

// Scripted provider for tests. The file is JSON: either {"mode":"echo_first"}
// (answers with the first numbered sentence of the prompt) or
// {"responses": {"<prompt sha256>": "<raw response>"}}.
class MockChatProvider : public ChatProvider {
public:
    explicit MockChatProvider(const std::string& script_path);
    std::string complete(const std::string& model, double temperature,
                         const std::string& prompt) override;

private:
    bool echo_first_ = false;
    std::map<std::string, std::string> responses_;
};

struct LlmEnsembleConfig {
    std::string endpoint;  // host:port; empty means cache/mock only
    std::string model = "gpt-4";
    std::vector<double> temperatures = {0, 0.25, 0.5, 0.75, 1};
    int retries = 1;
    std::string cache_dir;
};

// Canonical worker id for a temperature: "t=<shortest decimal>".
std::string la_worker_local_id(double temperature);
WorkerId la_worker(double temperature);

struct EnsembleFailure {
    std::string instance;
    double temperature;
    std::string reason;
};

struct EnsembleResult {
    std::vector<AnswerRecord> answers;  // one per (instance, temperature)
    std::vector<EnsembleFailure> failures;
    std::size_t requests_sent = 0;  // excludes cache hits
};

// One answer per (instance, temperature), driven by the creator answers of
// `d`. Responses are cached by (model, temperature, prompt hash); warm cache
// reruns issue zero provider calls. Throws if any (instance, temperature)
// cell ends with no successful answer.
EnsembleResult run_ensemble(const Dataset& d, const LlmEnsembleConfig& cfg,
                            ChatProvider* provider);

}  // namespace cams

#endif
