#include "cams/llm.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cams/embedding.hpp"

#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace cams {

std::string render_prompt(const std::vector<AnswerRecord>& instance_answers) {
    if (instance_answers.empty()) throw Error("render_prompt: no answers");
    const std::size_t n = instance_answers.size();
    std::ostringstream out;
    out << "The following " << n << " short English sentence" << (n == 1 ? "" : "s")
        << " were written by " << n << " non-native English speaker" << (n == 1 ? "" : "s")
        << " who translated the same Japanese short text from Japanese to English. "
           "Please read each English sentence and infer the meaning of the original "
           "Japanese text, and based on your understanding, provide the appropriate "
           "Japanese original text and its English translation. Only output the text "
           "without showing \"Japanese original text\" and \"English translation\".\n\n";
    for (std::size_t i = 0; i < n; ++i)
        out << (i + 1) << ". " << instance_answers[i].text << "\n";
    out << "\nOutput format separated by \" and <tab>: \"Japanese original text. \" "
           "<tab> \"its English translation. \"\n";
    return out.str();
}

namespace {

std::string strip_field(std::string s) {
    auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    s = s.substr(b, e - b);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    while (!s.empty() && is_space(s.back())) s.pop_back();
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    return s;
}

std::string format_temp(double t) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), t);
    return std::string(buf, p);
}

}  // namespace

ParsedResponse parse_response(const std::string& raw) {
    auto tab = raw.find('\t');
    if (tab == std::string::npos) throw Error("parse_response: no tab separator");
    ParsedResponse r;
    r.source_text = strip_field(raw.substr(0, tab));
    r.target_text = strip_field(raw.substr(tab + 1));
    if (r.target_text.empty()) throw Error("parse_response: empty target field");
    return r;
}

HttpChatProvider::HttpChatProvider(std::string host_port, std::string path)
    : host_port_(std::move(host_port)), path_(std::move(path)) {}

std::string HttpChatProvider::complete(const std::string& model, double temperature,
                                       const std::string& prompt) {
    nlohmann::json req{
        {"model", model},
        {"temperature", temperature},
        {"messages", {{{"role", "user"}, {"content", prompt}}}},
    };
    httplib::Client cli(host_port_);
    auto res = cli.Post(path_, req.dump(), "application/json");
    if (!res || res->status != 200)
        throw Error("chat provider failed: " +
                    (res ? "HTTP " + std::to_string(res->status) : "connection failed"));
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw Error("chat provider returned invalid JSON");
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error("chat provider response missing choices[0].message.content");
    }
}

MockChatProvider::MockChatProvider(const std::string& script_path) {
    std::ifstream in(script_path);
    if (!in) throw Error("cannot open mock script: " + script_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("invalid mock script JSON: " + script_path);
    if (j.value("mode", "") == "echo_first") {
        echo_first_ = true;
    } else if (j.contains("responses")) {
        for (auto& [k, v] : j["responses"].items())
            responses_[k] = v.get<std::string>();
    } else {
        throw Error("mock script needs \"mode\":\"echo_first\" or \"responses\"");
    }
}

std::string MockChatProvider::complete(const std::string&, double,
                                       const std::string& prompt) {
    if (echo_first_) {
        // first numbered line of the prompt
        auto pos = prompt.find("\n1. ");
        if (pos == std::string::npos) throw Error("mock: prompt has no numbered answers");
        auto start = pos + 4;
        auto end = prompt.find('\n', start);
        std::string first = prompt.substr(start, end - start);
        return "\"(mock source)\"\t\"" + first + "\"";
    }
    auto it = responses_.find(content_key(prompt));
    if (it == responses_.end()) throw Error("mock: no scripted response for prompt");
    return it->second;
}

std::string la_worker_local_id(double temperature) {
    return "t=" + format_temp(temperature);
}

WorkerId la_worker(double temperature) {
    return {WorkerRole::LlmAggregator, la_worker_local_id(temperature)};
}

namespace {

std::string cache_path(const std::string& dir, const std::string& model, double temp,
                       const std::string& prompt_key) {
    std::string id = content_key(model + "|" + format_temp(temp) + "|" + prompt_key);
    return (fs::path(dir) / (id + ".json")).string();
}

std::optional<std::string> cache_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("response")) return std::nullopt;
    return j["response"].get<std::string>();
}

void cache_write(const std::string& path, const nlohmann::json& request,
                 const std::string& response) {
    nlohmann::json j{
        {"request", request},
        {"response", response},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write cache file: " + tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

}  // namespace

EnsembleResult run_ensemble(const Dataset& d, const LlmEnsembleConfig& cfg,
                            ChatProvider* provider) {
    if (cfg.temperatures.empty()) throw Error("run_ensemble: empty temperature list");
    const bool use_cache = !cfg.cache_dir.empty();
    if (use_cache) fs::create_directories(cfg.cache_dir);

    std::unique_ptr<HttpChatProvider> http;
    if (!provider && !cfg.endpoint.empty()) {
        http = std::make_unique<HttpChatProvider>(cfg.endpoint);
        provider = http.get();
    }

    EnsembleResult result;
    for (auto& inst : d.instances()) {
        std::vector<AnswerRecord> creator_answers;
        for (auto& a : d.answers_of_instance(inst.id))
            if (a.worker.role == WorkerRole::CrowdCreator) creator_answers.push_back(a);
        if (creator_answers.empty())
            throw Error("run_ensemble: instance has no creator answers: " + inst.id);
        const std::string prompt = render_prompt(creator_answers);
        const std::string prompt_key = content_key(prompt);

        for (double temp : cfg.temperatures) {
            std::string path = use_cache
                                   ? cache_path(cfg.cache_dir, cfg.model, temp, prompt_key)
                                   : std::string{};
            std::optional<std::string> raw;
            if (use_cache) raw = cache_read(path);

            std::string failure;
            // one parse-failure retry, then hard per-instance error
            for (int attempt = 0; attempt <= cfg.retries && !raw; ++attempt) {
                if (!provider) {
                    failure = "no provider and cache miss";
                    break;
                }
                try {
                    std::string response = provider->complete(cfg.model, temp, prompt);
                    ++result.requests_sent;
                    parse_response(response);  // validate before caching
                    raw = response;
                } catch (const Error& e) {
                    failure = e.what();
                }
            }
            if (!raw) {
                result.failures.push_back({inst.id, temp, failure});
                continue;
            }
            if (use_cache && !fs::exists(path)) {
                nlohmann::json req{{"model", cfg.model},
                                   {"temperature", temp},
                                   {"prompt", prompt}};
                cache_write(path, req, *raw);
            }
            ParsedResponse parsed = parse_response(*raw);
            result.answers.push_back(
                {inst.id, la_worker(temp), normalize_text(parsed.target_text)});
        }
    }
    if (!result.failures.empty()) {
        std::ostringstream msg;
        msg << "run_ensemble: " << result.failures.size()
            << " unanswered (instance, temperature) cells; first: instance "
            << result.failures.front().instance << " t=" << result.failures.front().temperature
            << " (" << result.failures.front().reason << ")";
        throw Error(msg.str());
    }
    return result;
}

}  // namespace cams
