#include "cams/core.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "json.hpp"

namespace cams {

std::string role_code(WorkerRole r) {
    switch (r) {
        case WorkerRole::CrowdCreator: return "CC";
        case WorkerRole::CrowdAggregator: return "CA";
        case WorkerRole::LlmAggregator: return "LA";
    }
    throw Error("invalid WorkerRole");
}

WorkerRole parse_role(const std::string& code) {
    if (code == "CC") return WorkerRole::CrowdCreator;
    if (code == "CA") return WorkerRole::CrowdAggregator;
    if (code == "LA") return WorkerRole::LlmAggregator;
    throw Error("unknown worker role code: " + code);
}

std::string normalize_text(const std::string& s) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(s);
    icu::UnicodeString normalized = nfc->normalize(u, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    std::string out;
    normalized.toUTF8String(out);
    auto is_space = [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    std::size_t b = 0, e = out.size();
    while (b < e && is_space(out[b])) ++b;
    while (e > b && is_space(out[e - 1])) --e;
    return out.substr(b, e - b);
}

Dataset::Dataset(std::vector<Instance> instances, std::vector<AnswerRecord> answers)
    : instances_(std::move(instances)), answers_(std::move(answers)) {
    build_index();
}

void Dataset::build_index() {
    instance_index_.clear();
    answers_by_instance_.clear();
    answers_by_worker_.clear();

    for (std::size_t i = 0; i < instances_.size(); ++i) {
        auto& inst = instances_[i];
        if (inst.id.empty()) throw Error("empty instance id");
        if (!instance_index_.emplace(inst.id, i).second)
            throw Error("duplicate instance id: " + inst.id);
    }

    // Canonical answer order: instance load order is irrelevant; within an
    // instance answers sort by (role, local_id).
    std::stable_sort(answers_.begin(), answers_.end(),
                     [](const AnswerRecord& a, const AnswerRecord& b) {
                         if (a.instance != b.instance) return a.instance < b.instance;
                         return a.worker < b.worker;
                     });

    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < answers_.size(); ++i) {
        auto& a = answers_[i];
        if (!instance_index_.count(a.instance))
            throw Error("answer references unknown instance id: " + a.instance);
        if (a.text.empty())
            throw Error("empty answer text for instance " + a.instance + " worker " +
                        a.worker.str());
        if (!seen.emplace(a.instance, a.worker.str()).second)
            throw Error("duplicate answer for (" + a.instance + ", " + a.worker.str() + ")");
        answers_by_instance_[a.instance].push_back(i);
        answers_by_worker_[a.worker].push_back(i);
    }
    for (auto& inst : instances_) {
        if (!answers_by_instance_.count(inst.id))
            throw Error("instance has no answers: " + inst.id);
    }
}

bool Dataset::has_instance(const std::string& id) const {
    return instance_index_.count(id) != 0;
}

const Instance& Dataset::instance(const std::string& id) const {
    auto it = instance_index_.find(id);
    if (it == instance_index_.end()) throw Error("unknown instance id: " + id);
    return instances_[it->second];
}

std::vector<AnswerRecord> Dataset::answers_of_instance(const std::string& id) const {
    auto it = answers_by_instance_.find(id);
    if (it == answers_by_instance_.end()) throw Error("unknown instance id: " + id);
    std::vector<AnswerRecord> out;
    out.reserve(it->second.size());
    for (auto idx : it->second) out.push_back(answers_[idx]);
    return out;
}

std::vector<AnswerRecord> Dataset::answers_of_worker(const WorkerId& w) const {
    auto it = answers_by_worker_.find(w);
    if (it == answers_by_worker_.end()) return {};
    std::vector<AnswerRecord> out;
    out.reserve(it->second.size());
    for (auto idx : it->second) out.push_back(answers_[idx]);
    return out;
}

std::vector<WorkerId> Dataset::workers() const {
    std::vector<WorkerId> out;
    out.reserve(answers_by_worker_.size());
    for (auto& [w, _] : answers_by_worker_) out.push_back(w);
    return out;
}

std::vector<WorkerId> Dataset::workers_of_role(WorkerRole r) const {
    std::vector<WorkerId> out;
    for (auto& [w, _] : answers_by_worker_)
        if (w.role == r) out.push_back(w);
    return out;
}

std::size_t Dataset::worker_count(WorkerRole r) const {
    return workers_of_role(r).size();
}

std::size_t Dataset::answer_count(WorkerRole r) const {
    std::size_t n = 0;
    for (auto& a : answers_)
        if (a.worker.role == r) ++n;
    return n;
}

std::vector<std::string> Dataset::distinct_texts() const {
    std::set<std::string> texts;
    for (auto& a : answers_) texts.insert(a.text);
    for (auto& inst : instances_)
        if (inst.truth) texts.insert(*inst.truth);
    return {texts.begin(), texts.end()};
}

Dataset dataset_from_json_text(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("dataset parse error: ") + e.what());
    }
    std::vector<Instance> instances;
    std::vector<AnswerRecord> answers;
    try {
        for (auto& ji : j.at("instances")) {
            Instance inst;
            inst.id = ji.at("id").get<std::string>();
            inst.source = normalize_text(ji.value("source", std::string{}));
            if (ji.contains("truth") && !ji["truth"].is_null())
                inst.truth = normalize_text(ji["truth"].get<std::string>());
            instances.push_back(std::move(inst));
        }
        for (auto& ja : j.at("answers")) {
            AnswerRecord a;
            a.instance = ja.at("instance").get<std::string>();
            a.worker = {parse_role(ja.at("role").get<std::string>()),
                        ja.at("worker").get<std::string>()};
            a.text = normalize_text(ja.at("text").get<std::string>());
            answers.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("dataset schema error: ") + e.what());
    }
    return Dataset(std::move(instances), std::move(answers));
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return dataset_from_json_text(ss.str());
}

void save_dataset(const Dataset& d, const std::string& path) {
    nlohmann::json j;
    j["instances"] = nlohmann::json::array();
    for (auto& inst : d.instances()) {
        nlohmann::json ji{{"id", inst.id}, {"source", inst.source}};
        if (inst.truth) ji["truth"] = *inst.truth;
        j["instances"].push_back(ji);
    }
    j["answers"] = nlohmann::json::array();
    for (auto& a : d.answers()) {
        j["answers"].push_back({{"instance", a.instance},
                                {"worker", a.worker.local_id},
                                {"role", role_code(a.worker.role)},
                                {"text", a.text}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cams
