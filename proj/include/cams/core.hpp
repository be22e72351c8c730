#ifndef CAMS_CORE_HPP
#define CAMS_CORE_HPP

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cams {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WorkerRole { CrowdCreator = 0, CrowdAggregator = 1, LlmAggregator = 2 };

// "CC" / "CA" / "LA"
std::string role_code(WorkerRole r);
WorkerRole parse_role(const std::string& code);

// A worker identity is the (role, local_id) pair. The same person acting as
// creator and aggregator is two distinct workers.
struct WorkerId {
    WorkerRole role;
    std::string local_id;

    auto operator<=>(const WorkerId&) const = default;
    std::string str() const { return role_code(role) + ":" + local_id; }
};

struct AnswerRecord {
    std::string instance;
    WorkerId worker;
    std::string text;
};

struct Instance {
    std::string id;
    std::string source;
    std::optional<std::string> truth;
};

// NFC-normalize and trim outer whitespace. Inner casing and punctuation are
// preserved; metrics tokenize later.
std::string normalize_text(const std::string& s);

class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Instance> instances, std::vector<AnswerRecord> answers);

    const std::vector<Instance>& instances() const { return instances_; }
    const std::vector<AnswerRecord>& answers() const { return answers_; }

    bool has_instance(const std::string& id) const;
    const Instance& instance(const std::string& id) const;

    // Answers of one instance in canonical order (role, then local_id).
    // This order is the tie-breaking order used everywhere downstream.
    std::vector<AnswerRecord> answers_of_instance(const std::string& id) const;

    // Answers of one worker ordered by instance id. Unknown workers yield an
    // empty list.
    std::vector<AnswerRecord> answers_of_worker(const WorkerId& w) const;

    std::vector<WorkerId> workers() const;
    std::vector<WorkerId> workers_of_role(WorkerRole r) const;

    std::size_t worker_count(WorkerRole r) const;
    std::size_t answer_count(WorkerRole r) const;

    // All distinct texts that need embeddings: answers plus ground truths.
    std::vector<std::string> distinct_texts() const;

private:
    void build_index();

    std::vector<Instance> instances_;
    std::vector<AnswerRecord> answers_;
    std::map<std::string, std::size_t> instance_index_;
    std::map<std::string, std::vector<std::size_t>> answers_by_instance_;
    std::map<WorkerId, std::vector<std::size_t>> answers_by_worker_;
};

Dataset load_dataset(const std::string& path);
Dataset dataset_from_json_text(const std::string& json_text);
void save_dataset(const Dataset& d, const std::string& path);

struct Estimate {
    std::string text;
    std::string provenance;  // worker id string or synthetic label
    bool operator==(const Estimate&) const = default;
};

// Exactly one entry per instance of the input set, keyed by instance id.
using EstimatedAnswers = std::map<std::string, Estimate>;

}  // namespace cams

#endif
