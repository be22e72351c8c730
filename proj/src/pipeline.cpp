#include "cams/pipeline.hpp"

#include <algorithm>
#include <set>

#include "cams/llm.hpp"

namespace cams {

std::string ResourceSelection::label() const {
    std::string s;
    if (use_cc) s += "CC";
    if (use_ca) s += s.empty() ? "CA" : "+CA";
    if (use_la) s += s.empty() ? "LA" : "+LA";
    return s;
}

std::vector<ResourceSelection> default_selections() {
    return {
        {true, false, false},  // I
        {false, true, false},  // II
        {false, false, true},
        {true, true, false},   // III
        {true, false, true},   // IV
        {false, true, true},
        {true, true, true},
    };
}

namespace {

void check_same_instances(const Dataset& a, const Dataset& b) {
    auto ids = [](const Dataset& d) {
        std::set<std::string> s;
        for (auto& i : d.instances()) s.insert(i.id);
        return s;
    };
    if (ids(a) != ids(b)) throw Error("merge_resources: instance-set mismatch");
}

}  // namespace

Dataset select_resources(const Dataset& combined, const ResourceSelection& sel) {
    if (!sel.use_cc && !sel.use_ca && !sel.use_la)
        throw Error("empty resource selection");
    std::set<WorkerId> la_allowed;
    if (sel.la_subset)
        la_allowed.insert(sel.la_subset->begin(), sel.la_subset->end());

    std::vector<AnswerRecord> answers;
    for (auto& a : combined.answers()) {
        switch (a.worker.role) {
            case WorkerRole::CrowdCreator:
                if (sel.use_cc) answers.push_back(a);
                break;
            case WorkerRole::CrowdAggregator:
                if (sel.use_ca) answers.push_back(a);
                break;
            case WorkerRole::LlmAggregator:
                if (sel.use_la && (!sel.la_subset || la_allowed.count(a.worker)))
                    answers.push_back(a);
                break;
        }
    }
    if (answers.empty())
        throw Error("selection " + sel.label() + " matches no answers in the dataset");
    return Dataset(combined.instances(), std::move(answers));
}

Dataset merge_resources(const Dataset& cc, const Dataset& ca, const Dataset& la,
                        const ResourceSelection& sel) {
    check_same_instances(cc, ca);
    check_same_instances(cc, la);
    std::vector<AnswerRecord> answers;
    auto append = [&](const Dataset& part) {
        answers.insert(answers.end(), part.answers().begin(), part.answers().end());
    };
    append(cc);
    append(ca);
    append(la);
    Dataset combined(cc.instances(), std::move(answers));
    return select_resources(combined, sel);
}

MatrixResults run_matrix(const Dataset& combined, const EmbeddingStore& store,
                         const std::vector<ResourceSelection>& selections,
                         const std::vector<AggregatorKind>& kinds,
                         const RasaParams& params) {
    MatrixResults results;
    for (auto& sel : selections) {
        Dataset part = select_resources(combined, sel);
        require_coverage(part, store);
        for (auto kind : kinds)
            results[{sel.label(), kind}] = run_aggregator(kind, part, store, params);
    }
    return results;
}

std::vector<double> default_temperature_priority() {
    return {0, 0.5, 1, 0.25, 0.75, 0.1, 0.9, 1.1, 1.25};
}

std::vector<WorkerId> la_subset_for_count(const Dataset& combined, std::size_t count,
                                          const std::vector<double>& priority) {
    auto la_workers = combined.workers_of_role(WorkerRole::LlmAggregator);
    if (count == 0 || count > la_workers.size())
        throw Error("la_subset_for_count: count out of range");

    std::vector<WorkerId> ordered;
    for (double t : priority) {
        WorkerId w = la_worker(t);
        auto it = std::find(la_workers.begin(), la_workers.end(), w);
        if (it != la_workers.end()) {
            ordered.push_back(*it);
            la_workers.erase(it);
        }
    }
    // leftovers (non-temperature ids) keep canonical order
    ordered.insert(ordered.end(), la_workers.begin(), la_workers.end());
    ordered.resize(count);
    return ordered;
}

}  // namespace cams
