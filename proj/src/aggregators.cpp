#include "cams/aggregators.hpp"

#include <algorithm>
#include <cmath>

#include "cams/numerics.hpp"

namespace cams {

std::string aggregator_name(AggregatorKind k) {
    switch (k) {
        case AggregatorKind::SMV: return "SMV";
        case AggregatorKind::SMS: return "SMS";
        case AggregatorKind::RASA: return "RASA";
    }
    throw Error("invalid AggregatorKind");
}

AggregatorKind parse_aggregator(const std::string& name) {
    if (name == "SMV") return AggregatorKind::SMV;
    if (name == "SMS") return AggregatorKind::SMS;
    if (name == "RASA") return AggregatorKind::RASA;
    throw Error("unknown aggregator: " + name);
}

namespace {

// Strict > keeps the first (canonical-order) answer on ties.
const AnswerRecord& argmax_by_score(const std::vector<AnswerRecord>& answers,
                                    const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < answers.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return answers[best];
}

}  // namespace

EstimatedAnswers smv(const Dataset& d, const EmbeddingStore& store) {
    EstimatedAnswers out;
    for (auto& inst : d.instances()) {
        auto answers = d.answers_of_instance(inst.id);
        std::vector<Vector> vecs;
        vecs.reserve(answers.size());
        for (auto& a : answers) vecs.push_back(store.lookup(a.text));
        Vector centroid = mean_vector(vecs);
        std::vector<double> scores(answers.size());
        for (std::size_t i = 0; i < answers.size(); ++i)
            scores[i] = cosine_sim(vecs[i], centroid);
        auto& pick = argmax_by_score(answers, scores);
        out[inst.id] = {pick.text, pick.worker.str()};
    }
    return out;
}

EstimatedAnswers sms(const Dataset& d, const EmbeddingStore& store) {
    EstimatedAnswers out;
    for (auto& inst : d.instances()) {
        auto answers = d.answers_of_instance(inst.id);
        std::vector<Vector> vecs;
        vecs.reserve(answers.size());
        for (auto& a : answers) vecs.push_back(store.lookup(a.text));
        std::vector<double> scores(answers.size(), 0.0);
        for (std::size_t i = 0; i < answers.size(); ++i)
            for (std::size_t j = 0; j < answers.size(); ++j)
                if (i != j) scores[i] += cosine_sim(vecs[i], vecs[j]);
        auto& pick = argmax_by_score(answers, scores);
        out[inst.id] = {pick.text, pick.worker.str()};
    }
    return out;
}

std::pair<EstimatedAnswers, ReliabilityState> rasa(const Dataset& d,
                                                   const EmbeddingStore& store,
                                                   const RasaParams& params) {
    constexpr double kDistanceFloor = 1e-9;  // survives zero-distance workers

    // SMV initialization: centroids start as per-instance means.
    ReliabilityState state;
    for (auto& inst : d.instances()) {
        std::vector<Vector> vecs;
        for (auto& a : d.answers_of_instance(inst.id)) vecs.push_back(store.lookup(a.text));
        state.centroids[inst.id] = mean_vector(vecs);
    }

    auto workers = d.workers();
    for (auto& w : workers) state.theta[w] = 1.0;

    for (int iter = 0; iter < params.max_iter; ++iter) {
        state.iteration = iter + 1;

        if (!params.force_uniform_theta) {
            for (auto& w : workers) {
                auto answers = d.answers_of_worker(w);
                double ssd = kDistanceFloor;
                for (auto& a : answers)
                    ssd += sq_euclidean(store.lookup(a.text), state.centroids.at(a.instance));
                double quantile = chi2_upper_quantile(params.alpha / 2.0,
                                                      static_cast<int>(answers.size()));
                state.theta[w] = quantile / ssd;
            }
        }

        double max_delta = 0.0;
        for (auto& inst : d.instances()) {
            Vector num(store.dim(), 0.0);
            double denom = 0.0;
            for (auto& a : d.answers_of_instance(inst.id)) {
                double th = state.theta.at(a.worker);
                const Vector& v = store.lookup(a.text);
                for (std::size_t k = 0; k < num.size(); ++k) num[k] += th * v[k];
                denom += th;
            }
            Vector& centroid = state.centroids.at(inst.id);
            for (std::size_t k = 0; k < num.size(); ++k) {
                double nv = num[k] / denom;
                max_delta = std::max(max_delta, std::fabs(nv - centroid[k]));
                centroid[k] = nv;
            }
        }
        if (max_delta < params.tol) break;
    }

    EstimatedAnswers out;
    for (auto& inst : d.instances()) {
        auto answers = d.answers_of_instance(inst.id);
        std::vector<double> scores(answers.size());
        for (std::size_t i = 0; i < answers.size(); ++i)
            scores[i] = cosine_sim(store.lookup(answers[i].text), state.centroids.at(inst.id));
        auto& pick = argmax_by_score(answers, scores);
        out[inst.id] = {pick.text, pick.worker.str()};
    }
    return {std::move(out), std::move(state)};
}

EstimatedAnswers run_aggregator(AggregatorKind kind, const Dataset& d,
                                const EmbeddingStore& store, const RasaParams& params) {
    switch (kind) {
        case AggregatorKind::SMV: return smv(d, store);
        case AggregatorKind::SMS: return sms(d, store);
        case AggregatorKind::RASA: return rasa(d, store, params).first;
    }
    throw Error("invalid AggregatorKind");
}

}  // namespace cams
