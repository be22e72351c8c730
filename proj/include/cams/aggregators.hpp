#ifndef CAMS_AGGREGATORS_HPP
#define CAMS_AGGREGATORS_HPP

#include <map>
#include <string>

#include "cams/core.hpp"
#include "cams/embedding.hpp"

namespace cams {

enum class AggregatorKind { SMV, SMS, RASA };

std::string aggregator_name(AggregatorKind k);
AggregatorKind parse_aggregator(const std::string& name);

struct ReliabilityState {
    std::map<WorkerId, double> theta;
    std::map<std::string, Vector> centroids;  // instance id -> centroid
    int iteration = 0;
};

struct RasaParams {
    double alpha = 0.05;
    int max_iter = 100;
    double tol = 1e-6;
    // Test hook: freeze all theta at 1, reducing the weighted centroid to the
    // per-instance mean.
    bool force_uniform_theta = false;
};

// Per instance: centroid = mean of answer vectors, select the answer with
// maximal cosine to the centroid. Ties go to canonical answer order.
EstimatedAnswers smv(const Dataset& d, const EmbeddingStore& store);

// Per instance: select the answer with the largest sum of cosine similarity
// to the other answers of that instance.
EstimatedAnswers sms(const Dataset& d, const EmbeddingStore& store);

// Alternates reliability and centroid updates from an SMV initialization,
// then selects per instance by cosine to the final centroid.
std::pair<EstimatedAnswers, ReliabilityState> rasa(const Dataset& d,
                                                   const EmbeddingStore& store,
                                                   const RasaParams& params = {});

EstimatedAnswers run_aggregator(AggregatorKind kind, const Dataset& d,
                                const EmbeddingStore& store,
                                const RasaParams& params = {});

}  // namespace cams

#endif
