#ifndef CAMS_METRICS_HPP
#define CAMS_METRICS_HPP

#include <string>
#include <vector>

#include "cams/core.hpp"
#include "cams/embedding.hpp"

namespace cams {

enum class MetricKind { GLEU, METEOR_LITE, EMB_SIM };

std::string metric_name(MetricKind k);
MetricKind parse_metric(const std::string& name);

// Lowercase, detach ASCII punctuation into separate tokens, split on
// whitespace.
std::vector<std::string> tokenize(const std::string& text);

// Pooled 1..4-gram sentence GLEU: clipped matches m, hypothesis total h,
// reference total r; score = min(m/h, m/r). Empty hypothesis scores 0.
double gleu(const std::string& hypothesis, const std::string& reference);

// METEOR with exact and Porter-stem alignment stages only (no synonyms).
// F = P*R / (0.9*P + 0.1*R); penalty = 0.5 * (chunks/matches)^3.
double meteor_lite(const std::string& hypothesis, const std::string& reference);

double emb_sim(const std::string& hypothesis, const std::string& reference,
               const EmbeddingStore& store);

// Dispatch on kind; store may be null for GLEU and METEOR-lite.
double metric_score(MetricKind kind, const std::string& hypothesis,
                    const std::string& reference, const EmbeddingStore* store);

// Mean over instances of metric(estimate, ground truth).
double score_estimates(const EstimatedAnswers& est, const Dataset& d, MetricKind kind,
                       const EmbeddingStore* store = nullptr);

struct WorkerQuality {
    double min = 0, mean = 0, max = 0, std = 0;
    double tiaa = 0;
    std::size_t worker_count = 0;
};

// Per-worker mean score against ground truth, then MIN/MEAN/MAX/population-STD
// across the role's workers (workers weighted equally), plus TIAA.
WorkerQuality worker_quality(const Dataset& d, WorkerRole role, MetricKind kind,
                             const EmbeddingStore* store = nullptr);

// Text inter-annotator agreement: per instance, mean of the symmetrized metric
// over unordered same-role answer pairs; averaged over instances with >= 2
// such answers.
double tiaa(const Dataset& d, WorkerRole role, MetricKind kind,
            const EmbeddingStore* store = nullptr);

}  // namespace cams

#endif
