#ifndef CAMS_REPORT_HPP
#define CAMS_REPORT_HPP

#include <string>
#include <vector>

#include "cams/metrics.hpp"
#include "cams/pipeline.hpp"

namespace cams {

// Fixed 4-decimal rendering used by all report tables.
std::string format_score(double x);

// One JSON file per cell, "<selection>__<aggregator>.json", plus nothing else.
void save_matrix_results(const MatrixResults& results, const std::string& dir);
MatrixResults load_matrix_results(const std::string& dir);

void save_estimates(const EstimatedAnswers& est, const std::string& selection_label,
                    AggregatorKind kind, const std::string& path);

// Worker-quality table (MIN/MEAN/MAX/STD/TIAA per role) for each metric.
std::string render_worker_quality_md(const Dataset& d,
                                     const std::vector<MetricKind>& metrics,
                                     const EmbeddingStore* store);
std::string render_worker_quality_tsv(const Dataset& d,
                                      const std::vector<MetricKind>& metrics,
                                      const EmbeddingStore* store);

// Aggregation matrix (selections x aggregators) per metric, scored against
// the dataset's ground truth.
std::string render_matrix_md(const MatrixResults& results, const Dataset& d,
                             const std::vector<MetricKind>& metrics,
                             const EmbeddingStore* store);
std::string render_matrix_tsv(const MatrixResults& results, const Dataset& d,
                              const std::vector<MetricKind>& metrics,
                              const EmbeddingStore* store);

}  // namespace cams

#endif
