#ifndef CAMS_PIPELINE_HPP
#define CAMS_PIPELINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cams/aggregators.hpp"
#include "cams/core.hpp"

namespace cams {

// One row of the combination matrix: which worker/answer resources feed the
// model aggregator.
struct ResourceSelection {
    bool use_cc = false;
    bool use_ca = false;
    bool use_la = false;
    // When set, restricts L.A. workers to this subset (ensemble-size sweeps).
    std::optional<std::vector<WorkerId>> la_subset;

    std::string label() const;  // "CC", "CC+CA+LA", ...
};

// The seven rows: CC | CA | LA | CC+CA | CC+LA | CA+LA | CC+CA+LA.
std::vector<ResourceSelection> default_selections();

// Answer-set union of the selected roles over a shared instance set. Role
// qualification of WorkerIds keeps a person acting in two roles as two
// workers.
Dataset merge_resources(const Dataset& cc, const Dataset& ca, const Dataset& la,
                        const ResourceSelection& sel);

// Same merge over one combined dataset holding all roles.
Dataset select_resources(const Dataset& combined, const ResourceSelection& sel);

struct MatrixCellKey {
    std::string selection_label;
    AggregatorKind kind;
    auto operator<=>(const MatrixCellKey&) const = default;
};

using MatrixResults = std::map<MatrixCellKey, EstimatedAnswers>;

// One aggregation run per (selection, kind) cell. Cells are independent.
MatrixResults run_matrix(const Dataset& combined, const EmbeddingStore& store,
                         const std::vector<ResourceSelection>& selections,
                         const std::vector<AggregatorKind>& kinds,
                         const RasaParams& params = {});

// Temperature priority realizing the nested ensemble-size protocol:
// [0] then [0.5, 1], [0.25, 0.75], [0.1, 0.9], [1.1, 1.25].
std::vector<double> default_temperature_priority();

// First `count` L.A. workers of `combined` in priority order; workers whose
// temperature is not in the priority list follow in canonical order.
std::vector<WorkerId> la_subset_for_count(const Dataset& combined, std::size_t count,
                                          const std::vector<double>& priority =
                                              default_temperature_priority());

}  // namespace cams

#endif
