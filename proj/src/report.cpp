#include "cams/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace cams {

std::string format_score(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

void save_estimates(const EstimatedAnswers& est, const std::string& selection_label,
                    AggregatorKind kind, const std::string& path) {
    nlohmann::json j;
    j["selection"] = selection_label;
    j["aggregator"] = aggregator_name(kind);
    nlohmann::json je = nlohmann::json::object();
    for (auto& [id, e] : est)
        je[id] = {{"text", e.text}, {"provenance", e.provenance}};
    j["estimates"] = je;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write estimates file: " + path);
    out << j.dump(2) << "\n";
}

void save_matrix_results(const MatrixResults& results, const std::string& dir) {
    fs::create_directories(dir);
    for (auto& [key, est] : results) {
        std::string name = key.selection_label + "__" + aggregator_name(key.kind) + ".json";
        save_estimates(est, key.selection_label, key.kind, (fs::path(dir) / name).string());
    }
}

MatrixResults load_matrix_results(const std::string& dir) {
    MatrixResults results;
    std::vector<fs::path> files;
    for (auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json" &&
            entry.path().filename().string().find("__") != std::string::npos)
            files.push_back(entry.path());
    for (auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw Error("invalid estimates file: " + path.string());
        MatrixCellKey key{j.at("selection").get<std::string>(),
                          parse_aggregator(j.at("aggregator").get<std::string>())};
        EstimatedAnswers est;
        for (auto& [id, je] : j.at("estimates").items())
            est[id] = {je.at("text").get<std::string>(),
                       je.value("provenance", std::string{})};
        results[key] = std::move(est);
    }
    if (results.empty()) throw Error("no result cells found in " + dir);
    return results;
}

namespace {

const std::vector<WorkerRole> kAllRoles = {
    WorkerRole::CrowdCreator, WorkerRole::CrowdAggregator, WorkerRole::LlmAggregator};

std::vector<WorkerRole> present_roles(const Dataset& d) {
    std::vector<WorkerRole> roles;
    for (auto r : kAllRoles)
        if (d.worker_count(r) > 0) roles.push_back(r);
    return roles;
}

std::vector<AggregatorKind> matrix_kinds(const MatrixResults& results) {
    std::vector<AggregatorKind> kinds;
    for (auto k : {AggregatorKind::SMV, AggregatorKind::SMS, AggregatorKind::RASA}) {
        for (auto& [key, _] : results)
            if (key.kind == k) {
                kinds.push_back(k);
                break;
            }
    }
    return kinds;
}

std::vector<std::string> matrix_labels(const MatrixResults& results) {
    // preserve the canonical Table-4 row order where applicable
    std::vector<std::string> order;
    for (auto& sel : default_selections()) order.push_back(sel.label());
    std::vector<std::string> labels;
    for (auto& label : order) {
        for (auto& [key, _] : results)
            if (key.selection_label == label) {
                labels.push_back(label);
                break;
            }
    }
    for (auto& [key, _] : results)
        if (std::find(labels.begin(), labels.end(), key.selection_label) == labels.end())
            labels.push_back(key.selection_label);
    return labels;
}

}  // namespace

std::string render_worker_quality_md(const Dataset& d,
                                     const std::vector<MetricKind>& metrics,
                                     const EmbeddingStore* store) {
    std::ostringstream out;
    out << "# Worker quality\n";
    for (auto kind : metrics) {
        out << "\n## " << metric_name(kind) << "\n\n";
        out << "| Role | MIN | MEAN | MAX | STD | TIAA |\n";
        out << "|---|---|---|---|---|---|\n";
        for (auto role : present_roles(d)) {
            auto q = worker_quality(d, role, kind, store);
            out << "| " << role_code(role) << " | " << format_score(q.min) << " | "
                << format_score(q.mean) << " | " << format_score(q.max) << " | "
                << format_score(q.std) << " | " << format_score(q.tiaa) << " |\n";
        }
    }
    return out.str();
}

std::string render_worker_quality_tsv(const Dataset& d,
                                      const std::vector<MetricKind>& metrics,
                                      const EmbeddingStore* store) {
    std::ostringstream out;
    out << "metric\trole\tmin\tmean\tmax\tstd\ttiaa\n";
    for (auto kind : metrics) {
        for (auto role : present_roles(d)) {
            auto q = worker_quality(d, role, kind, store);
            out << metric_name(kind) << "\t" << role_code(role) << "\t"
                << format_score(q.min) << "\t" << format_score(q.mean) << "\t"
                << format_score(q.max) << "\t" << format_score(q.std) << "\t"
                << format_score(q.tiaa) << "\n";
        }
    }
    return out.str();
}

std::string render_matrix_md(const MatrixResults& results, const Dataset& d,
                             const std::vector<MetricKind>& metrics,
                             const EmbeddingStore* store) {
    auto kinds = matrix_kinds(results);
    auto labels = matrix_labels(results);
    std::ostringstream out;
    out << "# Answer aggregation results\n";
    for (auto metric : metrics) {
        out << "\n## " << metric_name(metric) << "\n\n";
        out << "| Answers |";
        for (auto k : kinds) out << " " << aggregator_name(k) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < kinds.size(); ++i) out << "---|";
        out << "\n";
        for (auto& label : labels) {
            out << "| " << label << " |";
            for (auto k : kinds) {
                auto it = results.find({label, k});
                if (it == results.end())
                    out << " - |";
                else
                    out << " " << format_score(score_estimates(it->second, d, metric, store))
                        << " |";
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string render_matrix_tsv(const MatrixResults& results, const Dataset& d,
                              const std::vector<MetricKind>& metrics,
                              const EmbeddingStore* store) {
    std::ostringstream out;
    out << "selection\taggregator\tmetric\tscore\n";
    auto kinds = matrix_kinds(results);
    for (auto& label : matrix_labels(results)) {
        for (auto k : kinds) {
            auto it = results.find({label, k});
            if (it == results.end()) continue;
            for (auto metric : metrics)
                out << label << "\t" << aggregator_name(k) << "\t" << metric_name(metric)
                    << "\t" << format_score(score_estimates(it->second, d, metric, store))
                    << "\n";
        }
    }
    return out.str();
}

}  // namespace cams
