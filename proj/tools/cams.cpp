#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cams/aggregators.hpp"
#include "cams/core.hpp"
#include "cams/embedding.hpp"
#include "cams/llm.hpp"
#include "cams/metrics.hpp"
#include "cams/pipeline.hpp"
#include "cams/report.hpp"
#include "cams/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cams::Error("cannot write file: " + path);
    out << content;
}

std::vector<cams::AggregatorKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<cams::AggregatorKind> kinds;
    for (auto& n : names) kinds.push_back(cams::parse_aggregator(n));
    return kinds;
}

std::vector<cams::MetricKind> parse_metrics(const std::vector<std::string>& names) {
    std::vector<cams::MetricKind> metrics;
    for (auto& n : names) metrics.push_back(cams::parse_metric(n));
    return metrics;
}

std::vector<cams::ResourceSelection> parse_selections(const std::vector<std::string>& labels) {
    if (labels.empty()) return cams::default_selections();
    std::vector<cams::ResourceSelection> sels;
    for (auto& label : labels) {
        cams::ResourceSelection sel;
        std::stringstream ss(label);
        std::string part;
        while (std::getline(ss, part, '+')) {
            if (part == "CC") sel.use_cc = true;
            else if (part == "CA") sel.use_ca = true;
            else if (part == "LA") sel.use_la = true;
            else throw cams::Error("unknown resource in selection: " + part);
        }
        if (!sel.use_cc && !sel.use_ca && !sel.use_la)
            throw cams::Error("empty selection: " + label);
        sels.push_back(sel);
    }
    return sels;
}

// Concatenate per-role parts onto the first part's instance set.
cams::Dataset load_combined(const std::vector<std::string>& paths) {
    if (paths.empty()) throw cams::Error("no dataset file given");
    cams::Dataset first = cams::load_dataset(paths[0]);
    std::vector<cams::AnswerRecord> answers = first.answers();
    for (std::size_t i = 1; i < paths.size(); ++i) {
        cams::Dataset part = cams::load_dataset(paths[i]);
        answers.insert(answers.end(), part.answers().begin(), part.answers().end());
    }
    return cams::Dataset(first.instances(), std::move(answers));
}

struct CommonOpts {
    std::vector<std::string> datasets;
    std::string store_path;
    std::string out_dir = "cams-out";
    std::vector<std::string> kinds = {"SMV", "SMS", "RASA"};
    std::vector<std::string> metrics = {"GLEU", "METEOR-lite", "EmbSim"};
    std::vector<std::string> selections;
    double alpha = 0.05;
    double tol = 1e-6;
    int max_iter = 100;
};

void apply_config_file(const std::string& path, CommonOpts& o) {
    std::ifstream in(path);
    if (!in) throw cams::Error("cannot open config: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw cams::Error("invalid config JSON: " + path);
    if (j.contains("datasets")) o.datasets = j["datasets"].get<std::vector<std::string>>();
    if (j.contains("store")) o.store_path = j["store"].get<std::string>();
    if (j.contains("out")) o.out_dir = j["out"].get<std::string>();
    if (j.contains("aggregators")) o.kinds = j["aggregators"].get<std::vector<std::string>>();
    if (j.contains("metrics")) o.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("selections"))
        o.selections = j["selections"].get<std::vector<std::string>>();
    if (j.contains("alpha")) o.alpha = j["alpha"].get<double>();
    if (j.contains("tol")) o.tol = j["tol"].get<double>();
    if (j.contains("max_iter")) o.max_iter = j["max_iter"].get<int>();
}

json manifest_json(const CommonOpts& o) {
    return json{{"datasets", o.datasets},   {"store", o.store_path},
                {"out", o.out_dir},         {"aggregators", o.kinds},
                {"metrics", o.metrics},     {"selections", o.selections},
                {"alpha", o.alpha},         {"tol", o.tol},
                {"max_iter", o.max_iter}};
}

void validate_paths(const CommonOpts& o, bool need_store) {
    for (auto& p : o.datasets)
        if (!fs::exists(p)) throw cams::Error("dataset file not found: " + p);
    if (need_store && !fs::exists(o.store_path))
        throw cams::Error("embedding store not found: " + o.store_path);
}

int cmd_synth(std::uint64_t seed, std::size_t dim, std::size_t n_instances,
              std::size_t cc, std::size_t ca, std::size_t la, double noise_min,
              double noise_max, const std::string& out_dir) {
    cams::SynthConfig cfg;
    cfg.dim = dim;
    cfg.n_instances = n_instances;
    cfg.seed = seed;
    std::size_t total = cc + ca + la;
    if (total == 0) throw cams::Error("no synthetic workers requested");
    auto noise_for = [&](std::size_t i) {
        if (total == 1) return noise_min;
        return noise_min + (noise_max - noise_min) * static_cast<double>(i) /
                               static_cast<double>(total - 1);
    };
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cc; ++i)
        cfg.workers.push_back({cams::WorkerRole::CrowdCreator, noise_for(idx++), 1.0});
    for (std::size_t i = 0; i < ca; ++i)
        cfg.workers.push_back({cams::WorkerRole::CrowdAggregator, noise_for(idx++), 1.0});
    for (std::size_t i = 0; i < la; ++i)
        cfg.workers.push_back({cams::WorkerRole::LlmAggregator, noise_for(idx++), 1.0});

    auto out = cams::generate(cfg);

    // attach the cosine-nearest answer text as ground truth so evaluation runs
    std::vector<cams::Instance> instances = out.dataset.instances();
    for (auto& inst : instances) {
        for (auto& a : out.dataset.answers_of_instance(inst.id)) {
            if (a.worker == out.best.at(inst.id)) {
                inst.truth = a.text;
                break;
            }
        }
    }
    cams::Dataset with_truth(std::move(instances), out.dataset.answers());

    fs::create_directories(out_dir);
    cams::save_dataset(with_truth, (fs::path(out_dir) / "dataset.json").string());
    out.store.save((fs::path(out_dir) / "store.camsemb").string());
    std::cout << "synth: " << with_truth.instances().size() << " instances, "
              << with_truth.workers().size() << " workers, "
              << with_truth.answers().size() << " answers -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_embed(const CommonOpts& o, const std::string& provider_file,
              const std::string& provider_http, bool normalize) {
    validate_paths(o, false);
    cams::Dataset d = load_combined(o.datasets);
    std::unique_ptr<cams::EmbeddingProvider> provider;
    if (!provider_file.empty())
        provider = std::make_unique<cams::FileEmbeddingProvider>(provider_file);
    else if (!provider_http.empty())
        provider = std::make_unique<cams::HttpEmbeddingProvider>(provider_http);
    else
        throw cams::Error("embed: need --provider-file or --provider-http");

    cams::EmbeddingStore cache;
    if (fs::exists(o.store_path)) cache = cams::EmbeddingStore::load(o.store_path);
    cams::EmbedOptions opts;
    opts.l2_normalize = normalize;
    auto store = cams::embed_dataset(d, *provider, std::move(cache), opts);
    store.save(o.store_path);
    std::cout << "embed: store with " << store.size() << " entries, dim " << store.dim()
              << " -> " << o.store_path << "\n";
    return kExitOk;
}

int cmd_llm_run(const CommonOpts& o, const std::string& mock_path,
                const std::string& endpoint, const std::string& model,
                const std::vector<double>& temperatures, const std::string& cache_dir,
                const std::string& out_path) {
    validate_paths(o, false);
    cams::Dataset d = load_combined(o.datasets);

    cams::LlmEnsembleConfig cfg;
    cfg.endpoint = endpoint;
    cfg.model = model;
    if (!temperatures.empty()) cfg.temperatures = temperatures;
    cfg.cache_dir = cache_dir;
    if (cfg.cache_dir.empty())
        if (const char* env = std::getenv("CAMS_CACHE_DIR")) cfg.cache_dir = env;

    std::unique_ptr<cams::ChatProvider> provider;
    if (!mock_path.empty()) provider = std::make_unique<cams::MockChatProvider>(mock_path);

    auto result = cams::run_ensemble(d, cfg, provider.get());

    cams::Dataset la_part(d.instances(), std::move(result.answers));
    cams::save_dataset(la_part, out_path);
    std::cout << "llm-run: " << la_part.answers().size() << " L.A. answers ("
              << result.requests_sent << " provider requests) -> " << out_path << "\n";
    return kExitOk;
}

int cmd_aggregate(const CommonOpts& o) {
    validate_paths(o, true);
    cams::Dataset d = load_combined(o.datasets);
    auto store = cams::EmbeddingStore::load(o.store_path);
    auto selections = parse_selections(o.selections);
    auto kinds = parse_kinds(o.kinds);
    cams::RasaParams params{o.alpha, o.max_iter, o.tol};

    auto results = cams::run_matrix(d, store, selections, kinds, params);
    cams::save_matrix_results(results, o.out_dir);
    write_file((fs::path(o.out_dir) / "manifest.json").string(),
               manifest_json(o).dump(2) + "\n");
    std::cout << "aggregate: " << results.size() << " result cells -> " << o.out_dir << "\n";
    return kExitOk;
}

int cmd_evaluate(const CommonOpts& o, const std::string& results_dir) {
    validate_paths(o, true);
    cams::Dataset d = load_combined(o.datasets);
    auto store = cams::EmbeddingStore::load(o.store_path);
    auto metrics = parse_metrics(o.metrics);
    const cams::EmbeddingStore* store_ptr = &store;

    for (auto& inst : d.instances())
        if (!inst.truth)
            throw cams::Error("evaluate: missing ground truth for instance " + inst.id);

    fs::create_directories(o.out_dir);
    write_file((fs::path(o.out_dir) / "worker_quality.md").string(),
               cams::render_worker_quality_md(d, metrics, store_ptr));
    write_file((fs::path(o.out_dir) / "worker_quality.tsv").string(),
               cams::render_worker_quality_tsv(d, metrics, store_ptr));
    if (!results_dir.empty()) {
        auto results = cams::load_matrix_results(results_dir);
        write_file((fs::path(o.out_dir) / "aggregation.md").string(),
                   cams::render_matrix_md(results, d, metrics, store_ptr));
        write_file((fs::path(o.out_dir) / "aggregation.tsv").string(),
                   cams::render_matrix_tsv(results, d, metrics, store_ptr));
    }
    write_file((fs::path(o.out_dir) / "manifest.json").string(),
               manifest_json(o).dump(2) + "\n");
    std::cout << "evaluate: reports -> " << o.out_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::size_t>& la_counts) {
    if (la_counts.empty()) throw cams::Error("sweep: empty --la-counts");
    validate_paths(o, true);
    cams::Dataset d = load_combined(o.datasets);
    auto store = cams::EmbeddingStore::load(o.store_path);
    auto kinds = parse_kinds(o.kinds);
    auto metrics = parse_metrics(o.metrics);
    cams::RasaParams params{o.alpha, o.max_iter, o.tol};

    fs::create_directories(o.out_dir);
    std::ostringstream long_tsv;
    long_tsv << "la_count\tselection\taggregator\tmetric\tscore\n";

    for (auto count : la_counts) {
        auto subset = cams::la_subset_for_count(d, count);
        std::vector<cams::ResourceSelection> selections;
        for (auto sel : parse_selections(o.selections)) {
            if (sel.use_la) sel.la_subset = subset;
            selections.push_back(sel);
        }
        auto results = cams::run_matrix(d, store, selections, kinds, params);
        std::string subdir = (fs::path(o.out_dir) / ("la_" + std::to_string(count))).string();
        cams::save_matrix_results(results, subdir);
        write_file((fs::path(subdir) / "aggregation.md").string(),
                   cams::render_matrix_md(results, d, metrics, &store));
        std::string tsv = cams::render_matrix_tsv(results, d, metrics, &store);
        // append to the long format, prefixing the count column
        std::istringstream lines(tsv);
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line))
            long_tsv << count << "\t" << line << "\n";
    }
    write_file((fs::path(o.out_dir) / "sweep.tsv").string(), long_tsv.str());
    write_file((fs::path(o.out_dir) / "manifest.json").string(),
               manifest_json(o).dump(2) + "\n");
    std::cout << "sweep: " << la_counts.size() << " ensemble sizes -> " << o.out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CAMS: human-LLM hybrid crowd text-answer aggregation"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string config_path;

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic crowd dataset");
    std::uint64_t seed = 0;
    std::size_t dim = 16, n_instances = 50, cc = 8, ca = 0, la = 0;
    double noise_min = 0.05, noise_max = 1.2;
    synth->add_option("--seed", seed);
    synth->add_option("--dim", dim);
    synth->add_option("--instances", n_instances);
    synth->add_option("--cc-workers", cc);
    synth->add_option("--ca-workers", ca);
    synth->add_option("--la-workers", la);
    synth->add_option("--noise-min", noise_min);
    synth->add_option("--noise-max", noise_max);
    synth->add_option("--out", opts.out_dir);

    // embed
    auto* embed = app.add_subcommand("embed", "Build or extend an embedding store");
    std::string provider_file, provider_http;
    bool normalize = false;
    embed->add_option("--dataset", opts.datasets)->required();
    embed->add_option("--store", opts.store_path)->required();
    embed->add_option("--provider-file", provider_file);
    embed->add_option("--provider-http", provider_http);
    embed->add_flag("--normalize", normalize);

    // llm-run
    auto* llm = app.add_subcommand("llm-run", "Run the LLM aggregator ensemble");
    std::string mock_path, endpoint, model = "gpt-4", cache_dir, la_out = "la_answers.json";
    std::vector<double> temperatures;
    llm->add_option("--dataset", opts.datasets)->required();
    llm->add_option("--mock", mock_path);
    llm->add_option("--endpoint", endpoint);
    llm->add_option("--model", model);
    llm->add_option("--temperatures", temperatures)->delimiter(',');
    llm->add_option("--cache-dir", cache_dir);
    llm->add_option("--out", la_out);

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "Run the selection x aggregator matrix");
    agg->add_option("--config", config_path);
    agg->add_option("--dataset", opts.datasets);
    agg->add_option("--store", opts.store_path);
    agg->add_option("--selections", opts.selections)->delimiter(',');
    agg->add_option("--aggregators", opts.kinds)->delimiter(',');
    agg->add_option("--alpha", opts.alpha);
    agg->add_option("--tol", opts.tol);
    agg->add_option("--max-iter", opts.max_iter);
    agg->add_option("--out", opts.out_dir);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Score results and write report tables");
    std::string results_dir;
    eval->add_option("--config", config_path);
    eval->add_option("--dataset", opts.datasets);
    eval->add_option("--store", opts.store_path);
    eval->add_option("--results", results_dir);
    eval->add_option("--metrics", opts.metrics)->delimiter(',');
    eval->add_option("--out", opts.out_dir);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Vary the number of L.A. workers");
    std::vector<std::size_t> la_counts;
    sweep->add_option("--config", config_path);
    sweep->add_option("--dataset", opts.datasets);
    sweep->add_option("--store", opts.store_path);
    sweep->add_option("--la-counts", la_counts)->delimiter(',');
    sweep->add_option("--selections", opts.selections)->delimiter(',');
    sweep->add_option("--aggregators", opts.kinds)->delimiter(',');
    sweep->add_option("--metrics", opts.metrics)->delimiter(',');
    sweep->add_option("--alpha", opts.alpha);
    sweep->add_option("--tol", opts.tol);
    sweep->add_option("--max-iter", opts.max_iter);
    sweep->add_option("--out", opts.out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (!config_path.empty()) {
            CommonOpts from_file;
            apply_config_file(config_path, from_file);
            // file values fill in anything the flags left at defaults
            if (opts.datasets.empty()) opts.datasets = from_file.datasets;
            if (opts.store_path.empty()) opts.store_path = from_file.store_path;
            if (opts.selections.empty()) opts.selections = from_file.selections;
            if (opts.out_dir == "cams-out") opts.out_dir = from_file.out_dir;
            opts.kinds = from_file.kinds.empty() ? opts.kinds : from_file.kinds;
            opts.metrics = from_file.metrics.empty() ? opts.metrics : from_file.metrics;
            opts.alpha = from_file.alpha;
            opts.tol = from_file.tol;
            opts.max_iter = from_file.max_iter;
        }

        if (*synth)
            return cmd_synth(seed, dim, n_instances, cc, ca, la, noise_min, noise_max,
                             opts.out_dir);
        if (*embed) return cmd_embed(opts, provider_file, provider_http, normalize);
        if (*llm)
            return cmd_llm_run(opts, mock_path, endpoint, model, temperatures, cache_dir,
                               la_out);
        if (*agg) return cmd_aggregate(opts);
        if (*eval) return cmd_evaluate(opts, results_dir);
        if (*sweep) return cmd_sweep(opts, la_counts);
    } catch (const cams::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::string msg = e.what();
        bool validation = msg.find("not found") != std::string::npos ||
                          msg.find("empty") != std::string::npos ||
                          msg.find("unknown") != std::string::npos ||
                          msg.find("cannot open") != std::string::npos;
        return validation ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
