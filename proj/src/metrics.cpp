#include "cams/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "cams/numerics.hpp"
#include "cams/stemmer.hpp"

namespace cams {

std::string metric_name(MetricKind k) {
    switch (k) {
        case MetricKind::GLEU: return "GLEU";
        case MetricKind::METEOR_LITE: return "METEOR-lite";
        case MetricKind::EMB_SIM: return "EmbSim";
    }
    throw Error("invalid MetricKind");
}

MetricKind parse_metric(const std::string& name) {
    if (name == "GLEU") return MetricKind::GLEU;
    if (name == "METEOR-lite" || name == "METEOR_LITE") return MetricKind::METEOR_LITE;
    if (name == "EmbSim" || name == "EMB_SIM") return MetricKind::EMB_SIM;
    throw Error("unknown metric: " + name);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    };
    for (unsigned char c : text) {
        if (c < 128 && std::isspace(c)) {
            flush();
        } else if (c < 128 && std::ispunct(c)) {
            flush();
            tokens.push_back(std::string(1, static_cast<char>(c)));
        } else {
            cur.push_back(c < 128 ? static_cast<char>(std::tolower(c))
                                  : static_cast<char>(c));
        }
    }
    flush();
    return tokens;
}

namespace {

using Tokens = std::vector<std::string>;

std::map<Tokens, int> ngram_counts(const Tokens& toks, int n) {
    std::map<Tokens, int> counts;
    if (static_cast<int>(toks.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i)
        ++counts[Tokens(toks.begin() + i, toks.begin() + i + n)];
    return counts;
}

}  // namespace

double gleu(const std::string& hypothesis, const std::string& reference) {
    Tokens hyp = tokenize(hypothesis);
    Tokens ref = tokenize(reference);
    if (ref.empty()) throw Error("gleu: empty reference");
    if (hyp.empty()) return 0.0;

    long long matches = 0, hyp_total = 0, ref_total = 0;
    for (int n = 1; n <= 4; ++n) {
        auto hc = ngram_counts(hyp, n);
        auto rc = ngram_counts(ref, n);
        for (auto& [gram, count] : hc) {
            hyp_total += count;
            auto it = rc.find(gram);
            if (it != rc.end()) matches += std::min(count, it->second);
        }
        for (auto& [gram, count] : rc) ref_total += count;
    }
    if (hyp_total == 0 || ref_total == 0) return 0.0;
    double precision = static_cast<double>(matches) / hyp_total;
    double recall = static_cast<double>(matches) / ref_total;
    return std::min(precision, recall);
}

double meteor_lite(const std::string& hypothesis, const std::string& reference) {
    Tokens hyp = tokenize(hypothesis);
    Tokens ref = tokenize(reference);
    if (ref.empty()) throw Error("meteor_lite: empty reference");
    if (hyp.empty()) return 0.0;

    // alignment[i] = matched reference index for hypothesis token i, or -1
    std::vector<int> alignment(hyp.size(), -1);
    std::vector<bool> ref_used(ref.size(), false);

    // Stage 1: exact; stage 2: Porter stems. Leftmost-greedy in both.
    auto align_stage = [&](auto key) {
        for (std::size_t i = 0; i < hyp.size(); ++i) {
            if (alignment[i] != -1) continue;
            for (std::size_t j = 0; j < ref.size(); ++j) {
                if (!ref_used[j] && key(hyp[i]) == key(ref[j])) {
                    alignment[i] = static_cast<int>(j);
                    ref_used[j] = true;
                    break;
                }
            }
        }
    };
    align_stage([](const std::string& w) { return w; });
    align_stage([](const std::string& w) { return porter_stem(w); });

    int matches = 0;
    for (int a : alignment)
        if (a != -1) ++matches;
    if (matches == 0) return 0.0;

    // Chunks: contiguous runs, in hypothesis order, of consecutive reference
    // indices.
    int chunks = 0;
    int prev_ref = -2;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        if (alignment[i] == -1) {
            prev_ref = -2;
            continue;
        }
        if (alignment[i] != prev_ref + 1) ++chunks;
        prev_ref = alignment[i];
    }

    double precision = static_cast<double>(matches) / hyp.size();
    double recall = static_cast<double>(matches) / ref.size();
    double f = precision * recall / (0.9 * precision + 0.1 * recall);
    double frag = static_cast<double>(chunks) / matches;
    double penalty = 0.5 * frag * frag * frag;
    return f * (1.0 - penalty);
}

double emb_sim(const std::string& hypothesis, const std::string& reference,
               const EmbeddingStore& store) {
    return cosine_sim(store.lookup(hypothesis), store.lookup(reference));
}

double metric_score(MetricKind kind, const std::string& hypothesis,
                    const std::string& reference, const EmbeddingStore* store) {
    switch (kind) {
        case MetricKind::GLEU: return gleu(hypothesis, reference);
        case MetricKind::METEOR_LITE: return meteor_lite(hypothesis, reference);
        case MetricKind::EMB_SIM:
            if (!store) throw Error("embedding similarity requires a store");
            return emb_sim(hypothesis, reference, *store);
    }
    throw Error("invalid MetricKind");
}

double score_estimates(const EstimatedAnswers& est, const Dataset& d, MetricKind kind,
                       const EmbeddingStore* store) {
    if (d.instances().empty()) throw Error("score_estimates: empty dataset");
    double sum = 0.0;
    for (auto& inst : d.instances()) {
        if (!inst.truth) throw Error("missing ground truth for instance " + inst.id);
        auto it = est.find(inst.id);
        if (it == est.end()) throw Error("missing estimate for instance " + inst.id);
        sum += metric_score(kind, it->second.text, *inst.truth, store);
    }
    return sum / static_cast<double>(d.instances().size());
}

WorkerQuality worker_quality(const Dataset& d, WorkerRole role, MetricKind kind,
                             const EmbeddingStore* store) {
    auto workers = d.workers_of_role(role);
    if (workers.empty()) throw Error("role absent from dataset: " + role_code(role));

    std::vector<double> per_worker;
    per_worker.reserve(workers.size());
    for (auto& w : workers) {
        auto answers = d.answers_of_worker(w);
        double sum = 0.0;
        for (auto& a : answers) {
            auto& inst = d.instance(a.instance);
            if (!inst.truth) throw Error("missing ground truth for instance " + inst.id);
            sum += metric_score(kind, a.text, *inst.truth, store);
        }
        per_worker.push_back(sum / static_cast<double>(answers.size()));
    }

    WorkerQuality q;
    q.worker_count = per_worker.size();
    q.min = *std::min_element(per_worker.begin(), per_worker.end());
    q.max = *std::max_element(per_worker.begin(), per_worker.end());
    q.mean = std::accumulate(per_worker.begin(), per_worker.end(), 0.0) /
             static_cast<double>(per_worker.size());
    double var = 0.0;
    for (double x : per_worker) var += (x - q.mean) * (x - q.mean);
    q.std = std::sqrt(var / static_cast<double>(per_worker.size()));
    try {
        q.tiaa = tiaa(d, role, kind, store);
    } catch (const Error&) {
        // no instance with two answers of this role
        q.tiaa = std::numeric_limits<double>::quiet_NaN();
    }
    return q;
}

double tiaa(const Dataset& d, WorkerRole role, MetricKind kind,
            const EmbeddingStore* store) {
    double sum = 0.0;
    std::size_t scored_instances = 0;
    for (auto& inst : d.instances()) {
        std::vector<std::string> texts;
        for (auto& a : d.answers_of_instance(inst.id))
            if (a.worker.role == role) texts.push_back(a.text);
        if (texts.size() < 2) continue;

        double pair_sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            for (std::size_t j = i + 1; j < texts.size(); ++j) {
                // symmetrize: GLEU and METEOR-lite are direction-sensitive
                double g = 0.5 * (metric_score(kind, texts[i], texts[j], store) +
                                  metric_score(kind, texts[j], texts[i], store));
                pair_sum += g;
                ++pairs;
            }
        }
        sum += pair_sum / static_cast<double>(pairs);
        ++scored_instances;
    }
    if (scored_instances == 0)
        throw Error("tiaa: no instance with >= 2 answers of role " + role_code(role));
    return sum / static_cast<double>(scored_instances);
}

}  // namespace cams
