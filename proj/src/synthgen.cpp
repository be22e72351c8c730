#include "cams/synthgen.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cams/numerics.hpp"

namespace cams {

namespace {

// Fixed mapping from the mt19937_64 stream so generated datasets reproduce
// across platforms (std::normal_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

Vector random_unit_vector(Rng& rng, std::size_t dim) {
    Vector v(dim);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& x : v) {
            x = rng.gaussian();
            norm2 += x * x;
        }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    return v;
}

std::string vector_text(const Vector& v) {
    std::ostringstream key;
    key.precision(17);
    for (double x : v) key << x << ",";
    return "synth:" + content_key(key.str()).substr(0, 24);
}

}  // namespace

SynthOutput generate(const SynthConfig& cfg) {
    if (cfg.dim < 2) throw Error("synthgen: dim must be >= 2");
    if (cfg.n_instances == 0) throw Error("synthgen: n_instances must be >= 1");
    if (cfg.workers.empty()) throw Error("synthgen: no workers configured");
    for (auto& w : cfg.workers) {
        if (w.noise_scale < 0) throw Error("synthgen: negative noise scale");
        if (!(w.coverage > 0.0 && w.coverage <= 1.0))
            throw Error("synthgen: coverage must be in (0, 1]");
    }

    Rng rng(cfg.seed);
    SynthOutput out;
    out.store = EmbeddingStore(cfg.dim);

    std::vector<Instance> instances;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < cfg.n_instances; ++i) {
        std::string id = "q" + std::to_string(i + 1);
        ids.push_back(id);
        out.truth[id] = random_unit_vector(rng, cfg.dim);
        instances.push_back({id, "synthetic instance " + id, std::nullopt});
    }

    std::vector<AnswerRecord> answers;
    for (std::size_t wi = 0; wi < cfg.workers.size(); ++wi) {
        auto& sw = cfg.workers[wi];
        WorkerId worker{sw.role, "w" + std::to_string(wi + 1)};
        std::size_t n_answers = static_cast<std::size_t>(
            std::ceil(sw.coverage * static_cast<double>(cfg.n_instances)));
        // cyclic offset spreads partial coverage across instances
        std::size_t offset = (wi * cfg.n_instances) / cfg.workers.size();
        for (std::size_t k = 0; k < n_answers; ++k) {
            const std::string& id = ids[(offset + k) % cfg.n_instances];
            Vector v = out.truth[id];
            for (auto& x : v) x += sw.noise_scale * rng.gaussian();
            double norm2 = 0.0;
            for (double x : v) norm2 += x * x;
            double inv = 1.0 / std::sqrt(norm2);
            for (auto& x : v) x *= inv;
            std::string text = vector_text(v);
            out.store.insert(text, v);
            answers.push_back({id, worker, text});
        }
    }

    out.dataset = Dataset(std::move(instances), std::move(answers));

    // ground-truth attribution: nearest answer by cosine, canonical tie-break
    for (auto& id : ids) {
        auto inst_answers = out.dataset.answers_of_instance(id);
        std::size_t best = 0;
        double best_score = -2.0;
        for (std::size_t i = 0; i < inst_answers.size(); ++i) {
            double s = cosine_sim(out.store.lookup(inst_answers[i].text), out.truth[id]);
            if (s > best_score) {
                best_score = s;
                best = i;
            }
        }
        out.best[id] = inst_answers[best].worker;
    }
    return out;
}

}  // namespace cams
