#ifndef CAMS_SYNTHGEN_HPP
#define CAMS_SYNTHGEN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cams/core.hpp"
#include "cams/embedding.hpp"

namespace cams {

struct SynthWorker {
    WorkerRole role = WorkerRole::CrowdCreator;
    double noise_scale = 0.1;  // sigma_j >= 0
    double coverage = 1.0;     // fraction of instances answered, (0, 1]
};

struct SynthConfig {
    std::size_t dim = 16;
    std::size_t n_instances = 50;
    std::vector<SynthWorker> workers;
    std::uint64_t seed = 0;
};

struct SynthOutput {
    Dataset dataset;
    EmbeddingStore store;
    std::map<std::string, Vector> truth;     // instance id -> true vector
    std::map<std::string, WorkerId> best;    // instance id -> cosine-nearest answer
};

// Per instance: true vector uniform on the unit sphere; each covering
// worker's answer = normalize(z + sigma * g). Answer texts are synthetic
// unique strings keyed to their vectors. Deterministic per seed: mt19937_64
// stream with Box-Muller normals, so outputs are identical across platforms.
SynthOutput generate(const SynthConfig& cfg);

}  // namespace cams

#endif
