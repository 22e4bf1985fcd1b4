#include "tfhnn/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sampling.hpp"
#include "tfhnn/errors.hpp"

namespace tfhnn {

void PlantedConfig::validate() const {
    if (n == 0) throw ConfigError("planted: n must be positive");
    if (classes == 0) throw ConfigError("planted: classes must be positive");
    if (min_edge_size < 2) throw ConfigError("planted: minimum hyperedge size must be at least 2");
    if (max_edge_size < min_edge_size)
        throw ConfigError("planted: hyperedge size range is empty (" + std::to_string(min_edge_size) +
                          ".." + std::to_string(max_edge_size) + ")");
    if (!(p_in >= 0.0 && p_in <= 1.0)) throw ConfigError("planted: p_in must lie in [0,1]");
    if (feature_dim < classes) throw ConfigError("planted: feature_dim must be at least the class count");
    if (!(feature_noise >= 0.0)) throw ConfigError("planted: feature_noise must be nonnegative");
    const std::size_t smallest_class = n / classes;
    if (smallest_class < max_edge_size)
        throw ConfigError("planted: smallest class has " + std::to_string(smallest_class) +
                          " nodes, fewer than the maximum hyperedge size " +
                          std::to_string(max_edge_size));
}

PlantedInstance generate_planted(const PlantedConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t c = cfg.classes;

    std::vector<std::vector<NodeId>> members(c);
    LabelVector labels;
    labels.num_classes = c;
    labels.labels.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        labels.labels[i] = static_cast<std::int32_t>(i % c);
        members[i % c].push_back(static_cast<NodeId>(i));
    }

    std::uniform_int_distribution<std::size_t> size_dist(cfg.min_edge_size, cfg.max_edge_size);
    std::uniform_int_distribution<std::size_t> class_dist(0, c - 1);
    std::bernoulli_distribution pure(cfg.p_in);
    std::vector<std::vector<NodeId>> edges;
    edges.reserve(cfg.m);
    for (std::size_t k = 0; k < cfg.m; ++k) {
        const std::size_t size = size_dist(rng);
        std::vector<NodeId> e;
        if (pure(rng)) {
            const auto& pool = members[class_dist(rng)];
            for (std::size_t idx : sampling::distinct_indices(pool.size(), size, rng)) e.push_back(pool[idx]);
        } else {
            for (std::size_t idx : sampling::distinct_indices(cfg.n, size, rng))
                e.push_back(static_cast<NodeId>(idx));
        }
        edges.push_back(std::move(e));
    }

    FeatureMatrix x(cfg.n, cfg.feature_dim);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t j = 0; j < cfg.feature_dim; ++j) x(i, j) = cfg.feature_noise * noise(rng);
        x(i, static_cast<std::size_t>(labels.labels[i])) += 1.0;
    }
    return {Hypergraph(cfg.n, edges), std::move(x), std::move(labels)};
}

Hypergraph random_hypergraph(Rng& rng, std::size_t max_n, std::size_t max_m, std::size_t min_size,
                             std::size_t max_size) {
    if (max_n < min_size || min_size == 0 || max_m == 0)
        throw ConfigError("random_hypergraph: impossible size bounds");
    const std::size_t n = std::uniform_int_distribution<std::size_t>(min_size, max_n)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
    std::uniform_int_distribution<std::size_t> size_dist(min_size, std::min(max_size, n));
    std::vector<std::vector<NodeId>> edges;
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<NodeId> e;
        for (std::size_t idx : sampling::distinct_indices(n, size_dist(rng), rng))
            e.push_back(static_cast<NodeId>(idx));
        edges.push_back(std::move(e));
    }
    return Hypergraph(n, edges);
}

}  // namespace tfhnn
