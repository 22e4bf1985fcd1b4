#pragma once

#include <cstddef>
#include <cstdint>

#include "tfhnn/dense.hpp"
#include "tfhnn/hypergraph.hpp"
#include "tfhnn/nn.hpp"

namespace tfhnn {

struct PlantedConfig {
    std::size_t n = 500;
    std::size_t m = 800;
    std::size_t classes = 4;
    std::size_t min_edge_size = 2;
    std::size_t max_edge_size = 6;
    double p_in = 0.9;  // probability a hyperedge is drawn from a single class
    std::size_t feature_dim = 16;
    double feature_noise = 2.0;
    std::uint64_t seed = 0;

    // Throws ConfigError.
    void validate() const;
};

struct PlantedInstance {
    Hypergraph hypergraph;
    FeatureMatrix features;
    LabelVector labels;
};

// Node i belongs to class i mod c. Each hyperedge picks a size uniformly in
// the configured range; with probability p_in its members come from one
// uniformly chosen class, otherwise from all nodes. Features are the one-hot
// class vector plus N(0, noise^2) per coordinate.
PlantedInstance generate_planted(const PlantedConfig& cfg);

// Uniform random hypergraph with 1..max_n nodes and 1..max_m hyperedges of
// sizes in [min_size, min(max_size, n)]. Used by the property checks.
Hypergraph random_hypergraph(Rng& rng, std::size_t max_n, std::size_t max_m, std::size_t min_size,
                             std::size_t max_size);

}  // namespace tfhnn
