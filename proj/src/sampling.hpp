#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "tfhnn/hypergraph.hpp"
#include "tfhnn/nn.hpp"

namespace tfhnn::sampling {

// k distinct values from [0, pool) by Floyd's algorithm, returned sorted.
inline std::vector<std::size_t> distinct_indices(std::size_t pool, std::size_t k, Rng& rng) {
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = pool - k; j < pool; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        const std::size_t t = pick(rng);
        auto it = std::lower_bound(chosen.begin(), chosen.end(), t);
        if (it != chosen.end() && *it == t) {
            chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), j), j);
        } else {
            chosen.insert(it, t);
        }
    }
    return chosen;
}

// Maps rank r in [0, n - |excluded|) to the r-th node not in `excluded`
// (sorted ascending).
inline NodeId nth_outside(std::size_t r, std::span<const NodeId> excluded) {
    for (NodeId x : excluded) {
        if (x <= r) ++r;
        else break;
    }
    return static_cast<NodeId>(r);
}

}  // namespace tfhnn::sampling
