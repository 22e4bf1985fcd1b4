#pragma once
// Parameter-free, activation-free message passing of four hypergraph
// networks. These exist to check that each collapses onto the unified
// polynomial ((1-a)^L W^L + a sum_{l<L} (1-a)^l W^l) X for a suitable (W, a).

#include <cstddef>
#include <string_view>

#include "tfhnn/dense.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/hypergraph.hpp"

namespace tfhnn {

enum class ModelKind { UniGCNII, DeepHGNN, AllDeepSets, EDHNN };

std::string_view model_name(ModelKind kind) noexcept;

struct LinearizedModelSpec {
    ModelKind kind = ModelKind::AllDeepSets;
    double gamma = 0.0;  // initial-residual weight; must be 0 for AllDeepSets
    std::size_t layers = 1;

    void validate() const;
};

// Runs the layer recursion X(l) = W_kind X(l-1) + gamma X(0), where W_kind
// carries the (1-gamma) factor of its layer.
FeatureMatrix run_linearized(const LinearizedModelSpec& spec, const Hypergraph& h,
                             const FeatureMatrix& x);

struct UnifiedForm {
    SparseAdjacency w;
    double alpha = 0.0;
};

UnifiedForm unified_equivalent(const LinearizedModelSpec& spec, const Hypergraph& h);

// Dense evaluation of ((1-a)^L W^L + a sum_{l<L} (1-a)^l W^l) X.
FeatureMatrix unified_polynomial(const UnifiedForm& form, std::size_t layers, const FeatureMatrix& x);

}  // namespace tfhnn
