#include "tfhnn/verify.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <utility>

#include "tfhnn/expansion.hpp"
#include "tfhnn/propagation.hpp"
#include "tfhnn/reference_hnns.hpp"
#include "tfhnn/synthetic.hpp"

namespace tfhnn {

namespace {

DenseMatrix random_features(Rng& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix x(n, d);
    for (double& v : x.data()) v = g(rng);
    return x;
}

double relative_error(const DenseMatrix& got, const DenseMatrix& want) {
    const double scale = frobenius_norm(want);
    const double diff = frobenius_distance(got, want);
    return scale > 0.0 ? diff / scale : diff;
}

void record(PropertyTally& t, double err) {
    ++t.checks;
    t.worst = std::max(t.worst, err);
    if (!(err <= t.tolerance)) ++t.failures;
}

}  // namespace

PropertyTally check_unification(std::size_t cases, std::uint64_t seed) {
    PropertyTally t{"unification", 0, 0, 0.0, 1e-9};
    Rng rng(seed);
    constexpr std::array kinds{ModelKind::UniGCNII, ModelKind::DeepHGNN, ModelKind::AllDeepSets,
                               ModelKind::EDHNN};
    for (std::size_t c = 0; c < cases; ++c) {
        const Hypergraph h = random_hypergraph(rng, 30, 20, 2, 6);
        const DenseMatrix x = random_features(rng, h.num_nodes(), 4);
        for (ModelKind kind : kinds) {
            for (double gamma : {0.1, 0.3, 0.5}) {
                for (std::size_t layers = 1; layers <= 5; ++layers) {
                    const LinearizedModelSpec spec{kind, kind == ModelKind::AllDeepSets ? 0.0 : gamma, layers};
                    const DenseMatrix got = run_linearized(spec, h, x);
                    const DenseMatrix want = unified_polynomial(unified_equivalent(spec, h), layers, x);
                    record(t, relative_error(got, want));
                }
            }
        }
    }
    return t;
}

PropertyTally check_receptive_field(std::size_t cases, std::uint64_t seed) {
    PropertyTally t{"receptive-field", 0, 0, 0.0, 0.0};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const Hypergraph h = random_hypergraph(rng, 30, 20, 2, 6);
        const SparseAdjacency a = propagation_adjacency(h);
        for (std::size_t layers = 1; layers <= 3; ++layers) {
            for (double alpha : {0.0, 0.3}) {
                const DenseMatrix s = materialize_operator(a, {layers, alpha});
                const auto support = operator_support(s, 0.0);
                std::set<std::pair<std::size_t, std::size_t>> got(support.begin(), support.end());
                std::set<std::pair<std::size_t, std::size_t>> want;
                for (std::size_t i = 0; i < h.num_nodes(); ++i)
                    for (NodeId j : khop_neighbours(h, static_cast<NodeId>(i), layers)) want.emplace(i, j);
                std::vector<std::pair<std::size_t, std::size_t>> diff;
                std::set_symmetric_difference(got.begin(), got.end(), want.begin(), want.end(),
                                              std::back_inserter(diff));
                record(t, static_cast<double>(diff.size()));
            }
        }
    }
    return t;
}

PropertyTally check_oversmoothing_limit(std::size_t cases, std::uint64_t seed) {
    PropertyTally t{"oversmoothing-limit", 0, 0, 0.0, 1e-6};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const Hypergraph h = random_hypergraph(rng, 50, 40, 2, 6);
        const SparseAdjacency a = propagation_adjacency(h);
        const DenseMatrix x = random_features(rng, h.num_nodes(), 8);
        const PropagatedFeatures deep = propagate(a, x, {500, 0.3});
        record(t, relative_error(deep.matrix, closed_form_limit(a, x, 0.3)));
    }
    return t;
}

PropertyTally check_energy_minimum(std::size_t instances, std::size_t probes, std::uint64_t seed) {
    // Failure count is what matters; worst holds the largest F(out) - F(probe).
    PropertyTally t{"energy-minimum", 0, 0, -1e300, 0.0};
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t c = 0; c < instances; ++c) {
        const Hypergraph h = random_hypergraph(rng, 50, 40, 2, 6);
        const SparseAdjacency a = propagation_adjacency(h);
        const DenseMatrix x = random_features(rng, h.num_nodes(), 8);
        const DenseMatrix out = propagate(a, x, {500, 0.3}).matrix;
        const double f_out = energy(a, out, x, 0.3);
        for (std::size_t p = 0; p < probes; ++p) {
            // Alternate between unrelated probes and small perturbations of the output.
            DenseMatrix probe = random_features(rng, x.rows(), x.cols());
            if (p % 2 == 1) {
                auto pd = probe.data();
                auto od = out.data();
                for (std::size_t k = 0; k < pd.size(); ++k) pd[k] = od[k] + 1e-3 * pd[k];
            }
            const double gap = f_out - energy(a, probe, x, 0.3);
            ++t.checks;
            t.worst = std::max(t.worst, gap);
            if (gap > 0.0) ++t.failures;
        }
    }
    return t;
}

PropertyTally check_recurrence(std::size_t cases, std::uint64_t seed) {
    PropertyTally t{"recurrence", 0, 0, 0.0, 1e-12};
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> layer_dist(0, 10);
    for (std::size_t c = 0; c < cases; ++c) {
        const Hypergraph h = random_hypergraph(rng, 50, 40, 2, 6);
        const SparseAdjacency a = propagation_adjacency(h);
        const DenseMatrix x = random_features(rng, h.num_nodes(), 5);
        for (double alpha : {0.0, 0.3, 0.7}) {
            const PropagationConfig cfg{layer_dist(rng), alpha};
            const DenseMatrix want = matmul(materialize_operator(a, cfg), x);
            record(t, relative_error(propagate(a, x, cfg).matrix, want));
        }
    }
    return t;
}

std::vector<PropertyTally> verify_all(std::size_t cases, std::uint64_t seed) {
    return {check_unification(cases, seed), check_receptive_field(cases, seed + 1),
            check_oversmoothing_limit(std::max<std::size_t>(1, cases / 5), seed + 2),
            check_energy_minimum(std::max<std::size_t>(1, cases / 5), 100, seed + 3),
            check_recurrence(cases, seed + 4)};
}

}  // namespace tfhnn
