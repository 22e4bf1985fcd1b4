#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/reference_hnns.hpp"
#include "tfhnn/synthetic.hpp"

using namespace tfhnn;

TEST_CASE("single-layer and zero-layer cases") {
    Rng rng(1);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 3);
    const auto ws = oracle::star_norm(oracle::incidence(h));
    const auto one = run_linearized({ModelKind::AllDeepSets, 0.0, 1}, h, x);
    CHECK(oracle::rel_err(oracle::to_eigen(one), ws * oracle::to_eigen(x)) < 1e-14);
    for (ModelKind kind : {ModelKind::UniGCNII, ModelKind::DeepHGNN, ModelKind::EDHNN})
        CHECK(run_linearized({kind, 0.3, 0}, h, x) == x);
    CHECK(run_linearized({ModelKind::AllDeepSets, 0.0, 0}, h, x) == x);
}

TEST_CASE("ED-HNN two layers against the explicit polynomial") {
    Rng rng(2);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 3);
    const auto ws = oracle::star_norm(oracle::incidence(h));
    const auto got = run_linearized({ModelKind::EDHNN, 0.5, 2}, h, x);
    CHECK(oracle::rel_err(oracle::to_eigen(got), oracle::polynomial(ws, 0.5, 2, oracle::to_eigen(x))) < 1e-13);
}

TEST_CASE("unified pairs") {
    Rng rng(3);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto H = oracle::incidence(h);
    auto dense = [](const SparseAdjacency& w) { return oracle::to_eigen(w.to_dense()); };

    const auto ads = unified_equivalent({ModelKind::AllDeepSets, 0.0, 2}, h);
    CHECK(ads.alpha == 0.0);
    CHECK((dense(ads.w) - oracle::star_norm(H)).cwiseAbs().maxCoeff() < 1e-14);

    const auto ed = unified_equivalent({ModelKind::EDHNN, 0.3, 2}, h);
    CHECK(ed.alpha == 0.3);
    CHECK((dense(ed.w) - oracle::star_norm(H)).cwiseAbs().maxCoeff() < 1e-14);

    const auto uni = unified_equivalent({ModelKind::UniGCNII, 0.2, 2}, h);
    CHECK(uni.alpha == 0.2);
    CHECK((dense(uni.w) - oracle::unignn(H, 1.0)).cwiseAbs().maxCoeff() < 1e-14);

    const auto deep = unified_equivalent({ModelKind::DeepHGNN, 0.2, 2}, h);
    CHECK(deep.alpha == 0.2);
    CHECK((dense(deep.w) - oracle::deephgnn(H, 1.0)).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(unified_equivalent({ModelKind::AllDeepSets, 0.3, 2}, h), DomainError);
    CHECK_THROWS_AS(run_linearized({ModelKind::UniGCNII, 1.0, 2}, h, oracle::random_matrix(rng, h.num_nodes(), 2)),
                    DomainError);
}

TEST_CASE("every linearized model collapses onto the unified polynomial") {
    Rng rng(4);
    for (int c = 0; c < 20; ++c) {
        const Hypergraph h = random_hypergraph(rng, 30, 20, 2, 6);
        const auto x = oracle::random_matrix(rng, h.num_nodes(), 4);
        const auto H = oracle::incidence(h);
        for (ModelKind kind : {ModelKind::UniGCNII, ModelKind::DeepHGNN, ModelKind::AllDeepSets, ModelKind::EDHNN})
            for (double g : {0.1, 0.3, 0.5})
                for (std::size_t layers = 1; layers <= 5; ++layers) {
                    const double gamma = kind == ModelKind::AllDeepSets ? 0.0 : g;
                    const LinearizedModelSpec spec{kind, gamma, layers};
                    const auto got = oracle::to_eigen(run_linearized(spec, h, x));
                    CHECK(oracle::rel_err(got, oracle::to_eigen(unified_polynomial(unified_equivalent(spec, h), layers, x))) <=
                          1e-9);
                    // Independent of the library's matrices: dense incidence formulas.
                    oracle::MatrixXd w;
                    switch (kind) {
                        case ModelKind::UniGCNII: w = oracle::unignn(H, 1.0); break;
                        case ModelKind::DeepHGNN: w = oracle::deephgnn(H, 1.0); break;
                        default: w = oracle::star_norm(H); break;
                    }
                    CHECK(oracle::rel_err(got, oracle::polynomial(w, gamma, layers, oracle::to_eigen(x))) <= 1e-9);
                }
    }
}

TEST_CASE("gamma zero is plain power iteration") {
    Rng rng(5);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 2);
    const auto H = oracle::incidence(h);
    const auto w = oracle::deephgnn(H, 1.0);
    const auto got = run_linearized({ModelKind::DeepHGNN, 0.0, 3}, h, x);
    CHECK(oracle::rel_err(oracle::to_eigen(got), w * w * w * oracle::to_eigen(x)) < 1e-13);
}
