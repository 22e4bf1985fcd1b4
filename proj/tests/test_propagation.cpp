#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/propagation.hpp"
#include "tfhnn/synthetic.hpp"

using namespace tfhnn;
using doctest::Approx;

namespace {

const SparseAdjacency kTwoNode(2, {0, 2, 4}, {0, 1, 0, 1}, {2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3}, true);

}  // namespace

TEST_CASE("propagation special cases") {
    Rng rng(1);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto a = propagation_adjacency(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 4);
    CHECK(propagate(a, x, {0, 0.3}).matrix == x);
    CHECK(propagate(a, x, {0, 0.0}).matrix == x);

    const auto ea = oracle::to_eigen(a.to_dense());
    const auto sgc = propagate(a, x, {2, 0.0}).matrix;
    CHECK(oracle::rel_err(oracle::to_eigen(sgc), ea * ea * oracle::to_eigen(x)) < 1e-14);

    const auto one_step = propagate(kTwoNode, DenseMatrix::identity(2), {1, 0.0}).matrix;
    CHECK(one_step == kTwoNode.to_dense());

    CHECK_THROWS_AS(propagate(a, oracle::random_matrix(rng, h.num_nodes() + 1, 2), {1, 0.1}), DimensionError);
    CHECK_THROWS_AS(propagate(a, x, {1, 1.0}), DomainError);
    CHECK_THROWS_AS(propagate(a, x, {1, -0.1}), DomainError);
}

TEST_CASE("materialised operator") {
    Rng rng(2);
    const Hypergraph h = random_hypergraph(rng, 15, 8, 2, 4);
    const auto a = propagation_adjacency(h);
    CHECK(materialize_operator(a, {0, 0.4}) == DenseMatrix::identity(a.size()));
    const auto s1 = oracle::to_eigen(materialize_operator(a, {1, 0.5}));
    const oracle::MatrixXd want = 0.5 * oracle::to_eigen(a.to_dense()) + 0.5 * oracle::MatrixXd::Identity(s1.rows(), s1.cols());
    CHECK((s1 - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(materialize_operator(a, {2, 0.1}, a.size() - 1), ResourceError);
}

TEST_CASE("operator equals the spectral polynomial of the normalised adjacency") {
    Rng rng(3);
    for (int c = 0; c < 25; ++c) {
        const Hypergraph h = random_hypergraph(rng, 30, 15, 2, 6);
        const auto a = propagation_adjacency(h);
        const auto ea = oracle::to_eigen(a.to_dense());
        for (std::size_t layers : {1u, 3u, 7u})
            for (double alpha : {0.0, 0.2, 0.65}) {
                const auto s = oracle::to_eigen(materialize_operator(a, {layers, alpha}));
                CHECK(oracle::rel_err(s, oracle::spectral_operator(ea, layers, alpha)) < 1e-12);
            }
    }
}

TEST_CASE("recurrence equals operator times features") {
    Rng rng(4);
    for (int c = 0; c < 25; ++c) {
        const Hypergraph h = random_hypergraph(rng, 50, 30, 2, 6);
        const auto a = propagation_adjacency(h);
        const auto x = oracle::random_matrix(rng, h.num_nodes(), 6);
        for (std::size_t layers = 0; layers <= 10; layers += 2)
            for (double alpha : {0.0, 0.3, 0.7}) {
                const auto got = oracle::to_eigen(propagate(a, x, {layers, alpha}).matrix);
                const oracle::MatrixXd want = oracle::to_eigen(materialize_operator(a, {layers, alpha})) * oracle::to_eigen(x);
                CHECK(oracle::rel_err(got, want) <= 1e-12);
            }
    }
}

TEST_CASE("propagation is linear in the features") {
    Rng rng(5);
    const Hypergraph h = random_hypergraph(rng, 40, 20, 2, 6);
    const auto a = propagation_adjacency(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 3);
    const auto y = oracle::random_matrix(rng, h.num_nodes(), 3);
    const auto combo = oracle::from_eigen(2.5 * oracle::to_eigen(x) - 0.75 * oracle::to_eigen(y));
    const PropagationConfig cfg{6, 0.25};
    const auto lhs = oracle::to_eigen(propagate(a, combo, cfg).matrix);
    const oracle::MatrixXd rhs =
        2.5 * oracle::to_eigen(propagate(a, x, cfg).matrix) - 0.75 * oracle::to_eigen(propagate(a, y, cfg).matrix);
    CHECK(oracle::rel_err(lhs, rhs) < 1e-13);
}

TEST_CASE("operator support is the L-hop relation") {
    const Hypergraph path(3, {{0, 1}, {1, 2}});
    const auto a = propagation_adjacency(path);
    auto s1 = operator_support(materialize_operator(a, {1, 0.3}), 0.0);
    CHECK(std::find(s1.begin(), s1.end(), std::pair<std::size_t, std::size_t>{0, 1}) != s1.end());
    CHECK(std::find(s1.begin(), s1.end(), std::pair<std::size_t, std::size_t>{1, 2}) != s1.end());
    CHECK(std::find(s1.begin(), s1.end(), std::pair<std::size_t, std::size_t>{0, 2}) == s1.end());
    auto s2 = operator_support(materialize_operator(a, {2, 0.3}), 0.0);
    CHECK(std::find(s2.begin(), s2.end(), std::pair<std::size_t, std::size_t>{0, 2}) != s2.end());
    CHECK(operator_support(materialize_operator(a, {0, 0.3}), 0.0).empty());
}

TEST_CASE("energy") {
    Rng rng(6);
    const auto x0 = oracle::random_matrix(rng, 2, 3);
    const SparseAdjacency identity(2, {0, 1, 2}, {0, 1}, {1.0, 1.0}, true);
    CHECK(energy(identity, x0, x0, 0.3) == Approx(0.0).epsilon(1e-15));
    const DenseMatrix zero(2, 3);
    const double norm2 = frobenius_norm(x0) * frobenius_norm(x0);
    CHECK(energy(kTwoNode, zero, x0, 0.3) == Approx(0.3 / 0.7 * norm2));
    CHECK_THROWS_AS(energy(kTwoNode, zero, x0, 0.0), DomainError);

    // Against tr(X^T (I - A) X) + a/(1-a) ||X - X0||^2 evaluated densely.
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto a = propagation_adjacency(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 4);
    const auto xv = oracle::random_matrix(rng, h.num_nodes(), 4);
    const auto ex = oracle::to_eigen(x), ev = oracle::to_eigen(xv);
    const oracle::MatrixXd lap = oracle::MatrixXd::Identity(ex.rows(), ex.rows()) - oracle::to_eigen(a.to_dense());
    const double want = (ex.transpose() * lap * ex).trace() + 0.4 / 0.6 * (ex - ev).squaredNorm();
    CHECK(energy(a, x, xv, 0.4) == Approx(want).epsilon(1e-12));
}

TEST_CASE("closed-form limit") {
    Rng rng(7);
    const auto x = oracle::random_matrix(rng, 2, 3);
    const SparseAdjacency identity(2, {0, 1, 2}, {0, 1}, {1.0, 1.0}, true);
    CHECK(oracle::rel_err(oracle::to_eigen(closed_form_limit(identity, x, 0.3)), oracle::to_eigen(x)) < 1e-14);
    CHECK(oracle::rel_err(oracle::to_eigen(closed_form_limit(kTwoNode, x, 1.0 - 1e-12)), oracle::to_eigen(x)) < 1e-9);

    for (int c = 0; c < 10; ++c) {
        const Hypergraph h = random_hypergraph(rng, 50, 40, 2, 6);
        const auto a = propagation_adjacency(h);
        const auto xr = oracle::random_matrix(rng, h.num_nodes(), 8);
        const auto want = oracle::spectral_limit(oracle::to_eigen(a.to_dense()), oracle::to_eigen(xr), 0.3);
        const auto dense = closed_form_limit(a, xr, 0.3, {LimitSolver::dense});
        const auto cg = closed_form_limit(a, xr, 0.3, {LimitSolver::conjugate_gradient});
        CHECK(oracle::rel_err(oracle::to_eigen(dense), want) < 1e-12);
        CHECK(oracle::rel_err(oracle::to_eigen(cg), want) < 1e-9);
        CHECK(oracle::rel_err(oracle::to_eigen(propagate(a, xr, {500, 0.3}).matrix), want) <= 1e-6);

        const double f_star = energy(a, dense, xr, 0.3);
        for (int p = 0; p < 20; ++p) CHECK(f_star <= energy(a, oracle::random_matrix(rng, xr.rows(), 8), xr, 0.3));
    }
    CHECK_THROWS_AS(closed_form_limit(kTwoNode, x, 0.0), DomainError);
}

TEST_CASE("distance to the limit shrinks geometrically with depth") {
    Rng rng(8);
    const Hypergraph h = random_hypergraph(rng, 40, 30, 2, 6);
    const auto a = propagation_adjacency(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 4);
    const double alpha = 0.3;
    const auto limit = closed_form_limit(a, x, alpha);
    double prev = frobenius_distance(x, limit);
    for (std::size_t layers = 1; layers <= 40; ++layers) {
        const double d = frobenius_distance(propagate(a, x, {layers, alpha}).matrix, limit);
        CHECK(d <= (1.0 - alpha) * prev * (1.0 + 1e-9) + 1e-13);
        prev = d;
    }
}

TEST_CASE("propagated feature files keep provenance") {
    Rng rng(9);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto a = propagation_adjacency(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 3);
    const auto pf = propagate(a, x, {3, 0.2});
    CHECK(pf.provenance.features_hash == hash_matrix(x));
    CHECK(pf.provenance.adjacency_hash == a.content_hash());
    CHECK(propagate(a, x, {3, 0.2}).provenance.combined(pf.config) == pf.provenance.combined(pf.config));
    CHECK(pf.provenance.combined({3, 0.2}) != pf.provenance.combined({4, 0.2}));

    const auto path = std::filesystem::temp_directory_path() / "tfhnn_prop.tfhn";
    save_propagated(path, pf);
    const auto back = load_propagated(path);
    CHECK(back.matrix == pf.matrix);
    CHECK(back.provenance == pf.provenance);
    CHECK(back.config.layers == 3);
    CHECK(back.config.alpha == 0.2);
    CHECK(load_matrix(path) == pf.matrix);
    std::filesystem::remove(path);
}
