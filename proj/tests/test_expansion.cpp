#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/synthetic.hpp"

using namespace tfhnn;
using doctest::Approx;

namespace {

// Every stored entry, and every unstored one, against the dense oracle.
double max_abs_diff(const SparseAdjacency& w, const oracle::MatrixXd& want) {
    return (oracle::to_eigen(w.to_dense()) - want).cwiseAbs().maxCoeff();
}

bool support_is_cooccurrence(const SparseAdjacency& w, const Hypergraph& h) {
    const oracle::MatrixXd co = oracle::incidence(h) * oracle::incidence(h).transpose();
    for (std::size_t i = 0; i < h.num_nodes(); ++i)
        for (std::size_t j = 0; j < h.num_nodes(); ++j) {
            if (i == j) continue;
            const bool shared = co(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0;
            if ((w.at(i, j) > 0.0) != shared) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("clique expansion hand values") {
    const auto w1 = weighted_clique_expansion(Hypergraph(3, {{0, 1, 2}}));
    CHECK(w1.at(0, 1) == Approx(1.0 / 3));
    CHECK(w1.at(0, 2) == Approx(1.0 / 3));
    CHECK(w1.at(1, 2) == Approx(1.0 / 3));
    CHECK(w1.at(0, 0) == 0.0);

    const auto w2 = weighted_clique_expansion(Hypergraph(3, {{0, 1, 2}, {0, 1}}));
    CHECK(w2.at(0, 1) == Approx(5.0 / 6));
    CHECK(w2.at(0, 2) == Approx(1.0 / 3));

    const auto w3 = weighted_clique_expansion(Hypergraph(4, {{0, 1}, {2, 3}}));
    CHECK(w3.at(0, 2) == 0.0);
    CHECK(w3.symmetric());
}

TEST_CASE("baseline expansion hand values") {
    const Hypergraph pair(2, {{0, 1}});
    CHECK(unignn_expansion(pair, 0.5).at(0, 1) == Approx(0.25));
    CHECK(deephgnn_expansion(pair, 0.5).at(0, 1) == Approx(0.25));
    const auto ws = star_norm_expansion(pair);
    CHECK(ws.at(0, 1) == Approx(0.5));
    CHECK(ws.at(0, 0) == Approx(0.5));
    const auto single = star_norm_expansion(Hypergraph(1, {{0}}));
    CHECK(single.at(0, 0) == 1.0);
    CHECK(single.nnz() == 1);

    CHECK_THROWS_AS(unignn_expansion(pair, 0.0), DomainError);
    CHECK_THROWS_AS(unignn_expansion(pair, 1.0), DomainError);
    CHECK_THROWS_AS(deephgnn_expansion(pair, -0.1), DomainError);

    Rng rng(1);
    const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
    const auto near_one = unignn_expansion(h, 1.0 - 1e-12);
    for (std::size_t i = 0; i < h.num_nodes(); ++i)
        for (double v : near_one.row_values(i)) CHECK(v < 1e-11);
}

TEST_CASE("every expansion matches its dense incidence formula") {
    Rng rng(2);
    for (int c = 0; c < 40; ++c) {
        const Hypergraph h = random_hypergraph(rng, 25, 15, 1, 6);
        const auto H = oracle::incidence(h);
        CHECK(max_abs_diff(weighted_clique_expansion(h), oracle::clique_weights(H)) < 1e-12);
        CHECK(max_abs_diff(unignn_expansion(h, 0.3), oracle::unignn(H, 0.7)) < 1e-12);
        CHECK(max_abs_diff(deephgnn_expansion(h, 0.3), oracle::deephgnn(H, 0.7)) < 1e-12);
        CHECK(max_abs_diff(star_norm_expansion(h), oracle::star_norm(H)) < 1e-12);
    }
}

TEST_CASE("support, symmetry and row sums") {
    Rng rng(3);
    for (int c = 0; c < 40; ++c) {
        const Hypergraph h = random_hypergraph(rng, 25, 15, 2, 6);
        const auto wc = weighted_clique_expansion(h);
        const auto wu = unignn_expansion(h, 0.4);
        const auto wd = deephgnn_expansion(h, 0.4);
        const auto ws = star_norm_expansion(h);
        CHECK(support_is_cooccurrence(wc, h));
        CHECK(support_is_cooccurrence(wu, h));
        CHECK(support_is_cooccurrence(wd, h));
        CHECK(support_is_cooccurrence(ws, h));
        CHECK(wc.is_numerically_symmetric());
        CHECK(wd.is_numerically_symmetric());
        for (std::size_t i = 0; i < h.num_nodes(); ++i) {
            if (h.incident_edges(static_cast<NodeId>(i)).empty()) continue;
            double row = 0.0;
            for (double v : ws.row_values(i)) row += v;
            CHECK(row == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("clique weights never decrease when a hyperedge is added") {
    Rng rng(4);
    for (int c = 0; c < 30; ++c) {
        const Hypergraph h = random_hypergraph(rng, 20, 10, 2, 5);
        auto edges = h.edge_lists();
        edges.push_back({0, static_cast<NodeId>(h.num_nodes() - 1)});
        const Hypergraph bigger(h.num_nodes(), edges);
        const auto before = weighted_clique_expansion(h).to_dense();
        const auto after = weighted_clique_expansion(bigger).to_dense();
        for (std::size_t t = 0; t < before.size(); ++t) CHECK(after.data()[t] >= before.data()[t]);
    }
}

TEST_CASE("self-loop normalisation") {
    const SparseAdjacency w(2, {0, 1, 2}, {1, 0}, {0.5, 0.5}, true);
    const auto a = normalize_with_self_loops(w);
    CHECK(a.at(0, 0) == Approx(2.0 / 3));
    CHECK(a.at(0, 1) == Approx(1.0 / 3));
    CHECK(a.at(1, 1) == Approx(2.0 / 3));

    const SparseAdjacency zero(3, {0, 0, 0, 0}, {}, {}, true);
    const auto id = normalize_with_self_loops(zero).to_dense();
    CHECK(id == DenseMatrix::identity(3));

    const SparseAdjacency asym(2, {0, 1, 1}, {1}, {0.5}, false);
    CHECK_THROWS_AS(normalize_with_self_loops(asym), ContractViolation);
    const SparseAdjacency diag(2, {0, 1, 1}, {0}, {0.5}, true);
    CHECK_THROWS_AS(normalize_with_self_loops(diag), ContractViolation);
}

TEST_CASE("normalised operator: dense formula, spectrum and degree eigenvector") {
    Rng rng(5);
    for (int c = 0; c < 30; ++c) {
        const Hypergraph h = random_hypergraph(rng, 20, 12, 2, 5);
        const auto W = oracle::clique_weights(oracle::incidence(h));
        const auto a = propagation_adjacency(h);
        CHECK(max_abs_diff(a, oracle::normalized(W)) < 1e-12);
        CHECK(a.is_numerically_symmetric());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.at(i, i) > 0.0);

        Eigen::SelfAdjointEigenSolver<oracle::MatrixXd> es(oracle::to_eigen(a.to_dense()));
        CHECK(es.eigenvalues().minCoeff() >= -1.0 - 1e-12);
        CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);

        const oracle::VectorXd v =
            (W + oracle::MatrixXd::Identity(W.rows(), W.cols())).rowwise().sum().cwiseSqrt();
        const oracle::VectorXd av = oracle::to_eigen(a.to_dense()) * v;
        CHECK((av - v).norm() <= 1e-12 * v.norm());
    }
}

TEST_CASE("sparse multiply and triplet export") {
    Rng rng(6);
    const Hypergraph h = random_hypergraph(rng, 15, 8, 2, 4);
    const auto w = star_norm_expansion(h);
    const auto x = oracle::random_matrix(rng, h.num_nodes(), 3);
    CHECK(oracle::rel_err(oracle::to_eigen(w.multiply(x)), oracle::to_eigen(w.to_dense()) * oracle::to_eigen(x)) <
          1e-14);
    CHECK(w.content_hash() == star_norm_expansion(h).content_hash());
    CHECK(w.content_hash() != w.scaled(0.5).content_hash());

    const auto path = std::filesystem::temp_directory_path() / "tfhnn_triplets.txt";
    w.write_triplets(path);
    std::ifstream in(path);
    std::size_t i = 0, j = 0, count = 0;
    double v = 0.0;
    while (in >> i >> j >> v) {
        CHECK(v == Approx(w.at(i, j)).epsilon(1e-15));
        ++count;
    }
    CHECK(count == w.nnz());
    std::filesystem::remove(path);
}
