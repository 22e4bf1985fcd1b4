#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/synthetic.hpp"
#include "tfhnn/tasks.hpp"

using namespace tfhnn;
using doctest::Approx;

TEST_CASE("splits") {
    const Split s = make_split(4, {}, 1);
    CHECK(s.train.size() == 2);
    CHECK(s.val.size() == 1);
    CHECK(s.test.size() == 1);
    const Split again = make_split(4, {}, 1);
    CHECK(again.train == s.train);
    CHECK(again.val == s.val);
    CHECK(again.test == s.test);
    CHECK_THROWS_AS(make_split(0, {}, 1), DomainError);
    CHECK_THROWS_AS(make_split(10, {0.5, 0.5, 0.5}, 1), DomainError);

    Rng rng(2);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 500)(rng);
        const Split sp = make_split(n, {}, rng());
        CHECK(sp.val.size() == n / 4);
        CHECK(sp.test.size() == n / 4);
        std::vector<std::size_t> all = sp.train;
        all.insert(all.end(), sp.val.begin(), sp.val.end());
        all.insert(all.end(), sp.test.begin(), sp.test.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> want(n);
        std::iota(want.begin(), want.end(), std::size_t{0});
        CHECK(all == want);
    }
}

TEST_CASE("node splits cover only labeled nodes") {
    LabelVector y{{0, -1, 1, 1, -1, 0, 1, 0}, 2};
    const Split s = make_node_split(y, {}, 3);
    std::set<std::size_t> seen;
    for (const auto* part : {&s.train, &s.val, &s.test})
        for (std::size_t i : *part) {
            CHECK(y.is_labeled(i));
            seen.insert(i);
        }
    CHECK(seen.size() == 6);
}

TEST_CASE("kept count rounds half to even") {
    CHECK(kept_count(0.5, 4) == 2);
    CHECK(kept_count(0.5, 5) == 2);
    CHECK(kept_count(0.5, 3) == 2);
    CHECK(kept_count(0.5, 7) == 4);
    CHECK(kept_count(0.5, 1) == 0);
    CHECK(kept_count(1.0, 6) == 6);
}

TEST_CASE("negative samples keep exactly the rounded share of their source") {
    const Hypergraph small(10, {{0, 1, 2, 3}});
    const auto d = negative_sample(small, 0.5, 5, 1);
    CHECK(d.negatives.size() == 5);
    for (const auto& neg : d.negatives) {
        CHECK(neg.kept.size() == 2);
        CHECK(neg.nodes.size() == 4);
        std::vector<NodeId> inter;
        std::set_intersection(neg.nodes.begin(), neg.nodes.end(), small.edge(0).begin(), small.edge(0).end(),
                              std::back_inserter(inter));
        CHECK(inter == neg.kept);
    }
    CHECK_THROWS_AS(negative_sample(small, 1.0, 1, 1), SamplingError);
    CHECK_THROWS_AS(negative_sample(Hypergraph(5, {{0, 1, 2, 3}}), 0.25, 1, 1), SamplingError);
    try {
        negative_sample(Hypergraph(5, {{0, 1}, {0, 1, 2, 3}}), 0.25, 1, 1);
    } catch (const SamplingError& e) {
        CHECK(std::string(e.what()).find("hyperedge 1") != std::string::npos);
    }

    Rng rng(2);
    for (int c = 0; c < 20; ++c) {
        const Hypergraph h = random_hypergraph(rng, 60, 30, 2, 6);
        if (h.num_nodes() < 12) continue;
        const auto data = negative_sample(h, 0.5, 5, rng());
        CHECK(data.negatives.size() == 5 * h.num_edges());
        const std::set<std::vector<NodeId>> positives(data.positives.begin(), data.positives.end());
        for (const auto& neg : data.negatives) {
            const auto& src = data.positives[neg.source];
            CHECK(neg.nodes.size() == src.size());
            CHECK(std::is_sorted(neg.nodes.begin(), neg.nodes.end()));
            std::vector<NodeId> inter;
            std::set_intersection(neg.nodes.begin(), neg.nodes.end(), src.begin(), src.end(),
                                  std::back_inserter(inter));
            CHECK(inter.size() == kept_count(0.5, src.size()));
            CHECK(inter == neg.kept);
            CHECK_FALSE(positives.contains(neg.nodes));
        }
    }
}

TEST_CASE("negative sampling draws kept members uniformly") {
    const Hypergraph h(20, {{0, 1, 2, 3}});
    const auto d = negative_sample(h, 0.5, 6000, 4);
    std::vector<double> freq(4, 0.0);
    for (const auto& neg : d.negatives)
        for (NodeId v : neg.kept) freq[v] += 1.0;
    for (double f : freq) CHECK(f / 6000.0 == Approx(0.5).epsilon(0.05));
}

TEST_CASE("AUC") {
    const std::vector<double> s{0.9, 0.8, 0.2, 0.1}, t{1, 1, 0, 0};
    CHECK(auc(s, t) == 1.0);
    const std::vector<double> same(6, 0.3), tt{1, 0, 1, 0, 1, 0};
    CHECK(auc(same, tt) == 0.5);
    CHECK_THROWS_AS(auc(s, std::vector<double>(4, 1.0)), DomainError);

    Rng rng(5);
    for (int c = 0; c < 100; ++c) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 300)(rng);
        const int levels = c % 3 == 0 ? 3 : 1000000;
        std::vector<double> scores(k), targets(k);
        for (std::size_t i = 0; i < k; ++i) {
            scores[i] = std::uniform_int_distribution<int>(0, levels)(rng) / 7.0;
            targets[i] = i % 2 == 0 ? 1.0 : 0.0;
        }
        std::shuffle(targets.begin(), targets.end(), rng);
        CHECK(std::abs(auc(scores, targets) - oracle::pairwise_auc(scores, targets)) <= 1e-12);
    }

    double mean = 0.0;
    for (int c = 0; c < 50; ++c) {
        std::vector<double> scores(400), targets(400);
        for (std::size_t i = 0; i < 400; ++i) {
            scores[i] = std::normal_distribution<double>(0.0, 1.0)(rng);
            targets[i] = i < 100 ? 1.0 : 0.0;
        }
        mean += auc(scores, targets) / 50.0;
    }
    CHECK(mean == Approx(0.5).epsilon(0.05));
}

TEST_CASE("relative time") {
    CHECK(relative_time(10, 5) == 2.0);
    CHECK(relative_time(5, 5) == 1.0);
    CHECK_THROWS_AS(relative_time(1, 0), DomainError);
    CHECK(Metrics{}.relative_time == 1.0);
}

TEST_CASE("deep-set scores are order invariant") {
    Rng rng(6);
    const auto x = oracle::random_matrix(rng, 12, 5);
    PropagatedFeatures pf{x, {0, 0.0}, {}};
    const std::vector<std::size_t> dims{5, 8, 1};
    const MlpParams p = MlpParams::init(dims, rng);

    std::vector<NodeId> cand{3, 7, 1, 10};
    const double base = deep_set_score(p, pf, cand);
    do {
        CHECK(deep_set_score(p, pf, cand) == base);
    } while (std::next_permutation(cand.begin(), cand.end()));

    const std::vector<NodeId> single{4};
    DenseMatrix row(1, 5);
    std::copy(x.row(4).begin(), x.row(4).end(), row.row(0).begin());
    Rng unused(0);
    CHECK(deep_set_score(p, pf, single) == mlp_forward(p, row, 0.0, Mode::eval, unused)(0, 0));

    // Nodes 0..2 and 5..7 carry the same rows in a different order.
    DenseMatrix twin = x;
    for (std::size_t j = 0; j < 5; ++j) {
        twin(5, j) = x(2, j);
        twin(6, j) = x(0, j);
        twin(7, j) = x(1, j);
    }
    PropagatedFeatures tf{twin, {0, 0.0}, {}};
    const std::vector<NodeId> left{0, 1, 2}, right{5, 6, 7};
    CHECK(deep_set_score(p, tf, left) == deep_set_score(p, tf, right));

    CHECK_THROWS_AS(deep_set_score(p, pf, std::vector<NodeId>{}), DomainError);
    CHECK_THROWS_AS(deep_set_score(p, pf, std::vector<NodeId>{12}), BoundsError);
}

TEST_CASE("scoped labels hide test labels from training") {
    LabelVector y{{0, 1, 0, 1, 0, 1, 0, 1}, 2};
    const Split s{{0, 1, 2, 3}, {4, 5}, {6, 7}, 0};
    const ScopedLabels scoped(y, s);
    for (std::size_t i : {4u, 5u, 6u, 7u}) CHECK(scoped.training_view()[i] == LabelVector::kUnlabeled);
    for (std::size_t i : {0u, 1u, 2u, 3u}) CHECK(scoped.training_view()[i] == y.labels[i]);
    CHECK(scoped.validation_accuracy(std::vector<std::int32_t>{0, 0}) == 0.5);
    CHECK(scoped.test_reads() == 0);
    CHECK(scoped.test_accuracy(std::vector<std::int32_t>{0, 1}) == 1.0);
    CHECK(scoped.test_reads() == 1);
}

namespace {

PlantedInstance separable(std::uint64_t seed) {
    PlantedConfig cfg;
    cfg.n = 200;
    cfg.m = 150;
    cfg.classes = 2;
    cfg.p_in = 1.0;
    cfg.feature_dim = 4;
    cfg.feature_noise = 0.0;
    cfg.seed = seed;
    return generate_planted(cfg);
}

TrainConfig quick(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.learning_rate = 0.01;
    cfg.hidden = 16;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("node classification on a separable instance") {
    const auto inst = separable(1);
    const Split s = make_node_split(inst.labels, {}, 1);
    const auto r = train_node_classifier(inst.features, inst.labels, s, quick(1));
    CHECK(*r.metrics.accuracy == 1.0);
    CHECK(r.val_history.size() == 60);
    CHECK(r.metrics.train_seconds >= 0.0);
    CHECK(r.metrics.best_epoch == static_cast<std::size_t>(
                                      std::max_element(r.val_history.begin(), r.val_history.end()) -
                                      r.val_history.begin()));
}

TEST_CASE("node classification with labels independent of features is at chance") {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto x = oracle::random_matrix(rng, 200, 6);
        LabelVector y;
        y.num_classes = 2;
        for (std::size_t i = 0; i < 200; ++i) y.labels.push_back(i % 2 == 0 ? 0 : 1);
        std::shuffle(y.labels.begin(), y.labels.end(), rng);
        const Split s = make_node_split(y, {}, seed);
        mean += *train_node_classifier(x, y, s, quick(seed)).metrics.accuracy / 20.0;
    }
    CHECK(mean == Approx(0.5).epsilon(0.2));
}

TEST_CASE("reported accuracy belongs to the best validation epoch") {
    const auto inst = separable(2);
    const Split s = make_node_split(inst.labels, {}, 2);
    TrainConfig cfg = quick(2);
    const auto r = train_node_classifier(inst.features, inst.labels, s, cfg);
    Rng unused(0);
    const auto logits = mlp_forward(r.params, inst.features, 0.0, Mode::eval, unused);
    const auto val_pred = argmax_rows(logits, s.val);
    const auto test_pred = argmax_rows(logits, s.test);
    const ScopedLabels scoped(inst.labels, s);
    CHECK(scoped.validation_accuracy(val_pred) == r.val_history[r.metrics.best_epoch]);
    CHECK(scoped.test_accuracy(test_pred) == *r.metrics.accuracy);
}

TEST_CASE("hyperlink training refuses features that saw test hyperedges") {
    PlantedConfig pc;
    pc.n = 120;
    pc.m = 80;
    pc.classes = 3;
    pc.feature_dim = 6;
    pc.seed = 3;
    const auto inst = generate_planted(pc);
    const auto data = negative_sample(inst.hypergraph, 0.5, 5, 3);
    const Split s = make_split(data.positives.size(), {}, 3);

    const auto leaky = propagate(propagation_adjacency(inst.hypergraph), inst.features, {2, 0.3});
    CHECK_THROWS_AS(train_hyperlink_predictor(leaky, data, s, quick(3)), ContractViolation);

    const Hypergraph visible = message_passing_hypergraph(data, s);
    CHECK(visible.num_edges() == s.train.size() + s.val.size());
    for (std::size_t k : s.test) {
        bool present = false;
        for (EdgeId e = 0; e < visible.num_edges(); ++e) {
            const auto ed = visible.edge(e);
            present = present || std::vector<NodeId>(ed.begin(), ed.end()) == data.positives[k];
        }
        // A test hyperedge may coincide with a duplicate in train/val, never otherwise.
        if (present) {
            bool duplicated = false;
            for (std::size_t j : s.train) duplicated = duplicated || data.positives[j] == data.positives[k];
            for (std::size_t j : s.val) duplicated = duplicated || data.positives[j] == data.positives[k];
            CHECK(duplicated);
        }
    }

    const auto clean = propagate(propagation_adjacency(visible), inst.features, {2, 0.3});
    const auto r = train_hyperlink_predictor(clean, data, s, quick(3));
    CHECK(*r.metrics.auc >= 0.0);
    CHECK(*r.metrics.auc <= 1.0);
    const auto cands = candidates_for(data, s.test);
    CHECK(cands.members.size() == 6 * s.test.size());
}
