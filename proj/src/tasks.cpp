#include "tfhnn/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "sampling.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/expansion.hpp"
#include "tfhnn/simd/kernels.hpp"

namespace tfhnn {

Split make_split(std::size_t universe_size, const SplitRatios& ratios, std::uint64_t seed) {
    if (universe_size == 0) throw DomainError("make_split: empty universe");
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw DomainError("make_split: ratios must be nonnegative and sum to 1");
    std::vector<std::size_t> order(universe_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = static_cast<double>(universe_size);
    const auto n_val = static_cast<std::size_t>(std::floor(ratios.val * n));
    const auto n_test = static_cast<std::size_t>(std::floor(ratios.test * n));
    const std::size_t n_train = universe_size - n_val - n_test;

    Split s;
    s.seed = seed;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    return s;
}

Split make_node_split(const LabelVector& labels, const SplitRatios& ratios, std::uint64_t seed) {
    const auto labeled = labels.labeled_indices();
    Split s = make_split(labeled.size(), ratios, seed);
    for (auto* part : {&s.train, &s.val, &s.test})
        for (auto& idx : *part) idx = labeled[idx];
    return s;
}

std::size_t kept_count(double alpha, std::size_t size) {
    // nearbyint honours the default round-to-nearest-even mode.
    return static_cast<std::size_t>(std::nearbyint(alpha * static_cast<double>(size)));
}

HyperlinkDataset negative_sample(const Hypergraph& h, double alpha, std::size_t beta,
                                 std::uint64_t seed) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("negative_sample: alpha must lie in [0,1]");
    HyperlinkDataset data;
    data.num_nodes = h.num_nodes();
    data.positives = h.edge_lists();
    data.corruption_alpha = alpha;
    data.ratio_beta = beta;
    const std::set<std::vector<NodeId>> positive_set(data.positives.begin(), data.positives.end());

    constexpr int kMaxTries = 100;
    Rng rng(seed);
    const std::size_t n = h.num_nodes();
    for (std::size_t k = 0; k < data.positives.size(); ++k) {
        const auto& e = data.positives[k];
        if (e.empty()) throw SamplingError("negative_sample: hyperedge " + std::to_string(k) + " is empty");
        const std::size_t keep = kept_count(alpha, e.size());
        const std::size_t fresh = e.size() - keep;
        if (n - e.size() < fresh)
            throw SamplingError("negative_sample: hyperedge " + std::to_string(k) + " needs " +
                                std::to_string(fresh) + " replacement nodes but only " +
                                std::to_string(n - e.size()) + " lie outside it");
        for (std::size_t b = 0; b < beta; ++b) {
            bool accepted = false;
            for (int attempt = 0; attempt < kMaxTries && !accepted; ++attempt) {
                NegativeHyperedge neg;
                neg.source = k;
                for (std::size_t idx : sampling::distinct_indices(e.size(), keep, rng))
                    neg.kept.push_back(e[idx]);
                neg.nodes = neg.kept;
                for (std::size_t r : sampling::distinct_indices(n - e.size(), fresh, rng))
                    neg.nodes.push_back(sampling::nth_outside(r, e));
                std::sort(neg.nodes.begin(), neg.nodes.end());
                if (positive_set.contains(neg.nodes)) continue;
                data.negatives.push_back(std::move(neg));
                accepted = true;
            }
            if (!accepted)
                throw SamplingError("negative_sample: hyperedge " + std::to_string(k) +
                                    " produced only positives after " + std::to_string(kMaxTries) +
                                    " draws");
        }
    }
    return data;
}

Hypergraph message_passing_hypergraph(const HyperlinkDataset& data, const Split& split) {
    std::vector<std::size_t> visible(split.train);
    visible.insert(visible.end(), split.val.begin(), split.val.end());
    std::sort(visible.begin(), visible.end());
    std::vector<std::vector<NodeId>> edges;
    edges.reserve(visible.size());
    for (std::size_t k : visible) {
        if (k >= data.positives.size()) throw BoundsError("split references a missing positive");
        edges.push_back(data.positives[k]);
    }
    return Hypergraph(data.num_nodes, edges);
}

std::uint64_t expected_adjacency_hash(const HyperlinkDataset& data, const Split& split) {
    return propagation_adjacency(message_passing_hypergraph(data, split)).content_hash();
}

namespace {

// Row pointers sorted lexicographically by content; summing in this order
// makes the mean independent of candidate order and node identity.
std::vector<const double*> canonical_rows(const FeatureMatrix& x, std::span<const NodeId> candidate) {
    std::vector<const double*> rows;
    rows.reserve(candidate.size());
    for (NodeId v : candidate) {
        if (v >= x.rows())
            throw BoundsError("candidate node " + std::to_string(v) + " >= n=" + std::to_string(x.rows()));
        rows.push_back(x.row(v).data());
    }
    const std::size_t d = x.cols();
    std::sort(rows.begin(), rows.end(), [d](const double* a, const double* b) {
        return std::lexicographical_compare(a, a + d, b, b + d);
    });
    return rows;
}

void mean_into(const FeatureMatrix& x, std::span<const NodeId> candidate, std::span<double> out) {
    if (candidate.empty()) throw DomainError("deep set candidate is empty");
    std::fill(out.begin(), out.end(), 0.0);
    const auto& k = simd::active();
    for (const double* r : canonical_rows(x, candidate)) k.axpy(1.0, r, out.data(), out.size());
    k.scale(1.0 / static_cast<double>(candidate.size()), out.data(), out.size());
}

}  // namespace

DenseMatrix aggregate_candidates(const FeatureMatrix& x, std::span<const std::vector<NodeId>> candidates) {
    DenseMatrix out(candidates.size(), x.cols());
    for (std::size_t c = 0; c < candidates.size(); ++c) mean_into(x, candidates[c], out.row(c));
    return out;
}

double deep_set_score(const MlpParams& p, const PropagatedFeatures& features,
                      std::span<const NodeId> candidate) {
    DenseMatrix pooled(1, features.matrix.cols());
    mean_into(features.matrix, candidate, pooled.row(0));
    Rng unused(0);
    const DenseMatrix logit = mlp_forward(p, pooled, 0.0, Mode::eval, unused);
    if (logit.cols() != 1) throw DimensionError("deep_set_score: head must have one output");
    return logit(0, 0);
}

double auc(std::span<const double> scores, std::span<const double> targets) {
    if (scores.size() != targets.size()) throw DimensionError("auc: size mismatch");
    std::size_t n_pos = 0;
    for (double t : targets) n_pos += t > 0.5 ? 1 : 0;
    const std::size_t n_neg = targets.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DomainError("auc: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double pos_rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        // 1-based ranks i+1 .. j+1 share their mean.
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t)
            if (targets[order[t]] > 0.5) pos_rank_sum += mid;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double relative_time(double t_f, double t_s) {
    if (!(t_s > 0.0)) throw DomainError("relative_time: denominator must be positive");
    return t_f / t_s;
}

ScopedLabels::ScopedLabels(const LabelVector& labels, const Split& split)
    : labels_(labels), split_(split), train_view_(labels.size(), LabelVector::kUnlabeled) {
    for (std::size_t i : split.train) {
        if (i >= labels.size() || !labels.is_labeled(i))
            throw DomainError("training split contains unlabeled node " + std::to_string(i));
        train_view_[i] = labels.labels[i];
    }
}

namespace {

double accuracy_against(const LabelVector& labels, std::span<const std::size_t> idx,
                        std::span<const std::int32_t> predicted) {
    if (predicted.size() != idx.size()) throw DimensionError("prediction count mismatch");
    if (idx.empty()) return 0.0;
    std::size_t hit = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) hit += labels.labels[idx[t]] == predicted[t] ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(idx.size());
}

}  // namespace

double ScopedLabels::validation_accuracy(std::span<const std::int32_t> predicted_val) const {
    return accuracy_against(labels_, split_.val, predicted_val);
}

double ScopedLabels::test_accuracy(std::span<const std::int32_t> predicted_test) const {
    ++test_reads_;
    return accuracy_against(labels_, split_.test, predicted_test);
}

std::vector<std::int32_t> argmax_rows(const DenseMatrix& logits, std::span<const std::size_t> rows) {
    std::vector<std::int32_t> out;
    out.reserve(rows.size());
    for (std::size_t i : rows) {
        auto r = logits.row(i);
        out.push_back(static_cast<std::int32_t>(std::max_element(r.begin(), r.end()) - r.begin()));
    }
    return out;
}

namespace {

DenseMatrix gather_rows(const FeatureMatrix& x, std::span<const std::size_t> idx) {
    DenseMatrix out(idx.size(), x.cols());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        auto src = x.row(idx[t]);
        std::copy(src.begin(), src.end(), out.row(t).begin());
    }
    return out;
}

std::vector<std::size_t> iota_rows(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

using Clock = std::chrono::steady_clock;

// Wall time of every epoch after the first.
class EpochTimer {
public:
    void epoch_done(std::size_t epoch) {
        const auto now = Clock::now();
        if (epoch == 0) {
            first_ = now - start_;
            start_ = now;
        }
        last_ = now;
    }
    double seconds(std::size_t epochs) const {
        if (epochs <= 1) return std::chrono::duration<double>(first_).count();
        return std::chrono::duration<double>(last_ - start_).count();
    }

private:
    Clock::time_point start_ = Clock::now();
    Clock::time_point last_ = start_;
    Clock::duration first_{};
};

}  // namespace

TrainResult train_node_classifier(const FeatureMatrix& features, const LabelVector& labels,
                                  const Split& split, const TrainConfig& cfg) {
    cfg.validate();
    if (features.rows() != labels.size()) throw DimensionError("features/labels row count mismatch");
    if (split.train.empty() || split.val.empty() || split.test.empty())
        throw DomainError("train_node_classifier: every split part must be nonempty");
    if (labels.num_classes < 2) throw DomainError("train_node_classifier: need at least two classes");
    const ScopedLabels scoped(labels, split);

    const DenseMatrix x_train = gather_rows(features, split.train);
    const DenseMatrix x_val = gather_rows(features, split.val);
    const DenseMatrix x_test = gather_rows(features, split.test);
    std::vector<std::int32_t> y_train;
    for (std::size_t i : split.train) y_train.push_back(scoped.training_view()[i]);
    const auto train_rows = iota_rows(x_train.rows());
    const auto val_rows = iota_rows(x_val.rows());
    const auto test_rows = iota_rows(x_test.rows());

    Rng rng(cfg.seed);
    const auto dims = mlp_dims(features.cols(), cfg.hidden, labels.num_classes, cfg.num_layers);
    TrainResult result{MlpParams::init(dims, rng), {}, {}};
    MlpParams params = result.params;
    AdamState state = AdamState::for_params(params);

    double best_val = -1.0;
    std::vector<std::int32_t> best_test_pred;
    EpochTimer timer;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const MlpTrace trace = mlp_forward_trace(params, x_train, cfg.dropout, Mode::train, rng);
        const LossResult loss = softmax_cross_entropy(trace.output, y_train, train_rows);
        adam_step(params, mlp_backward(params, trace, loss.grad), state, cfg);

        const DenseMatrix val_logits = mlp_forward(params, x_val, 0.0, Mode::eval, rng);
        const double val_acc = scoped.validation_accuracy(argmax_rows(val_logits, val_rows));
        result.val_history.push_back(val_acc);
        if (val_acc > best_val) {
            best_val = val_acc;
            result.params = params;
            result.metrics.best_epoch = epoch;
            best_test_pred = argmax_rows(mlp_forward(params, x_test, 0.0, Mode::eval, rng), test_rows);
        }
        timer.epoch_done(epoch);
    }
    result.metrics.train_seconds = timer.seconds(cfg.epochs);
    result.metrics.accuracy = scoped.test_accuracy(best_test_pred);
    return result;
}

TrainResult train_node_classifier(const PropagatedFeatures& features, const LabelVector& labels,
                                  const Split& split, const TrainConfig& cfg) {
    return train_node_classifier(features.matrix, labels, split, cfg);
}

CandidateSet candidates_for(const HyperlinkDataset& data, std::span<const std::size_t> part) {
    CandidateSet c;
    std::vector<bool> in_part(data.positives.size(), false);
    std::vector<std::size_t> sorted(part.begin(), part.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k : sorted) {
        if (k >= data.positives.size()) throw BoundsError("split references a missing positive");
        in_part[k] = true;
        c.members.push_back(data.positives[k]);
        c.targets.push_back(1.0);
    }
    for (const auto& neg : data.negatives) {
        if (!in_part[neg.source]) continue;
        c.members.push_back(neg.nodes);
        c.targets.push_back(0.0);
    }
    return c;
}

TrainResult train_hyperlink_predictor(const PropagatedFeatures& features, const HyperlinkDataset& data,
                                      const Split& split, const TrainConfig& cfg) {
    cfg.validate();
    if (features.matrix.rows() != data.num_nodes)
        throw DimensionError("features/node count mismatch");
    if (features.provenance.adjacency_hash != expected_adjacency_hash(data, split))
        throw ContractViolation(
            "train_hyperlink_predictor: features were not propagated over the train+validation "
            "hyperedges of this split");

    const CandidateSet train = candidates_for(data, split.train);
    const CandidateSet val = candidates_for(data, split.val);
    const CandidateSet test = candidates_for(data, split.test);
    const DenseMatrix x_train = aggregate_candidates(features.matrix, train.members);
    const DenseMatrix x_val = aggregate_candidates(features.matrix, val.members);
    const DenseMatrix x_test = aggregate_candidates(features.matrix, test.members);

    Rng rng(cfg.seed);
    const auto dims = mlp_dims(features.matrix.cols(), cfg.hidden, 1, cfg.num_layers);
    TrainResult result{MlpParams::init(dims, rng), {}, {}};
    MlpParams params = result.params;
    AdamState state = AdamState::for_params(params);

    double best_val = -1.0;
    std::vector<double> best_test_scores;
    EpochTimer timer;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const MlpTrace trace = mlp_forward_trace(params, x_train, cfg.dropout, Mode::train, rng);
        const BceResult loss = sigmoid_bce(trace.output.data(), train.targets);
        const DenseMatrix grad(loss.grad.size(), 1, loss.grad);
        adam_step(params, mlp_backward(params, trace, grad), state, cfg);

        const DenseMatrix val_scores = mlp_forward(params, x_val, 0.0, Mode::eval, rng);
        const double val_auc = auc(val_scores.data(), val.targets);
        result.val_history.push_back(val_auc);
        if (val_auc > best_val) {
            best_val = val_auc;
            result.params = params;
            result.metrics.best_epoch = epoch;
            const DenseMatrix s = mlp_forward(params, x_test, 0.0, Mode::eval, rng);
            best_test_scores.assign(s.data().begin(), s.data().end());
        }
        timer.epoch_done(epoch);
    }
    result.metrics.train_seconds = timer.seconds(cfg.epochs);
    result.metrics.auc = auc(best_test_scores, test.targets);
    return result;
}

}  // namespace tfhnn
