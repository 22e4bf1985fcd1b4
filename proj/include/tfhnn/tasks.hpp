#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tfhnn/hypergraph.hpp"
#include "tfhnn/nn.hpp"
#include "tfhnn/propagation.hpp"

namespace tfhnn {

struct SplitRatios {
    double train = 0.5;
    double val = 0.25;
    double test = 0.25;
};

// Disjoint index sets over a universe [0, size). For node classification the
// universe is the list of labeled nodes; for hyperlink prediction it is the
// list of positive hyperedges.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

// Seeded shuffle then contiguous partition. val and test take
// floor(ratio * size); train takes the remainder.
Split make_split(std::size_t universe_size, const SplitRatios& ratios, std::uint64_t seed);

// Split over the labeled nodes: indices in the result are node ids.
Split make_node_split(const LabelVector& labels, const SplitRatios& ratios, std::uint64_t seed);

struct NegativeHyperedge {
    std::vector<NodeId> nodes;  // sorted
    std::size_t source = 0;     // index of the positive it was derived from
    std::vector<NodeId> kept;   // members taken from the source, sorted
};

struct HyperlinkDataset {
    std::size_t num_nodes = 0;
    std::vector<std::vector<NodeId>> positives;  // each sorted
    std::vector<NegativeHyperedge> negatives;
    double corruption_alpha = 0.5;
    std::size_t ratio_beta = 5;
};

// round(alpha * size) with ties to even.
std::size_t kept_count(double alpha, std::size_t size);

// beta corrupted copies of every hyperedge of h. Each keeps kept_count(alpha,
// |e|) members of e and fills the rest from V \ e, both uniformly without
// replacement; a copy that equals any positive is redrawn (100 tries).
HyperlinkDataset negative_sample(const Hypergraph& h, double alpha, std::size_t beta,
                                 std::uint64_t seed);

// Hypergraph over all nodes made of the train and validation positives only,
// in ascending positive index. This is the only structure message passing
// may see during hyperlink prediction.
Hypergraph message_passing_hypergraph(const HyperlinkDataset& data, const Split& split);

// Adjacency hash the propagated features must carry for (data, split).
std::uint64_t expected_adjacency_hash(const HyperlinkDataset& data, const Split& split);

// MLP logit of the mean of the candidate's feature rows. The rows are summed
// in a canonical order, so the result is bit-identical under any permutation
// of the candidate and for any candidate with the same multiset of rows.
double deep_set_score(const MlpParams& p, const PropagatedFeatures& features,
                      std::span<const NodeId> candidate);

// Mean-aggregated rows for a batch of candidates (one output row each).
DenseMatrix aggregate_candidates(const FeatureMatrix& x,
                                 std::span<const std::vector<NodeId>> candidates);

// Mann-Whitney rank statistic with mid-ranks for ties.
double auc(std::span<const double> scores, std::span<const double> targets);

double relative_time(double t_f, double t_s);

struct Metrics {
    std::optional<double> accuracy;
    std::optional<double> auc;
    double train_seconds = 0.0;
    double relative_time = 1.0;
    std::size_t best_epoch = 0;
};

struct TrainResult {
    MlpParams params;  // parameters at the best validation epoch
    Metrics metrics;
    std::vector<double> val_history;  // validation metric per epoch
};

// Labels as seen by a training run: the optimiser and model selection only
// get train and validation labels; test labels are consulted once, through
// test_accuracy, after training.
class ScopedLabels {
public:
    ScopedLabels(const LabelVector& labels, const Split& split);

    std::span<const std::int32_t> training_view() const noexcept { return train_view_; }
    std::span<const std::size_t> train_indices() const noexcept { return split_.train; }
    std::span<const std::size_t> val_indices() const noexcept { return split_.val; }
    std::span<const std::size_t> test_indices() const noexcept { return split_.test; }
    std::size_t num_classes() const noexcept { return labels_.num_classes; }

    double validation_accuracy(std::span<const std::int32_t> predicted_val) const;
    double test_accuracy(std::span<const std::int32_t> predicted_test) const;
    std::size_t test_reads() const noexcept { return test_reads_; }

private:
    const LabelVector& labels_;
    const Split& split_;
    std::vector<std::int32_t> train_view_;
    mutable std::size_t test_reads_ = 0;
};

std::vector<std::int32_t> argmax_rows(const DenseMatrix& logits, std::span<const std::size_t> rows);

// Full-batch training with softmax cross-entropy. Reports the test accuracy
// of the epoch with the best validation accuracy (earliest on ties).
TrainResult train_node_classifier(const FeatureMatrix& features, const LabelVector& labels,
                                  const Split& split, const TrainConfig& cfg);
TrainResult train_node_classifier(const PropagatedFeatures& features, const LabelVector& labels,
                                  const Split& split, const TrainConfig& cfg);

struct CandidateSet {
    std::vector<std::vector<NodeId>> members;
    std::vector<double> targets;
};

// Positives of the split part followed by the negatives derived from them.
CandidateSet candidates_for(const HyperlinkDataset& data, std::span<const std::size_t> part);

// Full-batch BCE training of a deep-set head; model selection on validation
// AUC. Throws ContractViolation when the features were not propagated over
// message_passing_hypergraph(data, split).
TrainResult train_hyperlink_predictor(const PropagatedFeatures& features, const HyperlinkDataset& data,
                                      const Split& split, const TrainConfig& cfg);

}  // namespace tfhnn
