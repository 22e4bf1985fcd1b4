#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "tfhnn/dense.hpp"

namespace tfhnn {

using Rng = std::mt19937_64;

struct DenseLayer {
    DenseMatrix weight;  // d_in x d_out
    std::vector<double> bias;

    std::size_t in_dim() const noexcept { return weight.rows(); }
    std::size_t out_dim() const noexcept { return weight.cols(); }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// ReLU between layers, identity after the last one.
struct MlpParams {
    std::vector<DenseLayer> layers;

    // dims = {d_in, hidden..., d_out}; Glorot-uniform weights, zero biases.
    static MlpParams init(std::span<const std::size_t> dims, Rng& rng);
    // Same shapes, all zeros (gradient and moment buffers).
    static MlpParams zeros_like(const MlpParams& p);

    std::size_t in_dim() const { return layers.front().in_dim(); }
    std::size_t out_dim() const { return layers.back().out_dim(); }
    std::size_t num_parameters() const;
    bool all_finite() const;

    friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

using MlpGradients = MlpParams;

// dims for a head with `num_layers` linear layers of width `hidden`.
std::vector<std::size_t> mlp_dims(std::size_t in, std::size_t hidden, std::size_t out,
                                  std::size_t num_layers);

struct TrainConfig {
    double learning_rate = 1e-3;
    double dropout = 0.0;
    std::size_t epochs = 200;
    double weight_decay = 0.0;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t hidden = 64;
    std::size_t num_layers = 2;

    void validate() const;
};

enum class Mode { train, eval };

// Everything backward needs from a forward pass.
struct MlpTrace {
    std::vector<DenseMatrix> inputs;       // input to each layer (post ReLU and dropout)
    std::vector<DenseMatrix> pre_act;      // pre-activation of each hidden layer
    std::vector<std::vector<double>> keep;  // dropout scale per hidden unit (0 or 1/(1-p)), train only
    DenseMatrix output;
};

MlpTrace mlp_forward_trace(const MlpParams& p, const DenseMatrix& x, double dropout, Mode mode,
                           Rng& rng);

// Logits only. Eval mode never touches rng.
DenseMatrix mlp_forward(const MlpParams& p, const DenseMatrix& x, double dropout, Mode mode, Rng& rng);

// Parameter gradients given dLoss/dLogits; optionally also dLoss/dInput.
MlpGradients mlp_backward(const MlpParams& p, const MlpTrace& trace, const DenseMatrix& grad_out,
                          DenseMatrix* grad_input = nullptr);

struct LossResult {
    double loss = 0.0;
    DenseMatrix grad;  // same shape as the logits
};

// Mean softmax cross-entropy over the rows listed in `mask`; zero gradient
// elsewhere. Throws DomainError on an empty mask or an unlabeled row.
LossResult softmax_cross_entropy(const DenseMatrix& logits, std::span<const std::int32_t> labels,
                                 std::span<const std::size_t> mask);

struct BceResult {
    double loss = 0.0;
    std::vector<double> grad;
};

// Mean binary cross-entropy on raw logits, stable for large |logit|.
BceResult sigmoid_bce(std::span<const double> logits, std::span<const double> targets);

struct AdamState {
    MlpParams first;
    MlpParams second;
    std::uint64_t step = 0;

    static AdamState for_params(const MlpParams& p);
};

// Bias-corrected Adam; weight decay is decoupled (param -= lr * wd * param).
void adam_step(MlpParams& p, const MlpGradients& g, AdamState& state, const TrainConfig& cfg);

// "TFCK", u64 layer count, then per layer u64 d_in, u64 d_out, weights, bias.
void save_checkpoint(const std::filesystem::path& path, const MlpParams& p);
MlpParams load_checkpoint(const std::filesystem::path& path);

}  // namespace tfhnn
