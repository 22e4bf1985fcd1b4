#include "tfhnn/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/simd/kernels.hpp"

namespace tfhnn {

MlpParams MlpParams::init(std::span<const std::size_t> dims, Rng& rng) {
    if (dims.size() < 2) throw ConfigError("MLP needs at least input and output dimensions");
    MlpParams p;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t in = dims[l], out = dims[l + 1];
        if (in == 0 || out == 0) throw ConfigError("MLP layer dimensions must be positive");
        const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        DenseLayer layer{DenseMatrix(in, out), std::vector<double>(out, 0.0)};
        for (double& w : layer.weight.data()) w = dist(rng);
        p.layers.push_back(std::move(layer));
    }
    return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& p) {
    MlpParams z;
    for (const auto& l : p.layers)
        z.layers.push_back({DenseMatrix(l.in_dim(), l.out_dim()), std::vector<double>(l.out_dim(), 0.0)});
    return z;
}

std::size_t MlpParams::num_parameters() const {
    std::size_t c = 0;
    for (const auto& l : layers) c += l.weight.size() + l.bias.size();
    return c;
}

bool MlpParams::all_finite() const {
    for (const auto& l : layers) {
        if (!l.weight.all_finite()) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

std::vector<std::size_t> mlp_dims(std::size_t in, std::size_t hidden, std::size_t out,
                                  std::size_t num_layers) {
    if (num_layers == 0) throw ConfigError("MLP needs at least one layer");
    std::vector<std::size_t> dims{in};
    for (std::size_t l = 1; l < num_layers; ++l) dims.push_back(hidden);
    dims.push_back(out);
    return dims;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0,1)");
    if (epochs == 0) throw ConfigError("epochs must be positive");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be nonnegative");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw ConfigError("Adam betas must lie in [0,1)");
    if (!(adam_eps > 0.0)) throw ConfigError("adam_eps must be positive");
    if (num_layers == 0) throw ConfigError("num_layers must be positive");
    if (num_layers > 1 && hidden == 0) throw ConfigError("hidden must be positive");
}

namespace {

DenseMatrix affine(const DenseLayer& layer, const DenseMatrix& x) {
    if (x.cols() != layer.in_dim())
        throw DimensionError("MLP input has " + std::to_string(x.cols()) + " columns, layer expects " +
                             std::to_string(layer.in_dim()));
    DenseMatrix z = matmul(x, layer.weight);
    const auto& k = simd::active();
    for (std::size_t i = 0; i < z.rows(); ++i) k.axpy(1.0, layer.bias.data(), z.row(i).data(), z.cols());
    return z;
}

}  // namespace

MlpTrace mlp_forward_trace(const MlpParams& p, const DenseMatrix& x, double dropout, Mode mode,
                           Rng& rng) {
    if (p.layers.empty()) throw DimensionError("MLP has no layers");
    MlpTrace t;
    const bool drop = mode == Mode::train && dropout > 0.0;
    const double keep_scale = drop ? 1.0 / (1.0 - dropout) : 1.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    DenseMatrix cur = x;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        DenseMatrix z = affine(p.layers[l], cur);
        t.inputs.push_back(std::move(cur));
        if (l + 1 == p.layers.size()) {
            t.output = std::move(z);
            break;
        }
        DenseMatrix a = z;
        for (double& v : a.data()) v = v > 0.0 ? v : 0.0;
        std::vector<double> mask;
        if (drop) {
            mask.resize(a.size());
            for (double& m : mask) m = unif(rng) < dropout ? 0.0 : keep_scale;
            auto ad = a.data();
            for (std::size_t i = 0; i < ad.size(); ++i) ad[i] *= mask[i];
        }
        t.pre_act.push_back(std::move(z));
        t.keep.push_back(std::move(mask));
        cur = std::move(a);
    }
    return t;
}

DenseMatrix mlp_forward(const MlpParams& p, const DenseMatrix& x, double dropout, Mode mode, Rng& rng) {
    return mlp_forward_trace(p, x, dropout, mode, rng).output;
}

MlpGradients mlp_backward(const MlpParams& p, const MlpTrace& trace, const DenseMatrix& grad_out,
                          DenseMatrix* grad_input) {
    MlpGradients g = MlpParams::zeros_like(p);
    DenseMatrix delta = grad_out;
    for (std::size_t l = p.layers.size(); l-- > 0;) {
        const DenseMatrix& in = trace.inputs[l];
        g.layers[l].weight = matmul_tn(in, delta);
        auto& gb = g.layers[l].bias;
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            auto r = delta.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) gb[j] += r[j];
        }
        if (l == 0 && grad_input == nullptr) break;
        DenseMatrix back = matmul_nt(delta, p.layers[l].weight);
        if (l == 0) {
            *grad_input = std::move(back);
            break;
        }
        // Through dropout and ReLU of the previous hidden layer.
        const DenseMatrix& z = trace.pre_act[l - 1];
        const auto& mask = trace.keep[l - 1];
        auto bd = back.data();
        auto zd = z.data();
        for (std::size_t i = 0; i < bd.size(); ++i) {
            double v = zd[i] > 0.0 ? bd[i] : 0.0;
            if (!mask.empty()) v *= mask[i];
            bd[i] = v;
        }
        delta = std::move(back);
    }
    return g;
}

LossResult softmax_cross_entropy(const DenseMatrix& logits, std::span<const std::int32_t> labels,
                                 std::span<const std::size_t> mask) {
    if (mask.empty()) throw DomainError("softmax_cross_entropy: empty mask");
    if (labels.size() != logits.rows()) throw DimensionError("softmax_cross_entropy: label count mismatch");
    LossResult r{0.0, DenseMatrix(logits.rows(), logits.cols())};
    const double inv = 1.0 / static_cast<double>(mask.size());
    std::vector<double> prob(logits.cols());
    for (std::size_t i : mask) {
        const auto y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= logits.cols())
            throw DomainError("softmax_cross_entropy: row " + std::to_string(i) + " has no valid label");
        auto z = logits.row(i);
        const double zmax = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < z.size(); ++c) {
            prob[c] = std::exp(z[c] - zmax);
            sum += prob[c];
        }
        const double log_sum = std::log(sum);
        r.loss += (log_sum - (z[static_cast<std::size_t>(y)] - zmax)) * inv;
        auto g = r.grad.row(i);
        for (std::size_t c = 0; c < z.size(); ++c) g[c] = prob[c] / sum * inv;
        g[static_cast<std::size_t>(y)] -= inv;
    }
    return r;
}

BceResult sigmoid_bce(std::span<const double> logits, std::span<const double> targets) {
    if (logits.size() != targets.size()) throw DimensionError("sigmoid_bce: size mismatch");
    if (logits.empty()) throw DomainError("sigmoid_bce: empty input");
    BceResult r{0.0, std::vector<double>(logits.size())};
    const double inv = 1.0 / static_cast<double>(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits[i];
        const double y = targets[i];
        // max(z,0) - z y + log(1 + exp(-|z|))
        r.loss += (std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)))) * inv;
        const double sig = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        r.grad[i] = (sig - y) * inv;
    }
    return r;
}

AdamState AdamState::for_params(const MlpParams& p) {
    return {MlpParams::zeros_like(p), MlpParams::zeros_like(p), 0};
}

namespace {

void adam_update(std::span<double> param, std::span<const double> grad, std::span<double> m,
                 std::span<double> v, const TrainConfig& cfg, double c1, double c2) {
    const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
        v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        param[i] -= cfg.learning_rate * (mhat / (std::sqrt(vhat) + cfg.adam_eps) + cfg.weight_decay * param[i]);
    }
}

}  // namespace

void adam_step(MlpParams& p, const MlpGradients& g, AdamState& state, const TrainConfig& cfg) {
    if (g.layers.size() != p.layers.size() || state.first.layers.size() != p.layers.size())
        throw DimensionError("adam_step: parameter/gradient shapes differ");
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        auto& pl = p.layers[l];
        adam_update(pl.weight.data(), g.layers[l].weight.data(), state.first.layers[l].weight.data(),
                    state.second.layers[l].weight.data(), cfg, c1, c2);
        adam_update(pl.bias, g.layers[l].bias, state.first.layers[l].bias, state.second.layers[l].bias,
                    cfg, c1, c2);
    }
}

namespace {

constexpr char kCheckpointMagic[4] = {'T', 'F', 'C', 'K'};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MlpParams& p) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(kCheckpointMagic, 4);
    binio::put_le<std::uint64_t>(out, p.layers.size());
    for (const auto& l : p.layers) {
        binio::put_le<std::uint64_t>(out, l.in_dim());
        binio::put_le<std::uint64_t>(out, l.out_dim());
        for (double w : l.weight.data()) binio::put_le<double>(out, w);
        for (double b : l.bias) binio::put_le<double>(out, b);
    }
    if (!out) throw IoError("write failed: " + path.string());
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) throw IoError("bad checkpoint magic");
    MlpParams p;
    const auto count = binio::get_le<std::uint64_t>(in, "checkpoint");
    for (std::uint64_t l = 0; l < count; ++l) {
        const auto in_dim = binio::get_le<std::uint64_t>(in, "checkpoint");
        const auto out_dim = binio::get_le<std::uint64_t>(in, "checkpoint");
        if (!p.layers.empty() && p.layers.back().out_dim() != in_dim)
            throw IoError("checkpoint layer dimensions do not chain");
        DenseLayer layer{DenseMatrix(in_dim, out_dim), std::vector<double>(out_dim)};
        for (double& w : layer.weight.data()) w = binio::get_le<double>(in, "checkpoint");
        for (double& b : layer.bias) b = binio::get_le<double>(in, "checkpoint");
        p.layers.push_back(std::move(layer));
    }
    return p;
}

}  // namespace tfhnn
