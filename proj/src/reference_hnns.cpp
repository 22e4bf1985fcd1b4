#include "tfhnn/reference_hnns.hpp"

#include <cmath>
#include <string>

#include "tfhnn/errors.hpp"

namespace tfhnn {

std::string_view model_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::UniGCNII: return "UniGCNII";
        case ModelKind::DeepHGNN: return "Deep-HGNN";
        case ModelKind::AllDeepSets: return "AllDeepSets";
        case ModelKind::EDHNN: return "ED-HNN";
    }
    return "unknown";
}

void LinearizedModelSpec::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw DomainError("linearized model gamma must lie in [0,1), got " + std::to_string(gamma));
    if (kind == ModelKind::AllDeepSets && gamma != 0.0)
        throw DomainError("AllDeepSets has no initial residual; gamma must be 0");
}

namespace {

// The per-layer propagation matrix, including the (1-gamma) weight.
SparseAdjacency layer_matrix(const LinearizedModelSpec& spec, const Hypergraph& h) {
    const double keep = 1.0 - spec.gamma;
    switch (spec.kind) {
        case ModelKind::UniGCNII: return detail::unignn_matrix(h, keep);
        case ModelKind::DeepHGNN: return detail::deephgnn_matrix(h, keep);
        case ModelKind::AllDeepSets: return star_norm_expansion(h);
        case ModelKind::EDHNN: return star_norm_expansion(h).scaled(keep);
    }
    throw DomainError("unknown model kind");
}

}  // namespace

FeatureMatrix run_linearized(const LinearizedModelSpec& spec, const Hypergraph& h,
                             const FeatureMatrix& x) {
    spec.validate();
    if (x.rows() != h.num_nodes()) throw DimensionError("run_linearized: feature rows != node count");
    const SparseAdjacency w = layer_matrix(spec, h);
    FeatureMatrix cur = x;
    for (std::size_t l = 0; l < spec.layers; ++l) {
        FeatureMatrix next = w.multiply(cur);
        if (spec.gamma != 0.0) {
            auto nd = next.data();
            auto xd = x.data();
            for (std::size_t t = 0; t < nd.size(); ++t) nd[t] += spec.gamma * xd[t];
        }
        cur = std::move(next);
    }
    return cur;
}

UnifiedForm unified_equivalent(const LinearizedModelSpec& spec, const Hypergraph& h) {
    spec.validate();
    switch (spec.kind) {
        case ModelKind::UniGCNII: return {detail::unignn_matrix(h, 1.0), spec.gamma};
        case ModelKind::DeepHGNN: return {detail::deephgnn_matrix(h, 1.0), spec.gamma};
        case ModelKind::AllDeepSets: return {star_norm_expansion(h), 0.0};
        case ModelKind::EDHNN: return {star_norm_expansion(h), spec.gamma};
    }
    throw DomainError("unknown model kind");
}

FeatureMatrix unified_polynomial(const UnifiedForm& form, std::size_t layers, const FeatureMatrix& x) {
    const std::size_t n = form.w.size();
    if (x.rows() != n) throw DimensionError("unified_polynomial: feature rows != node count");
    const DenseMatrix w = form.w.to_dense();
    DenseMatrix power = DenseMatrix::identity(n);
    DenseMatrix s(n, n);
    const double keep = 1.0 - form.alpha;
    auto accumulate = [&](double coeff) {
        auto sd = s.data();
        auto pd = power.data();
        for (std::size_t t = 0; t < sd.size(); ++t) sd[t] += coeff * pd[t];
    };
    for (std::size_t l = 0; l < layers; ++l) {
        accumulate(form.alpha * std::pow(keep, static_cast<double>(l)));
        power = matmul(w, power);
    }
    accumulate(std::pow(keep, static_cast<double>(layers)));
    return matmul(s, x);
}

}  // namespace tfhnn
