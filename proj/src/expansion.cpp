#include "tfhnn/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "tfhnn/errors.hpp"
#include "tfhnn/simd/kernels.hpp"

namespace tfhnn {

SparseAdjacency::SparseAdjacency(std::size_t n, std::vector<std::size_t> row_ptr,
                                 std::vector<NodeId> cols, std::vector<double> values,
                                 bool symmetric)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)),
      symmetric_(symmetric) {
    if (row_ptr_.size() != n_ + 1 || cols_.size() != values_.size() ||
        row_ptr_.back() != values_.size())
        throw DimensionError("SparseAdjacency: inconsistent CSR arrays");
}

double SparseAdjacency::at(std::size_t i, std::size_t j) const noexcept {
    auto c = row_cols(i);
    auto it = std::lower_bound(c.begin(), c.end(), static_cast<NodeId>(j));
    if (it == c.end() || *it != j) return 0.0;
    return row_values(i)[static_cast<std::size_t>(it - c.begin())];
}

bool SparseAdjacency::is_numerically_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i) {
        auto c = row_cols(i);
        auto v = row_values(i);
        for (std::size_t p = 0; p < c.size(); ++p)
            if (at(c[p], i) != v[p]) return false;
    }
    return true;
}

SparseAdjacency SparseAdjacency::scaled(double factor) const {
    SparseAdjacency out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

DenseMatrix SparseAdjacency::to_dense() const {
    DenseMatrix d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        auto c = row_cols(i);
        auto v = row_values(i);
        for (std::size_t p = 0; p < c.size(); ++p) d(i, c[p]) = v[p];
    }
    return d;
}

DenseMatrix SparseAdjacency::multiply(const DenseMatrix& x) const {
    if (x.rows() != n_) throw DimensionError("SparseAdjacency::multiply: row count mismatch");
    DenseMatrix y(n_, x.cols());
    const auto& k = simd::active();
    for (std::size_t i = 0; i < n_; ++i) {
        auto c = row_cols(i);
        auto v = row_values(i);
        auto yi = y.row(i);
        for (std::size_t p = 0; p < c.size(); ++p) k.axpy(v[p], x.row(c[p]).data(), yi.data(), yi.size());
    }
    return y;
}

std::uint64_t SparseAdjacency::content_hash() const {
    const std::uint64_t head[2] = {n_, symmetric_ ? 1u : 0u};
    std::uint64_t h = fnv1a(std::as_bytes(std::span(head)));
    std::vector<std::uint64_t> ptr(row_ptr_.begin(), row_ptr_.end());
    h = fnv1a(std::as_bytes(std::span(ptr)), h);
    h = fnv1a(std::as_bytes(std::span(cols_)), h);
    return fnv1a(std::as_bytes(std::span(values_)), h);
}

void SparseAdjacency::write_triplets(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    for (std::size_t i = 0; i < n_; ++i) {
        auto c = row_cols(i);
        auto v = row_values(i);
        for (std::size_t p = 0; p < c.size(); ++p) out << i << ' ' << c[p] << ' ' << v[p] << '\n';
    }
}

namespace {

// Row-by-row accumulation of sum_k term(i, j, k) over hyperedges shared by i
// and j. Hyperedges are visited in ascending k for every row, which fixes the
// summation order and makes symmetric formulas come out bitwise symmetric.
template <class Term>
SparseAdjacency build_from_incidence(const Hypergraph& h, bool keep_diagonal, bool symmetric,
                                     Term term) {
    const std::size_t n = h.num_nodes();
    std::vector<std::size_t> row_ptr{0};
    row_ptr.reserve(n + 1);
    std::vector<NodeId> cols;
    std::vector<double> values;

    std::vector<double> acc(n, 0.0);
    std::vector<bool> touched(n, false);
    std::vector<NodeId> touched_list;
    for (NodeId i = 0; i < n; ++i) {
        for (EdgeId k : h.incident_edges(i)) {
            for (NodeId j : h.edge(k)) {
                if (j == i && !keep_diagonal) continue;
                if (!touched[j]) {
                    touched[j] = true;
                    touched_list.push_back(j);
                }
                acc[j] += term(i, j, k);
            }
        }
        std::sort(touched_list.begin(), touched_list.end());
        for (NodeId j : touched_list) {
            cols.push_back(j);
            values.push_back(acc[j]);
            acc[j] = 0.0;
            touched[j] = false;
        }
        touched_list.clear();
        row_ptr.push_back(cols.size());
    }
    return SparseAdjacency(n, std::move(row_ptr), std::move(cols), std::move(values), symmetric);
}

void require_open_unit(double gamma, const char* who) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError(std::string(who) + ": gamma must lie in (0,1), got " + std::to_string(gamma));
}

}  // namespace

SparseAdjacency weighted_clique_expansion(const Hypergraph& h) {
    const auto deg = degrees(h);
    return build_from_incidence(h, false, true,
                                [&](NodeId, NodeId, EdgeId k) { return 1.0 / deg.edge_deg[k]; });
}

namespace detail {

SparseAdjacency unignn_matrix(const Hypergraph& h, double scale) {
    const auto deg = degrees(h);
    std::vector<double> dt_edge(h.num_edges(), 1.0);
    for (EdgeId k = 0; k < h.num_edges(); ++k) {
        double s = 0.0;
        for (NodeId i : h.edge(k)) s += deg.node_deg[i];
        if (s > 0.0) dt_edge[k] = s / deg.edge_deg[k];
    }
    auto w = build_from_incidence(h, true, false, [&](NodeId i, NodeId, EdgeId k) {
        return 1.0 / (std::sqrt(deg.node_deg[i]) * deg.edge_deg[k] * std::sqrt(dt_edge[k]));
    });
    return scale == 1.0 ? w : w.scaled(scale);
}

SparseAdjacency deephgnn_matrix(const Hypergraph& h, double scale) {
    const auto deg = degrees(h);
    std::vector<double> sqrt_deg(h.num_nodes());
    for (std::size_t i = 0; i < sqrt_deg.size(); ++i) sqrt_deg[i] = std::sqrt(deg.node_deg[i]);
    auto w = build_from_incidence(h, true, true, [&](NodeId i, NodeId j, EdgeId k) {
        return 1.0 / (sqrt_deg[i] * sqrt_deg[j] * deg.edge_deg[k]);
    });
    return scale == 1.0 ? w : w.scaled(scale);
}

}  // namespace detail

SparseAdjacency unignn_expansion(const Hypergraph& h, double gamma) {
    require_open_unit(gamma, "unignn_expansion");
    return detail::unignn_matrix(h, 1.0 - gamma);
}

SparseAdjacency deephgnn_expansion(const Hypergraph& h, double gamma) {
    require_open_unit(gamma, "deephgnn_expansion");
    return detail::deephgnn_matrix(h, 1.0 - gamma);
}

SparseAdjacency star_norm_expansion(const Hypergraph& h) {
    const auto deg = degrees(h);
    return build_from_incidence(h, true, false, [&](NodeId i, NodeId, EdgeId k) {
        return 1.0 / (deg.node_deg[i] * deg.edge_deg[k]);
    });
}

SparseAdjacency normalize_with_self_loops(const SparseAdjacency& w) {
    if (!w.is_numerically_symmetric())
        throw ContractViolation("normalize_with_self_loops: input adjacency is not symmetric");
    const std::size_t n = w.size();
    std::vector<double> sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (w.at(i, i) != 0.0)
            throw ContractViolation("normalize_with_self_loops: input has a nonzero diagonal at " +
                                    std::to_string(i));
        double d = 1.0;
        for (double v : w.row_values(i)) d += v;
        sqrt_deg[i] = std::sqrt(d);
    }

    std::vector<std::size_t> row_ptr{0};
    std::vector<NodeId> cols;
    std::vector<double> values;
    cols.reserve(w.nnz() + n);
    values.reserve(w.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        auto c = w.row_cols(i);
        auto v = w.row_values(i);
        bool diag_done = false;
        auto emit_diag = [&] {
            cols.push_back(static_cast<NodeId>(i));
            values.push_back(1.0 / (sqrt_deg[i] * sqrt_deg[i]));
            diag_done = true;
        };
        for (std::size_t p = 0; p < c.size(); ++p) {
            if (!diag_done && c[p] > i) emit_diag();
            cols.push_back(c[p]);
            values.push_back(v[p] / (sqrt_deg[i] * sqrt_deg[c[p]]));
        }
        if (!diag_done) emit_diag();
        row_ptr.push_back(cols.size());
    }
    return SparseAdjacency(n, std::move(row_ptr), std::move(cols), std::move(values), true);
}

SparseAdjacency propagation_adjacency(const Hypergraph& h) {
    return normalize_with_self_loops(weighted_clique_expansion(h));
}

}  // namespace tfhnn
