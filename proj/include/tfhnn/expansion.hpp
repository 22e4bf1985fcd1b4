#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tfhnn/dense.hpp"
#include "tfhnn/hypergraph.hpp"

namespace tfhnn {

// Square sparse matrix over the node set in CSR form with sorted column
// indices per row. `symmetric()` records whether construction guarantees
// W[i][j] == W[j][i] bit-for-bit; the clique and Deep-HGNN expansions
// do, the UniGCNII and AllDeepSets ones in general do not.
class SparseAdjacency {
public:
    SparseAdjacency() = default;
    SparseAdjacency(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<NodeId> cols,
                    std::vector<double> values, bool symmetric);

    std::size_t size() const noexcept { return n_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool symmetric() const noexcept { return symmetric_; }

    std::span<const NodeId> row_cols(std::size_t i) const noexcept {
        return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    std::span<const double> row_values(std::size_t i) const noexcept {
        return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }

    // 0 when (i, j) is not stored.
    double at(std::size_t i, std::size_t j) const noexcept;

    // Bitwise check of W == W^T, independent of the flag.
    bool is_numerically_symmetric() const;

    SparseAdjacency scaled(double factor) const;
    DenseMatrix to_dense() const;

    // y = W * x
    DenseMatrix multiply(const DenseMatrix& x) const;

    std::uint64_t content_hash() const;

    // "i j value" per stored entry, row-major order.
    void write_triplets(const std::filesystem::path& path) const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<NodeId> cols_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

// W_H[i][j] = sum over hyperedges containing both i and j (i != j) of 1/|e_k|.
// Zero diagonal.
SparseAdjacency weighted_clique_expansion(const Hypergraph& h);

// (1-gamma) D_V^{-1/2} H Dt_E^{-1/2} D_E^{-1} H^T with
// Dt_E[k] = (sum_{i in e_k} D_V[i]) / D_E[k]. Not symmetric in general.
SparseAdjacency unignn_expansion(const Hypergraph& h, double gamma);

// (1-gamma) D_V^{-1/2} H D_E^{-1} H^T D_V^{-1/2}. Symmetric.
SparseAdjacency deephgnn_expansion(const Hypergraph& h, double gamma);

// D_V^{-1} H D_E^{-1} H^T. Row-stochastic, not symmetric in general.
SparseAdjacency star_norm_expansion(const Hypergraph& h);

// D~^{-1/2} (W + I) D~^{-1/2} with D~ the row sums of W + I. Requires a
// symmetric input with an empty diagonal; throws ContractViolation otherwise.
SparseAdjacency normalize_with_self_loops(const SparseAdjacency& w);

// normalize_with_self_loops(weighted_clique_expansion(h)): the operator the
// training-free propagation runs on.
SparseAdjacency propagation_adjacency(const Hypergraph& h);

namespace detail {
// Shared builders without the gamma range check; scale multiplies every entry.
SparseAdjacency unignn_matrix(const Hypergraph& h, double scale);
SparseAdjacency deephgnn_matrix(const Hypergraph& h, double scale);
}  // namespace detail

}  // namespace tfhnn
