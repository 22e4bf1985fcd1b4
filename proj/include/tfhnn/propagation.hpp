#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "tfhnn/dense.hpp"
#include "tfhnn/expansion.hpp"

namespace tfhnn {

struct PropagationConfig {
    std::size_t layers = 2;
    double alpha = 0.3;

    // Throws DomainError unless alpha is in [0, 1).
    void validate() const;
};

struct Provenance {
    std::uint64_t features_hash = 0;
    std::uint64_t adjacency_hash = 0;

    std::uint64_t combined(const PropagationConfig& cfg) const;
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct PropagatedFeatures {
    FeatureMatrix matrix;
    PropagationConfig config;
    Provenance provenance;
};

// S X with S = (1-a)^L A^L + a sum_{l<L} (1-a)^l A^l, evaluated by the
// recurrence Z0 = X, Zl = (1-a) A Z(l-1) + a X. S itself is never formed.
PropagatedFeatures propagate(const SparseAdjacency& atilde, const FeatureMatrix& x,
                             const PropagationConfig& cfg);

inline constexpr std::size_t kDefaultDenseCap = 2000;

// Explicit n x n operator S, built from matrix powers (independent of the
// recurrence above). Throws ResourceError when n > cap.
DenseMatrix materialize_operator(const SparseAdjacency& atilde, const PropagationConfig& cfg,
                                 std::size_t cap = kDefaultDenseCap);

// Off-diagonal (i, j) with s[i][j] > tol, row-major order.
std::vector<std::pair<std::size_t, std::size_t>> operator_support(const DenseMatrix& s, double tol);

// F(X) = tr(X^T (I - A) X) + a/(1-a) ||X - X0||_F^2 ; requires a in (0, 1).
double energy(const SparseAdjacency& atilde, const FeatureMatrix& x, const FeatureMatrix& x0,
              double alpha);

enum class LimitSolver { automatic, dense, conjugate_gradient };

struct LimitOptions {
    LimitSolver solver = LimitSolver::automatic;
    std::size_t dense_cap = kDefaultDenseCap;
    double tolerance = 1e-10;  // relative residual per column
    std::size_t max_iterations = 0;  // 0: 10 n + 100
};

// Minimiser of F: solves (I - (1-a) A) X* = a X column-wise. Dense Cholesky
// up to dense_cap nodes, conjugate gradient above. NumericalError reports the
// residual when the solve misses the tolerance.
FeatureMatrix closed_form_limit(const SparseAdjacency& atilde, const FeatureMatrix& x,
                                double alpha, const LimitOptions& opts = {});

// Matrix container followed by a "PROV" trailer: u64 features hash,
// u64 adjacency hash, u64 layers, f64 alpha (little-endian).
void save_propagated(const std::filesystem::path& path, const PropagatedFeatures& pf);
PropagatedFeatures load_propagated(const std::filesystem::path& path);

}  // namespace tfhnn
