#include "tfhnn/propagation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

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

void PropagationConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError("propagation alpha must lie in [0,1), got " + std::to_string(alpha));
}

std::uint64_t Provenance::combined(const PropagationConfig& cfg) const {
    const std::uint64_t words[3] = {features_hash, adjacency_hash, cfg.layers};
    std::uint64_t h = fnv1a(std::as_bytes(std::span(words)));
    return fnv1a(std::as_bytes(std::span(&cfg.alpha, 1)), h);
}

PropagatedFeatures propagate(const SparseAdjacency& atilde, const FeatureMatrix& x,
                             const PropagationConfig& cfg) {
    cfg.validate();
    if (atilde.size() != x.rows())
        throw DimensionError("propagate: adjacency has " + std::to_string(atilde.size()) +
                             " nodes, features have " + std::to_string(x.rows()) + " rows");
    PropagatedFeatures out;
    out.config = cfg;
    out.provenance = {hash_matrix(x), atilde.content_hash()};

    const auto& k = simd::active();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const double keep = 1.0 - cfg.alpha;
    if (cfg.layers == 0) {
        out.matrix = x;
        return out;
    }
    // The first layer reads x directly; later layers ping-pong between two
    // buffers.
    FeatureMatrix buf_a(n, d);
    FeatureMatrix buf_b(cfg.layers > 1 ? n : 0, cfg.layers > 1 ? d : 0);
    const FeatureMatrix* src = &x;
    std::vector<double> acc(d);
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        const FeatureMatrix& prev = *src;
        FeatureMatrix& next = layer % 2 == 0 ? buf_a : buf_b;
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            auto c = atilde.row_cols(i);
            auto v = atilde.row_values(i);
            for (std::size_t p = 0; p < c.size(); ++p) k.axpy(v[p], prev.row(c[p]).data(), acc.data(), d);
            k.lincomb(keep, acc.data(), cfg.alpha, x.row(i).data(), next.row(i).data(), d);
        }
        src = &next;
    }
    out.matrix = std::move(cfg.layers % 2 == 1 ? buf_a : buf_b);
    return out;
}

DenseMatrix materialize_operator(const SparseAdjacency& atilde, const PropagationConfig& cfg,
                                 std::size_t cap) {
    cfg.validate();
    const std::size_t n = atilde.size();
    if (n > cap)
        throw ResourceError("materialize_operator: n=" + std::to_string(n) + " exceeds cap " +
                            std::to_string(cap));
    DenseMatrix power = DenseMatrix::identity(n);
    DenseMatrix s(n, n);
    const double keep = 1.0 - cfg.alpha;
    for (std::size_t l = 0; l < cfg.layers; ++l) {
        const double coeff = cfg.alpha * std::pow(keep, static_cast<double>(l));
        auto sd = s.data();
        auto pd = power.data();
        for (std::size_t t = 0; t < sd.size(); ++t) sd[t] += coeff * pd[t];
        power = atilde.multiply(power);
    }
    const double last = std::pow(keep, static_cast<double>(cfg.layers));
    auto sd = s.data();
    auto pd = power.data();
    for (std::size_t t = 0; t < sd.size(); ++t) sd[t] += last * pd[t];
    return s;
}

std::vector<std::pair<std::size_t, std::size_t>> operator_support(const DenseMatrix& s, double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j)
            if (i != j && s(i, j) > tol) out.emplace_back(i, j);
    return out;
}

namespace {

void require_positive_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError(std::string(who) + ": alpha must lie in (0,1), got " + std::to_string(alpha));
}

void require_same_shape(const FeatureMatrix& a, const FeatureMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(who) + ": feature shapes differ");
}

}  // namespace

double energy(const SparseAdjacency& atilde, const FeatureMatrix& x, const FeatureMatrix& x0,
              double alpha) {
    require_positive_alpha(alpha, "energy");
    require_same_shape(x, x0, "energy");
    if (atilde.size() != x.rows()) throw DimensionError("energy: adjacency/feature size mismatch");
    const FeatureMatrix ax = atilde.multiply(x);
    double smooth = 0.0;
    double ridge = 0.0;
    auto xd = x.data();
    auto axd = ax.data();
    auto x0d = x0.data();
    for (std::size_t t = 0; t < xd.size(); ++t) {
        smooth += xd[t] * (xd[t] - axd[t]);
        const double diff = xd[t] - x0d[t];
        ridge += diff * diff;
    }
    return smooth + alpha / (1.0 - alpha) * ridge;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

FeatureMatrix dense_limit(const SparseAdjacency& atilde, const FeatureMatrix& x, double alpha,
                          double tolerance) {
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto d = static_cast<Eigen::Index>(x.cols());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < atilde.size(); ++i) {
        auto c = atilde.row_cols(i);
        auto v = atilde.row_values(i);
        for (std::size_t p = 0; p < c.size(); ++p)
            system(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c[p])) -= (1.0 - alpha) * v[p];
    }
    Eigen::Map<const RowMajor> rhs_in(x.data().data(), n, d);
    const Eigen::MatrixXd rhs = alpha * rhs_in;
    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success)
        throw NumericalError("closed_form_limit: system matrix is not positive definite", -1.0);
    const Eigen::MatrixXd sol = llt.solve(rhs);
    const double rhs_norm = rhs.norm();
    const double residual = (system * sol - rhs).norm() / (rhs_norm > 0 ? rhs_norm : 1.0);
    if (!(residual <= tolerance))
        throw NumericalError("closed_form_limit: dense solve residual above tolerance", residual);
    FeatureMatrix out(x.rows(), x.cols());
    Eigen::Map<RowMajor>(out.data().data(), n, d) = sol;
    return out;
}

// Conjugate gradient on M = I - (1-a) A, one column at a time so each column
// has its own step sizes and stopping point.
FeatureMatrix cg_limit(const SparseAdjacency& atilde, const FeatureMatrix& x, double alpha,
                       double tolerance, std::size_t max_iter) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const double keep = 1.0 - alpha;
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            auto c = atilde.row_cols(i);
            auto v = atilde.row_values(i);
            for (std::size_t p = 0; p < c.size(); ++p) s += v[p] * in[c[p]];
            out[i] = in[i] - keep * s;
        }
    };
    auto dotv = [](const std::vector<double>& a, const std::vector<double>& b) {
        return simd::active().dot(a.data(), b.data(), a.size());
    };

    FeatureMatrix out(n, d);
    std::vector<double> b(n), sol(n), r(n), p(n), mp(n);
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t i = 0; i < n; ++i) b[i] = alpha * x(i, col);
        const double b_norm = std::sqrt(dotv(b, b));
        // Warm start from b/a = X, which is exact when A = I.
        for (std::size_t i = 0; i < n; ++i) sol[i] = x(i, col);
        apply(sol, mp);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - mp[i];
        p = r;
        double rr = dotv(r, r);
        const double target = tolerance * (b_norm > 0 ? b_norm : 1.0);
        std::size_t it = 0;
        while (std::sqrt(rr) > target && it < max_iter) {
            apply(p, mp);
            const double step = rr / dotv(p, mp);
            for (std::size_t i = 0; i < n; ++i) {
                sol[i] += step * p[i];
                r[i] -= step * mp[i];
            }
            const double rr_next = dotv(r, r);
            const double beta = rr_next / rr;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
            rr = rr_next;
            ++it;
        }
        if (std::sqrt(rr) > target)
            throw NumericalError("closed_form_limit: conjugate gradient did not converge in column " +
                                     std::to_string(col),
                                 std::sqrt(rr) / (b_norm > 0 ? b_norm : 1.0));
        for (std::size_t i = 0; i < n; ++i) out(i, col) = sol[i];
    }
    return out;
}

}  // namespace

FeatureMatrix closed_form_limit(const SparseAdjacency& atilde, const FeatureMatrix& x,
                                double alpha, const LimitOptions& opts) {
    require_positive_alpha(alpha, "closed_form_limit");
    if (atilde.size() != x.rows())
        throw DimensionError("closed_form_limit: adjacency/feature size mismatch");
    const bool dense = opts.solver == LimitSolver::dense ||
                       (opts.solver == LimitSolver::automatic && x.rows() <= opts.dense_cap);
    if (dense) return dense_limit(atilde, x, alpha, opts.tolerance);
    const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : 10 * x.rows() + 100;
    return cg_limit(atilde, x, alpha, opts.tolerance, max_iter);
}

namespace {

constexpr char kProvMagic[4] = {'P', 'R', 'O', 'V'};

}  // namespace

void save_propagated(const std::filesystem::path& path, const PropagatedFeatures& pf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_matrix_payload(out, pf.matrix);
    out.write(kProvMagic, 4);
    binio::put_le<std::uint64_t>(out, pf.provenance.features_hash);
    binio::put_le<std::uint64_t>(out, pf.provenance.adjacency_hash);
    binio::put_le<std::uint64_t>(out, pf.config.layers);
    binio::put_le<double>(out, pf.config.alpha);
    if (!out) throw IoError("write failed: " + path.string());
}

PropagatedFeatures load_propagated(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    PropagatedFeatures pf;
    pf.matrix = read_matrix_payload(in);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kProvMagic, 4) != 0)
        throw IoError(path.string() + " has no provenance trailer");
    pf.provenance.features_hash = binio::get_le<std::uint64_t>(in, "provenance trailer");
    pf.provenance.adjacency_hash = binio::get_le<std::uint64_t>(in, "provenance trailer");
    pf.config.layers = binio::get_le<std::uint64_t>(in, "provenance trailer");
    pf.config.alpha = binio::get_le<double>(in, "provenance trailer");
    return pf;
}

}  // namespace tfhnn
