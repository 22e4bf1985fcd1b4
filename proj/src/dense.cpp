#include "tfhnn/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "tfhnn/errors.hpp"
#include "tfhnn/simd/kernels.hpp"

namespace tfhnn {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("DenseMatrix: data size " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("frobenius_distance: shape mismatch");
    double s = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    const auto& k = simd::active();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        auto ai = a.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            if (ai[p] == 0.0) continue;
            k.axpy(ai[p], b.row(p).data(), ci.data(), ci.size());
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("matmul_tn: row counts differ");
    DenseMatrix c(a.cols(), b.cols());
    const auto& k = simd::active();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        auto bi = b.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            if (ai[p] == 0.0) continue;
            k.axpy(ai[p], bi.data(), c.row(p).data(), bi.size());
        }
    }
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("matmul_nt: column counts differ");
    DenseMatrix c(a.rows(), b.rows());
    const auto& k = simd::active();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = k.dot(ai.data(), b.row(j).data(), ai.size());
    }
    return c;
}


void write_matrix_payload(std::ostream& out, const DenseMatrix& m) {
    out.write(kMatrixMagic, 4);
    binio::put_le<std::uint64_t>(out, m.rows());
    binio::put_le<std::uint64_t>(out, m.cols());
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(m.data().data()),
                  static_cast<std::streamsize>(m.size() * sizeof(double)));
    } else {
        for (double v : m.data()) binio::put_le<double>(out, v);
    }
}

DenseMatrix read_matrix_payload(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMatrixMagic, 4) != 0) throw IoError("bad matrix magic");
    const auto rows = binio::get_le<std::uint64_t>(in, "matrix header");
    const auto cols = binio::get_le<std::uint64_t>(in, "matrix header");
    std::vector<double> data(rows * cols);
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(double)));
        if (!in) throw IoError("truncated matrix payload");
    } else {
        for (auto& v : data) v = binio::get_le<double>(in, "matrix payload");
    }
    return DenseMatrix(rows, cols, std::move(data));
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_matrix_payload(out, m);
    if (!out) throw IoError("write failed: " + path.string());
}

void save_matrix_text(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    if (std::memcmp(magic, kMatrixMagic, 4) == 0) return read_matrix_payload(in);

    std::vector<double> data;
    std::size_t cols = 0, rows = 0, lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        std::size_t count = 0;
        while (ls >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw ParseError("malformed number '" + tok + "'", lineno);
            data.push_back(v);
            ++count;
        }
        if (count == 0) continue;
        if (rows == 0) cols = count;
        else if (count != cols) throw ParseError("ragged row in matrix text", lineno);
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(data));
}

std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_matrix(const DenseMatrix& m) {
    const std::uint64_t dims[2] = {m.rows(), m.cols()};
    std::uint64_t h = fnv1a(std::as_bytes(std::span(dims)));
    // One FNV step per value bit pattern rather than per byte; independent of
    // storage byte order.
    for (double v : m.data()) {
        h ^= std::bit_cast<std::uint64_t>(v);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace tfhnn
