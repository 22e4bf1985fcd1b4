#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tfhnn {

// Row-major dense f64 matrix. Row i of a feature matrix belongs to node v_i.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool all_finite() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using FeatureMatrix = DenseMatrix;

double frobenius_norm(const DenseMatrix& a);
// ||a - b||_F ; shapes must agree.
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

// c = a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// c = a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// c = a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

// Binary matrix container: "TFHN", u64 rows, u64 cols, rows*cols little-endian f64.
inline constexpr char kMatrixMagic[4] = {'T', 'F', 'H', 'N'};

void write_matrix_payload(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix_payload(std::istream& in);

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
// Accepts the binary container or whitespace-separated text (one row per line).
DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix_text(const std::filesystem::path& path, const DenseMatrix& m);

// 64-bit FNV-1a over raw bytes; used for provenance and config hashing.
std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed = 14695981039346656037ull);
// Shape plus every entry's bit pattern.
std::uint64_t hash_matrix(const DenseMatrix& m);

}  // namespace tfhnn
