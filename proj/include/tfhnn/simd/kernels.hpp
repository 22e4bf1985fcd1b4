#pragma once
// Dense f64 inner-loop kernels with a scalar reference and vector variants.
//
// The elementwise kernels (axpy, lincomb, scale) produce bit-identical results
// across variants: each lane performs the same single multiply and single add
// as the scalar loop, and the build disables FMA contraction. Reductions (dot)
// reassociate and only agree with the reference to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace tfhnn::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out = a * x + b * y ; out may alias x or y
    void (*lincomb)(double a, const double* x, double b, const double* y, double* out,
                    std::size_t n);
    // x *= a
    void (*scale)(double a, double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* table_for(Isa isa) noexcept;

// Chosen once per process: TFHNN_SIMD=scalar|avx2|neon overrides, otherwise
// the widest variant the CPU supports.
const KernelTable& active() noexcept;

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), y.size());
}

inline void lincomb(double a, std::span<const double> x, double b, std::span<const double> y,
                    std::span<double> out) {
    active().lincomb(a, x.data(), b, y.data(), out.data(), out.size());
}

inline void scale(double a, std::span<double> x) { active().scale(a, x.data(), x.size()); }

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace tfhnn::simd
