// AArch64 only; Advanced SIMD is mandatory there so no runtime probe is needed.
#include "tfhnn/simd/kernels.hpp"

#include <arm_neon.h>

namespace tfhnn::simd {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float64x2_t y0 = vld1q_f64(y + i);
        float64x2_t y1 = vld1q_f64(y + i + 2);
        y0 = vaddq_f64(y0, vmulq_f64(va, vld1q_f64(x + i)));
        y1 = vaddq_f64(y1, vmulq_f64(va, vld1q_f64(x + i + 2)));
        vst1q_f64(y + i, y0);
        vst1q_f64(y + i + 2, y1);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void lincomb_neon(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t ax = vmulq_f64(va, vld1q_f64(x + i));
        float64x2_t by = vmulq_f64(vb, vld1q_f64(y + i));
        vst1q_f64(out + i, vaddq_f64(ax, by));
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_neon(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

constexpr KernelTable kNeon{Isa::neon, axpy_neon, lincomb_neon, scale_neon, dot_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table() noexcept { return &kNeon; }
}  // namespace detail

}  // namespace tfhnn::simd
