#include "tfhnn/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace tfhnn::simd {

#if !defined(TFHNN_HAVE_AVX2)
const KernelTable* detail::avx2_table() noexcept { return nullptr; }
#endif
#if !defined(TFHNN_HAVE_NEON)
const KernelTable* detail::neon_table() noexcept { return nullptr; }
#endif

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TFHNN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("TFHNN_SIMD")) {
        const std::string_view want{env};
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa)) {
                if (const KernelTable* t = table_for(isa)) return *t;
            }
        }
    }
    if (const KernelTable* t = table_for(Isa::avx2)) return *t;
    if (const KernelTable* t = table_for(Isa::neon)) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return &scalar_table();
        case Isa::avx2: return cpu_has_avx2() ? detail::avx2_table() : nullptr;
        case Isa::neon: return detail::neon_table();
    }
    return nullptr;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace tfhnn::simd
