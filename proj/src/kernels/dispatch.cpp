#include "repcol/kernels.hpp"

#include "kernel_impl.hpp"

#include <cstdlib>
#include <string>

namespace repcol::kernels {

namespace {

constexpr KernelTable kScalar{"scalar", scalar::caxpy, scalar::cmul_acc, scalar::rgemv_cplx,
                              scalar::cdotc};

#if defined(REPCOL_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2", avx2::caxpy, avx2::cmul_acc, avx2::rgemv_cplx, avx2::cdotc};
#endif

#if defined(REPCOL_HAVE_NEON)
constexpr KernelTable kNeon{"neon", neon::caxpy, neon::cmul_acc, neon::rgemv_cplx, neon::cdotc};
#endif

const KernelTable& select() {
    const char* forced = std::getenv("REPCOL_KERNELS");
    const std::string want = forced ? forced : "auto";
    if (want == "scalar") return kScalar;
    if (want == "avx2" || want == "auto") {
        if (const auto* t = avx2_table()) return *t;
    }
    if (want == "neon" || want == "auto") {
        if (const auto* t = neon_table()) return *t;
    }
    return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(REPCOL_HAVE_AVX2)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(REPCOL_HAVE_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out{&kScalar};
    if (const auto* t = avx2_table()) out.push_back(t);
    if (const auto* t = neon_table()) out.push_back(t);
    return out;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::string_view active_name() noexcept { return active().name; }

}  // namespace repcol::kernels
