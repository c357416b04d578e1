#pragma once

// Hot inner loops of the channel and state functionals.
//
// Every kernel exists as a portable scalar reference and, where the build
// target allows it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The
// variant is chosen once per process at first use: the best ISA the CPU
// reports, unless REPCOL_KERNELS=scalar|avx2|neon forces one.
//
// Complex data is passed as interleaved (re, im) doubles, which is the
// layout of std::complex<double> arrays and of Eigen::MatrixXcd storage.
// The ISA-specific translation units never include <complex> or Eigen, so
// no inline template gets compiled with wider instructions than the
// process may support.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace repcol::kernels {

struct KernelTable {
    const char* name;

    // y[i] += a * x[i]
    void (*caxpy)(std::size_t n, const double* a, const double* x, double* y);

    // y[i] += k[i] * x[i]
    void (*cmul_acc)(std::size_t n, const double* k, const double* x, double* y);

    // y = M x, M real rows x cols column-major with leading dimension ld,
    // x and y complex.
    void (*rgemv_cplx)(std::size_t rows, std::size_t cols, const double* m,
                       std::size_t ld, const double* x, double* y);

    // out = sum_i conj(x[i]) * y[i]
    void (*cdotc)(std::size_t n, const double* x, const double* y, double* out);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

const KernelTable& active() noexcept;
std::string_view active_name() noexcept;

using cplx = std::complex<double>;

namespace detail {
inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }
}  // namespace detail

inline void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n,
                  const KernelTable& t = active()) {
    const double av[2] = {a.real(), a.imag()};
    t.caxpy(n, av, detail::raw(x), detail::raw(y));
}

inline void cmul_acc(const cplx* k, const cplx* x, cplx* y, std::size_t n,
                     const KernelTable& t = active()) {
    t.cmul_acc(n, detail::raw(k), detail::raw(x), detail::raw(y));
}

inline void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                       const cplx* x, cplx* y, const KernelTable& t = active()) {
    t.rgemv_cplx(rows, cols, m, ld, detail::raw(x), detail::raw(y));
}

inline cplx cdotc(std::span<const cplx> x, std::span<const cplx> y,
                  const KernelTable& t = active()) {
    double out[2];
    t.cdotc(x.size(), detail::raw(x.data()), detail::raw(y.data()), out);
    return {out[0], out[1]};
}

}  // namespace repcol::kernels
