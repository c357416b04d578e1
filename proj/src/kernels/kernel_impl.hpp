#pragma once

// Declarations shared by the per-ISA kernel translation units. Plain
// doubles only; see kernels.hpp.

#include <cstddef>

namespace repcol::kernels::scalar {
void caxpy(std::size_t n, const double* a, const double* x, double* y);
void cmul_acc(std::size_t n, const double* k, const double* x, double* y);
void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y);
void cdotc(std::size_t n, const double* x, const double* y, double* out);
}  // namespace repcol::kernels::scalar

namespace repcol::kernels::avx2 {
void caxpy(std::size_t n, const double* a, const double* x, double* y);
void cmul_acc(std::size_t n, const double* k, const double* x, double* y);
void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y);
void cdotc(std::size_t n, const double* x, const double* y, double* out);
}  // namespace repcol::kernels::avx2

namespace repcol::kernels::neon {
void caxpy(std::size_t n, const double* a, const double* x, double* y);
void cmul_acc(std::size_t n, const double* k, const double* x, double* y);
void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y);
void cdotc(std::size_t n, const double* x, const double* y, double* out);
}  // namespace repcol::kernels::neon
