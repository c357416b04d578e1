#include "kernel_impl.hpp"

namespace repcol::kernels::scalar {

void caxpy(std::size_t n, const double* a, const double* x, double* y) {
    const double ar = a[0], ai = a[1];
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += ar * xr - ai * xi;
        y[2 * i + 1] += ar * xi + ai * xr;
    }
}

void cmul_acc(std::size_t n, const double* k, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const double kr = k[2 * i], ki = k[2 * i + 1];
        const double xr = x[2 * i], xi = x[2 * i + 1];
        y[2 * i] += kr * xr - ki * xi;
        y[2 * i + 1] += kr * xi + ki * xr;
    }
}

void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y) {
    for (std::size_t i = 0; i < 2 * rows; ++i) y[i] = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        const double xr = x[2 * j], xi = x[2 * j + 1];
        const double* col = m + j * ld;
        for (std::size_t i = 0; i < rows; ++i) {
            y[2 * i] += col[i] * xr;
            y[2 * i + 1] += col[i] * xi;
        }
    }
}

void cdotc(std::size_t n, const double* x, const double* y, double* out) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double yr = y[2 * i], yi = y[2 * i + 1];
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    out[0] = re;
    out[1] = im;
}

}  // namespace repcol::kernels::scalar
