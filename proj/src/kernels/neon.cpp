// aarch64 only; NEON is architecturally guaranteed there.

#include "kernel_impl.hpp"

#include <arm_neon.h>

namespace repcol::kernels::neon {

void caxpy(std::size_t n, const double* a, const double* x, double* y) {
    const float64x2_t sign_ai = {-a[1], a[1]};
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(x + 2 * i);
        const float64x2_t xs = vextq_f64(xv, xv, 1);
        float64x2_t yv = vld1q_f64(y + 2 * i);
        yv = vfmaq_n_f64(yv, xv, a[0]);
        yv = vfmaq_f64(yv, xs, sign_ai);
        vst1q_f64(y + 2 * i, yv);
    }
}

void cmul_acc(std::size_t n, const double* k, const double* x, double* y) {
    const float64x2_t flip = {-1.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t kv = vld1q_f64(k + 2 * i);
        const float64x2_t xv = vld1q_f64(x + 2 * i);
        const float64x2_t xs = vextq_f64(xv, xv, 1);
        float64x2_t yv = vld1q_f64(y + 2 * i);
        yv = vfmaq_laneq_f64(yv, xv, kv, 0);
        yv = vfmaq_f64(yv, vmulq_laneq_f64(xs, kv, 1), flip);
        vst1q_f64(y + 2 * i, yv);
    }
}

void rgemv_cplx(std::size_t rows, std::size_t cols, const double* m, std::size_t ld,
                const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) vst1q_f64(y + 2 * i, vdupq_n_f64(0.0));
    for (std::size_t j = 0; j < cols; ++j) {
        const float64x2_t xv = vld1q_f64(x + 2 * j);
        const double* col = m + j * ld;
        for (std::size_t i = 0; i < rows; ++i) {
            vst1q_f64(y + 2 * i, vfmaq_n_f64(vld1q_f64(y + 2 * i), xv, col[i]));
        }
    }
}

void cdotc(std::size_t n, const double* x, const double* y, double* out) {
    float64x2_t same = vdupq_n_f64(0.0);
    float64x2_t cross = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(x + 2 * i);
        const float64x2_t yv = vld1q_f64(y + 2 * i);
        same = vfmaq_f64(same, xv, yv);
        cross = vfmaq_f64(cross, xv, vextq_f64(yv, yv, 1));
    }
    out[0] = vgetq_lane_f64(same, 0) + vgetq_lane_f64(same, 1);
    out[1] = vgetq_lane_f64(cross, 0) - vgetq_lane_f64(cross, 1);
}

}  // namespace repcol::kernels::neon
