#pragma once

// Brute-force reference computations, deliberately built along different
// routes from the library: dense two-mode matrices, eigendecomposition
// exponentials and closed-form displacement matrix elements.

#include "repcol/fock.hpp"
#include "repcol/linalg.hpp"

#include <cmath>

namespace oracle {

using repcol::CMatrix;
using repcol::cplx;
using repcol::DensityMatrix;
using repcol::FockCutoff;

inline CMatrix kron(const CMatrix& x, const CMatrix& y) {
    CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

inline CMatrix lowering(int d) {
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// exp(lambda (a^dag b - a b^dag)) through the eigenvectors of the Hermitian
// generator on the full truncated joint space.
inline CMatrix beam_splitter(double lambda, int n_max) {
    const int d = n_max + 1;
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix a = kron(lowering(d), id), b = kron(id, lowering(d));
    const CMatrix g = lambda * (a.adjoint() * b - a * b.adjoint());
    return repcol::expm_antihermitian(g);
}

inline CMatrix channel(const CMatrix& rho, const CMatrix& sigma, double lambda) {
    const int d = static_cast<int>(rho.rows());
    const CMatrix s = beam_splitter(lambda, d - 1);
    const CMatrix joint = s * kron(rho, sigma) * s.adjoint();
    CMatrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = joint.block(i * d, j * d, d, d).trace();
    return out;
}

// Generalised Laguerre L_n^(k)(x) by the three-term recurrence.
inline long double glaguerre(int n, int k, long double x) {
    if (n == 0) return 1.0L;
    long double prev = 1.0L, cur = 1.0L + k - x;
    for (int j = 1; j < n; ++j) {
        const long double next = ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

// <m| D(z) |n> of the untruncated displacement operator.
inline cplx displacement_element(int m, int n, cplx z) {
    const long double x = std::norm(z);
    const bool lower = m >= n;
    const int hi = lower ? m : n, lo = lower ? n : m;
    const long double norm = std::exp(0.5L * (std::lgamma(lo + 1.0L) - std::lgamma(hi + 1.0L)) - 0.5L * x);
    const cplx base = lower ? z : -std::conj(z);
    const cplx power = std::pow(base, hi - lo);
    return static_cast<double>(norm * glaguerre(lo, hi - lo, x)) * power;
}

inline cplx charfn(const CMatrix& rho, cplx z) {
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            acc += rho(i, j) * displacement_element(static_cast<int>(j), static_cast<int>(i), z);
    return acc;
}

inline double trace_distance(const CMatrix& x, const CMatrix& y) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(x - y, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace oracle
