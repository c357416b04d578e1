#pragma once

#include "repcol/fock.hpp"

#include <random>

namespace fixtures {

using repcol::CMatrix;
using repcol::cplx;

// Mixed state of rank `rank` supported on levels 0..support-1.
inline repcol::DensityMatrix random_state(std::mt19937_64& rng, repcol::FockCutoff cutoff, int support, int rank) {
    std::normal_distribution<double> g;
    const int d = cutoff.dim();
    CMatrix w = CMatrix::Zero(d, rank);
    for (int r = 0; r < rank; ++r)
        for (int i = 0; i < support; ++i) w(i, r) = cplx(g(rng), g(rng));
    CMatrix m = w * w.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint()).eval();
    return repcol::DensityMatrix::single_mode(m, cutoff);
}

inline cplx random_z(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cplx z;
    do z = cplx(u(rng), u(rng));
    while (std::abs(z) > 1.0);
    return radius * z;
}

}  // namespace fixtures
