#include "repcol/linalg.hpp"

#include "repcol/error.hpp"
#include "repcol/kernels.hpp"

#include <array>
#include <cmath>
#include <span>

namespace repcol {

namespace {

// Higham (2005) coefficients and thresholds for the 1-norm.
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <class M>
M pade_low(const M& a, std::span<const double> b) {
    const auto n = a.rows();
    const M id = M::Identity(n, n);
    const M a2 = a * a;
    M u = b[1] * id;
    M v = b[0] * id;
    M power = id;
    for (std::size_t k = 2; k < b.size(); k += 2) {
        power = power * a2;
        u += b[k + 1] * power;
        v += b[k] * power;
    }
    u = a * u;
    return (v - u).partialPivLu().solve(v + u);
}

template <class M>
M pade13(const M& a) {
    const auto n = a.rows();
    const auto& b = kPade13;
    const M id = M::Identity(n, n);
    const M a2 = a * a;
    const M a4 = a2 * a2;
    const M a6 = a4 * a2;
    M u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
          b[1] * id;
    u = a * u;
    const M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

template <class M>
M expm_impl(const M& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::Shape, "expm: matrix is not square");
    if (a.rows() == 0) return a;
    if (!a.allFinite()) fail(ErrorKind::Numerical, "expm: non-finite input");
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    if (norm <= kTheta3) return pade_low<M>(a, kPade3);
    if (norm <= kTheta5) return pade_low<M>(a, kPade5);
    if (norm <= kTheta7) return pade_low<M>(a, kPade7);
    if (norm <= kTheta9) return pade_low<M>(a, kPade9);
    int squarings = 0;
    if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    M r = pade13<M>(a / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

}  // namespace

CMatrix expm(const CMatrix& a) { return expm_impl(a); }
RMatrix expm(const RMatrix& a) { return expm_impl(a); }

CMatrix expm_antihermitian(const CMatrix& g) {
    const CMatrix h = cplx(0.0, 1.0) * g;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
    if (eig.info() != Eigen::Success) fail(ErrorKind::Numerical, "expm_antihermitian: eigensolver failed");
    const RVector& w = eig.eigenvalues();
    CVector phase(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phase[i] = std::polar(1.0, -w[i]);
    return eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint();
}

RVector hermitian_eigenvalues(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) fail(ErrorKind::Numerical, "eigensolver failed");
    return eig.eigenvalues();
}

cplx trace_hermitian_product(const CMatrix& h, const CMatrix& m) {
    if (h.rows() != m.rows() || h.cols() != m.cols())
        fail(ErrorKind::Shape, "trace_hermitian_product: shape mismatch");
    const auto n = static_cast<std::size_t>(h.size());
    return kernels::cdotc({h.data(), n}, {m.data(), n});
}

double hermiticity_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_diagonal(const CMatrix& m, double tol) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
}

}  // namespace repcol
