#include "repcol/fock.hpp"

#include "repcol/error.hpp"
#include "repcol/format.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace repcol {

namespace {

constexpr double kTailMassTol = 1e-8;
constexpr int kDefaultMaxJointDim = 4096;

}  // namespace

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
    if (n_max < 1) fail(ErrorKind::InvalidArgument, "Fock cutoff n_max must be >= 1, got " + std::to_string(n_max));
}

int max_joint_dim() {
    if (const char* env = std::getenv("REPCOL_MAX_DIM")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return kDefaultMaxJointDim;
}

DensityMatrix::DensityMatrix(CMatrix m, int modes, std::array<FockCutoff, 2> cutoffs)
    : m_(std::move(m)), modes_(modes), cutoffs_(cutoffs) {
    const int expected = modes == 1 ? cutoffs[0].dim() : cutoffs[0].dim() * cutoffs[1].dim();
    if (m_.rows() != expected || m_.cols() != expected)
        fail(ErrorKind::Shape, "density matrix shape " + std::to_string(m_.rows()) + "x" +
                                   std::to_string(m_.cols()) + " does not match cutoff dimension " +
                                   std::to_string(expected));
    if (!m_.allFinite()) fail(ErrorKind::Unphysical, "density matrix has non-finite entries");
    const double herm = hermiticity_defect(m_);
    if (herm > kHermiticityTol)
        fail(ErrorKind::Unphysical, "density matrix is not Hermitian (defect " + format_number(herm) + ")");
    const double tr_err = std::abs(m_.trace() - cplx(1.0, 0.0));
    if (tr_err > kTraceTol)
        fail(ErrorKind::Unphysical, "density matrix trace deviates from 1 by " + format_number(tr_err));
}

DensityMatrix DensityMatrix::single_mode(CMatrix m, FockCutoff cutoff) {
    return DensityMatrix(std::move(m), 1, {cutoff, cutoff});
}

DensityMatrix DensityMatrix::two_mode(CMatrix m, FockCutoff a, FockCutoff b) {
    return DensityMatrix(std::move(m), 2, {a, b});
}

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(m_)[0]; }

void DensityMatrix::check_positive(double tol) const {
    const double lo = min_eigenvalue();
    if (lo < -tol)
        fail(ErrorKind::Unphysical, "density matrix has negative eigenvalue " + format_number(lo));
}

ModeOperators mode_operators(FockCutoff cutoff) {
    const int d = cutoff.dim();
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    CMatrix ad = a.adjoint();
    CMatrix num = ad * a;
    return {std::move(a), std::move(ad), std::move(num)};
}

CMatrix displacement_matrix(cplx z, FockCutoff cutoff) {
    const ModeOperators ops = mode_operators(cutoff);
    return expm(CMatrix(z * ops.create - std::conj(z) * ops.annihilate));
}

DensityMatrix fock_state(int n, FockCutoff cutoff) {
    if (n < 0 || n > cutoff.n_max())
        fail(ErrorKind::InvalidArgument, "Fock level " + std::to_string(n) + " outside [0, " +
                                             std::to_string(cutoff.n_max()) + "]");
    CMatrix m = CMatrix::Zero(cutoff.dim(), cutoff.dim());
    m(n, n) = 1.0;
    return DensityMatrix::single_mode(std::move(m), cutoff);
}

DensityMatrix thermal_state(double beta, FockCutoff cutoff) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        fail(ErrorKind::InvalidArgument, "thermal state needs beta > 0");
    const double tail = std::exp(-beta * (cutoff.n_max() + 1));
    if (tail > kTailMassTol)
        fail(ErrorKind::Cutoff, "thermal state tail mass " + format_number(tail) +
                                    " beyond n_max=" + std::to_string(cutoff.n_max()) + " exceeds 1e-8");
    const int d = cutoff.dim();
    RVector p(d);
    for (int n = 0; n < d; ++n) p[n] = std::exp(-beta * n);
    p /= p.sum();
    CMatrix m = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) m(n, n) = p[n];
    return DensityMatrix::single_mode(std::move(m), cutoff);
}

double thermal_beta(double nbar) {
    if (!(nbar > 0.0)) fail(ErrorKind::InvalidArgument, "thermal_beta needs nbar > 0");
    return std::log1p(1.0 / nbar);
}

DensityMatrix coherent_state(cplx alpha, FockCutoff cutoff) {
    const double mean = std::norm(alpha);
    if (mean > cutoff.n_max() / 4.0)
        fail(ErrorKind::Cutoff, "coherent state |alpha|^2=" + format_number(mean) +
                                    " exceeds n_max/4 for n_max=" + std::to_string(cutoff.n_max()));
    const int d = cutoff.dim();
    CVector psi(d);
    psi[0] = std::exp(-0.5 * mean);
    for (int n = 1; n < d; ++n) psi[n] = psi[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    // Poisson tail beyond n_max, summed directly to avoid 1 - (1 - eps).
    double tail = 0.0;
    double term = std::norm(psi[d - 1]);
    for (int n = d; n < d + 2000 && term > 0.0; ++n) {
        term *= mean / n;
        tail += term;
        if (term < 1e-20 * (tail + 1e-300)) break;
    }
    if (tail > kTailMassTol)
        fail(ErrorKind::Cutoff, "coherent state tail mass " + format_number(tail) + " exceeds 1e-8");
    psi /= psi.norm();
    return DensityMatrix::single_mode(psi * psi.adjoint(), cutoff);
}

DensityMatrix tensor_product(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
    if (rho_a.mode_count() != 1 || rho_b.mode_count() != 1)
        fail(ErrorKind::Shape, "tensor_product needs two single-mode states");
    const long joint = static_cast<long>(rho_a.dim()) * rho_b.dim();
    if (joint > max_joint_dim())
        fail(ErrorKind::Resource, "joint dimension " + std::to_string(joint) +
                                      " exceeds limit " + std::to_string(max_joint_dim()));
    const int da = rho_a.dim(), db = rho_b.dim();
    CMatrix m(joint, joint);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = rho_a.matrix()(i, j) * rho_b.matrix();
    return DensityMatrix::two_mode(std::move(m), rho_a.cutoff(), rho_b.cutoff());
}

DensityMatrix partial_trace_b(const DensityMatrix& rho_ab) {
    if (rho_ab.mode_count() != 2) fail(ErrorKind::Shape, "partial_trace_b needs a two-mode state");
    const int da = rho_ab.cutoff(0).dim(), db = rho_ab.cutoff(1).dim();
    CMatrix out(da, da);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) out(i, j) = rho_ab.matrix().block(i * db, j * db, db, db).trace();
    // Entrywise trace sums are only Hermitian up to rounding.
    CMatrix herm = 0.5 * (out + out.adjoint());
    return DensityMatrix::single_mode(std::move(herm), rho_ab.cutoff(0));
}

DensityMatrix displace(const DensityMatrix& rho, cplx alpha) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "displace needs a single-mode state");
    const int d = rho.dim();
    // Build D on a padded space so that boundary truncation of the
    // exponential does not reach the retained block.
    const FockCutoff padded(rho.cutoff().n_max() + 40 + static_cast<int>(std::ceil(8.0 * std::abs(alpha) * std::abs(alpha))));
    const CMatrix dfull = displacement_matrix(alpha, padded);
    const int dp = padded.dim();
    CMatrix big = CMatrix::Zero(dp, dp);
    big.topLeftCorner(d, d) = rho.matrix();
    const CMatrix moved = dfull * big * dfull.adjoint();
    const double lost = std::abs(1.0 - moved.topLeftCorner(d, d).trace().real());
    if (lost > DensityMatrix::kTraceTol)
        fail(ErrorKind::Cutoff, "displaced state leaks " + format_number(lost) + " beyond n_max");
    CMatrix kept = moved.topLeftCorner(d, d);
    kept = 0.5 * (kept + kept.adjoint()).eval();
    kept /= kept.trace().real();
    return DensityMatrix::single_mode(std::move(kept), rho.cutoff());
}

double mean_photon_number(const DensityMatrix& rho) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "mean_photon_number needs a single-mode state");
    double s = 0.0;
    for (int n = 1; n < rho.dim(); ++n) s += n * rho.matrix()(n, n).real();
    return s;
}

double top_level_occupation(const DensityMatrix& rho, int levels) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "top_level_occupation needs a single-mode state");
    double s = 0.0;
    for (int n = std::max(0, rho.dim() - levels); n < rho.dim(); ++n) s += rho.matrix()(n, n).real();
    return s;
}

nlohmann::json to_json(const DensityMatrix& rho) {
    nlohmann::json j;
    j["dim"] = rho.dim();
    j["mode_count"] = rho.mode_count();
    if (rho.mode_count() == 1)
        j["n_max"] = rho.cutoff().n_max();
    else
        j["n_max"] = {rho.cutoff(0).n_max(), rho.cutoff(1).n_max()};
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < rho.dim(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
        for (int k = 0; k < rho.dim(); ++k) {
            rr.push_back(rho.matrix()(i, k).real());
            ii.push_back(rho.matrix()(i, k).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const int modes = j.at("mode_count").get<int>();
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim)
            fail(ErrorKind::Shape, "density matrix JSON rows do not match dim");
        CMatrix m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(re[i].size()) != dim || static_cast<int>(im[i].size()) != dim)
                fail(ErrorKind::Shape, "density matrix JSON row length does not match dim");
            for (int k = 0; k < dim; ++k) m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
        }
        if (modes == 1) return DensityMatrix::single_mode(std::move(m), FockCutoff(j.at("n_max").get<int>()));
        if (modes == 2) {
            const auto& nm = j.at("n_max");
            return DensityMatrix::two_mode(std::move(m), FockCutoff(nm.at(0).get<int>()),
                                           FockCutoff(nm.at(1).get<int>()));
        }
        fail(ErrorKind::Shape, "mode_count must be 1 or 2");
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("density matrix JSON: ") + e.what());
    }
}

}  // namespace repcol
