#include "repcol/measures.hpp"

#include "repcol/error.hpp"
#include "repcol/format.hpp"
#include "repcol/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace repcol {

namespace {

constexpr double kEigenFloor = 1e-14;
constexpr double kNegativeEigen = 1e-8;
constexpr double kQcsTailGuard = 1e-8;

}  // namespace

double purity(const DensityMatrix& rho) {
    const double p = trace_hermitian_product(rho.matrix(), rho.matrix()).real();
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0 + 1e-10);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const RVector ev = hermitian_eigenvalues(rho.matrix());
    double s = 0.0;
    for (double p : ev) {
        if (p < -kNegativeEigen) fail(ErrorKind::Unphysical, "state has eigenvalue " + format_number(p));
        if (p >= kEigenFloor) s -= p * std::log(p);
    }
    return std::max(s, 0.0);
}

double qcs_squared(const DensityMatrix& rho) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "qcs_squared needs a single-mode state");
    const double top = top_level_occupation(rho, 4);
    if (top > kQcsTailGuard)
        fail(ErrorKind::Cutoff, "occupation " + format_number(top) + " of the top four levels exceeds " +
                                    format_number(kQcsTailGuard) + "; raise n_max");
    const ModeOperators ops = mode_operators(rho.cutoff());
    const double r = 1.0 / std::sqrt(2.0);
    const CMatrix x = r * (ops.annihilate + ops.create);
    const CMatrix p = cplx(0.0, r) * (ops.create - ops.annihilate);
    const CMatrix& m = rho.matrix();
    const double cx = (m * x - x * m).squaredNorm();
    const double cp = (m * p - p * m).squaredNorm();
    return (cx + cp) / (2.0 * purity(rho));
}

double qcs_gaussian(const GaussianState& g) {
    const double det = g.v().determinant();
    if (!(det > 0.0)) fail(ErrorKind::Unphysical, "singular quadrature covariance");
    return 0.5 * g.v().inverse().trace();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim() || rho1.mode_count() != rho2.mode_count())
        fail(ErrorKind::Shape, "trace_distance needs states of equal shape");
    const CMatrix diff = rho1.matrix() - rho2.matrix();
    double sum = 0.0;
    if (is_diagonal(diff)) {
        for (Eigen::Index i = 0; i < diff.rows(); ++i) sum += std::abs(diff(i, i).real());
    } else {
        sum = hermitian_eigenvalues(diff).cwiseAbs().sum();
    }
    return 0.5 * sum;
}

MeasureReport measure_report(const DensityMatrix& rho) {
    return {purity(rho), von_neumann_entropy(rho), qcs_squared(rho), mean_photon_number(rho)};
}

void write_measure_csv_header(std::ostream& out) { out << "purity,entropy,qcs_squared,mean_photon\n"; }

void write_measure_csv_row(const MeasureReport& r, std::ostream& out) {
    out << format_number(r.purity) << ',' << format_number(r.entropy) << ',' << format_number(r.qcs_squared) << ','
        << format_number(r.mean_photon) << '\n';
}

nlohmann::ordered_json to_json(const MeasureReport& r) {
    nlohmann::ordered_json j;
    j["purity"] = r.purity;
    j["entropy"] = r.entropy;
    j["qcs_squared"] = r.qcs_squared;
    j["mean_photon"] = r.mean_photon;
    return j;
}

}  // namespace repcol
