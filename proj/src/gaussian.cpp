#include "repcol/gaussian.hpp"

#include "repcol/error.hpp"
#include "repcol/format.hpp"

#include <cmath>
#include <limits>

namespace repcol {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kStructureTol = 1e-12;
constexpr double kMomentTailGuard = 1e-6;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

GaussianState GaussianState::from_quadratures(const Matrix2r& v, const Vector2r& d) {
    if (!v.allFinite() || !d.allFinite()) fail(ErrorKind::Unphysical, "Gaussian moments must be finite");
    if (std::abs(v(0, 1) - v(1, 0)) > kStructureTol * std::max(1.0, v.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Unphysical, "quadrature covariance is not symmetric");
    Matrix2r sym = v;
    sym(0, 1) = sym(1, 0) = 0.5 * (v(0, 1) + v(1, 0));
    const double det = sym.determinant();
    if (det < 1.0 - kUncertaintyTol || !(sym(0, 0) > 0.0))
        fail(ErrorKind::Unphysical, "quadrature covariance violates det V >= 1 (det = " + format_number(det) + ")");
    return GaussianState(sym, d);
}

GaussianState GaussianState::from_covariance(const Matrix2c& a, const Vector2c& delta) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (std::abs(delta[1] - std::conj(delta[0])) > kStructureTol * std::max(1.0, std::abs(delta[0])))
        fail(ErrorKind::Unphysical, "displacement vector must be (<b>, conj <b>)");
    if (std::abs(a(0, 1) - a(1, 0)) > kStructureTol * scale || std::abs(a(0, 1).imag()) > kStructureTol * scale)
        fail(ErrorKind::Unphysical, "covariance off-diagonal must be real and symmetric");
    if (std::abs(a(1, 1) - std::conj(a(0, 0))) > kStructureTol * scale)
        fail(ErrorKind::Unphysical, "covariance diagonal entries must be complex conjugates");
    const double a01 = a(0, 1).real();
    Matrix2r v;
    v(0, 0) = a01 + a(0, 0).real();
    v(1, 1) = a01 - a(0, 0).real();
    v(0, 1) = v(1, 0) = a(0, 0).imag();
    const Vector2r d(kSqrt2 * delta[0].real(), kSqrt2 * delta[0].imag());
    return from_quadratures(v, d);
}

GaussianState GaussianState::vacuum() { return GaussianState(Matrix2r::Identity(), Vector2r::Zero()); }

GaussianState GaussianState::thermal(double beta) {
    if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "thermal Gaussian needs beta > 0");
    return GaussianState(Matrix2r::Identity() / std::tanh(0.5 * beta), Vector2r::Zero());
}

Matrix2c GaussianState::a() const {
    const double a01 = 0.5 * (v_(0, 0) + v_(1, 1));
    const cplx a00(0.5 * (v_(0, 0) - v_(1, 1)), v_(0, 1));
    Matrix2c a;
    a << a00, a01, a01, std::conj(a00);
    return a;
}

cplx GaussianState::mean_b() const { return cplx(d_[0], d_[1]) / kSqrt2; }

Vector2c GaussianState::delta() const {
    const cplx b = mean_b();
    return Vector2c(b, std::conj(b));
}

CharFn gaussian_charfn(const GaussianState& g) {
    const Matrix2c a = g.a();
    const Vector2c delta = g.delta();
    return CharFn(CharFnKind::Gaussian, [a, delta](cplx z) {
        // Omega Z = (z*, -z).
        const Vector2c oz(std::conj(z), -z);
        const cplx quad = oz.transpose() * a * oz;
        const cplx lin = delta.transpose() * oz;
        return std::exp(0.25 * quad - lin);
    });
}

GaussianState asymptotic_gaussian(const GaussianState& g, const ChannelParams& params) {
    const double scale = params.s() / (1.0 - params.c());
    return GaussianState::from_quadratures(g.v(), scale * g.d());
}

GaussianState gaussian_from_moments(const DensityMatrix& rho) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "gaussian_from_moments needs a single-mode state");
    const double top = top_level_occupation(rho, 2);
    if (top > kMomentTailGuard)
        fail(ErrorKind::Cutoff, "occupation " + format_number(top) + " of the top two levels exceeds " +
                                    format_number(kMomentTailGuard) + "; raise n_max");
    const CMatrix& m = rho.matrix();
    cplx b = 0.0, b2 = 0.0;
    for (int n = 1; n < rho.dim(); ++n) b += std::sqrt(static_cast<double>(n)) * m(n, n - 1);
    for (int n = 2; n < rho.dim(); ++n) b2 += std::sqrt(static_cast<double>(n) * (n - 1)) * m(n, n - 2);
    const double number = mean_photon_number(rho);
    Matrix2c a;
    const cplx a00 = 2.0 * (b2 - b * b);
    const double a01 = 2.0 * number + 1.0 - 2.0 * std::norm(b);
    a << a00, a01, a01, std::conj(a00);
    return GaussianState::from_covariance(a, Vector2c(b, std::conj(b)));
}

double gaussian_purity(const GaussianState& g) { return 1.0 / std::sqrt(std::max(1.0, g.v().determinant())); }

double entropy_g(double x) {
    if (x < 1.0 - GaussianState::kUncertaintyTol) fail(ErrorKind::Domain, "entropy function needs x >= 1");
    if (x <= 1.0) return 0.0;
    return xlogx(0.5 * (x + 1.0)) - xlogx(0.5 * (x - 1.0));
}

double gaussian_entropy(const GaussianState& g) { return entropy_g(std::sqrt(std::max(1.0, g.v().determinant()))); }

std::optional<double> thermal_match(const GaussianState& g, double tol) {
    const Matrix2c a = g.a();
    const double a01 = a(0, 1).real();
    if (a01 < 1.0 - tol) fail(ErrorKind::Unphysical, "covariance below the vacuum level");
    if (std::abs(a(0, 0)) > tol * a01) return std::nullopt;
    if (std::abs(g.mean_b()) > tol * std::sqrt(a01)) return std::nullopt;
    const double nbar = 0.5 * (a01 - 1.0);
    if (nbar <= 1e-12) return std::numeric_limits<double>::infinity();
    return std::log1p(1.0 / nbar);
}

nlohmann::json to_json(const GaussianState& g) {
    const Matrix2c a = g.a();
    const Vector2c delta = g.delta();
    nlohmann::json j;
    j["A_re"] = {{a(0, 0).real(), a(0, 1).real()}, {a(1, 0).real(), a(1, 1).real()}};
    j["A_im"] = {{a(0, 0).imag(), a(0, 1).imag()}, {a(1, 0).imag(), a(1, 1).imag()}};
    j["Delta_re"] = {delta[0].real(), delta[1].real()};
    j["Delta_im"] = {delta[0].imag(), delta[1].imag()};
    j["V"] = {{g.v()(0, 0), g.v()(0, 1)}, {g.v()(1, 0), g.v()(1, 1)}};
    j["d"] = {g.d()[0], g.d()[1]};
    return j;
}

GaussianState gaussian_from_json(const nlohmann::json& j) {
    try {
        Matrix2r v;
        Vector2r d;
        for (int r = 0; r < 2; ++r) {
            d[r] = j.at("d").at(r).get<double>();
            for (int c = 0; c < 2; ++c) v(r, c) = j.at("V").at(r).at(c).get<double>();
        }
        return GaussianState::from_quadratures(v, d);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("Gaussian state JSON: ") + e.what());
    }
}

}  // namespace repcol
