#include "repcol/charfn.hpp"

#include "repcol/error.hpp"
#include "repcol/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <string>

namespace repcol {

namespace {

constexpr int kC0Samples = 64;
constexpr double kC0Step = 1e-4;
constexpr double kC0Safety = 1.5;
constexpr double kDirectFactor = 1e-3;
constexpr double kUnderflow = 1e-300;
constexpr int kMaxTerms = 50'000'000;

constexpr double kFdStep = 1e-3;
constexpr double kRichardsonTol = 1e-5;
constexpr double kFitResidualTol = 1e-7;

double max_c0(const CharFn& chi, cplx direction) {
    double best = 0.0;
    for (int i = 0; i < kC0Samples; ++i) {
        const double y = static_cast<double>(i) / (kC0Samples - 1);
        const cplx hi = chi((y + kC0Step) * direction);
        const cplx lo = chi((y - kC0Step) * direction);
        const double der = std::abs(hi - lo) / (2.0 * kC0Step);
        if (!std::isfinite(der)) fail(ErrorKind::Numerical, "derivative bound estimate is not finite");
        best = std::max(best, der);
    }
    return kC0Safety * best;
}

double tail_bound_for(double c0, double c, int k) {
    if (c == 0.0 || c0 == 0.0) return 0.0;
    return 2.0 * c0 * std::pow(c, k) / (1.0 - c);
}

ProductValue multiply_factors(const CharFn& chi, double s, double c, cplx z, int k_terms) {
    ProductValue out{};
    cplx log_sum = 0.0;     // factors close enough to 1 for the principal branch
    cplx log_direct = 0.0;  // logs of the directly multiplied factors
    cplx direct = 1.0;
    double scale = s;
    for (int k = 0; k < k_terms; ++k) {
        const cplx f = chi(scale * z);
        const double mag = std::abs(f);
        if (!std::isfinite(mag)) fail(ErrorKind::Numerical, "non-finite factor in asymptotic product");
        if (mag < kUnderflow) {
            out.value = 0.0;
            out.log_value = cplx(-std::numeric_limits<double>::infinity(), 0.0);
            out.underflow = true;
            return out;
        }
        if (mag < kDirectFactor) {
            direct *= f;
            log_direct += std::log(f);
        } else {
            log_sum += std::log(f);
        }
        scale *= c;
    }
    out.value = direct * std::exp(log_sum);
    out.log_value = log_sum + log_direct;
    return out;
}

}  // namespace

const char* to_string(CharFnKind kind) noexcept {
    switch (kind) {
        case CharFnKind::MatrixBacked: return "matrix_backed";
        case CharFnKind::Thermal: return "thermal";
        case CharFnKind::Fock: return "fock";
        case CharFnKind::Coherent: return "coherent";
        case CharFnKind::Gaussian: return "gaussian";
        case CharFnKind::ProductAsymptotic: return "product_asymptotic";
    }
    return "unknown";
}

int displacement_padding(cplx z) {
    return 30 + static_cast<int>(std::ceil(6.0 * std::norm(z)));
}

CharFn charfn_of_state(const DensityMatrix& rho) {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "charfn_of_state needs a single-mode state");
    auto m = std::make_shared<const CMatrix>(rho.matrix());
    const int n_max = rho.cutoff().n_max();
    return CharFn(CharFnKind::MatrixBacked, [m, n_max](cplx z) {
        const FockCutoff padded(n_max + displacement_padding(z));
        const CMatrix dz = displacement_matrix(z, padded);
        const auto d = m->rows();
        const CMatrix block = dz.topLeftCorner(d, d);
        return trace_hermitian_product(*m, block);
    });
}

double laguerre(int n, double x) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "Laguerre degree must be nonnegative");
    // binom(n, j) (-x)^j / j!, built term by term.
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= n; ++j) {
        term *= -x * static_cast<double>(n - j + 1) / (static_cast<double>(j) * j);
        sum += term;
    }
    return sum;
}

CharFn charfn_fock(int n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "Fock level must be nonnegative");
    return CharFn(CharFnKind::Fock, [n](cplx z) {
        const double x = std::norm(z);
        return cplx(std::exp(-0.5 * x) * laguerre(n, x), 0.0);
    });
}

CharFn charfn_thermal(double beta) {
    if (!(beta > 0.0)) fail(ErrorKind::InvalidArgument, "thermal characteristic function needs beta > 0");
    const double coth = 1.0 / std::tanh(0.5 * beta);
    return CharFn(CharFnKind::Thermal,
                  [coth](cplx z) { return cplx(std::exp(-0.5 * std::norm(z) * coth), 0.0); });
}

CharFn charfn_coherent(cplx alpha) {
    return CharFn(CharFnKind::Coherent, [alpha](cplx z) {
        return std::exp(-0.5 * std::norm(z) + z * std::conj(alpha) - std::conj(z) * alpha);
    });
}

ProductValue asymptotic_product(const CharFn& chi_sigma, const ChannelParams& params, cplx z, double rel_tol) {
    if (!(rel_tol >= 1e-12)) fail(ErrorKind::InvalidArgument, "product tolerance must be >= 1e-12");
    const double s = params.s(), c = params.c();
    if (c == 0.0) {
        ProductValue out = multiply_factors(chi_sigma, s, c, z, 1);
        out.trunc = {1, 0.0};
        return out;
    }
    const double c0 = max_c0(chi_sigma, s * z);
    int k = 1;
    if (c0 > 0.0) {
        const double need_tail = std::log(rel_tol * (1.0 - c) / (2.0 * c0)) / std::log(c);
        const double need_small = std::log(0.5 / c0) / std::log(c);
        const double kk = std::ceil(std::max({1.0, need_tail, need_small}));
        if (!(kk <= kMaxTerms))
            fail(ErrorKind::Numerical, "asymptotic product needs more than " + std::to_string(kMaxTerms) + " factors");
        k = static_cast<int>(kk);
    }
    ProductValue out = multiply_factors(chi_sigma, s, c, z, k);
    out.trunc = {k, tail_bound_for(c0, c, k)};
    return out;
}

ProductValue asymptotic_product_terms(const CharFn& chi_sigma, const ChannelParams& params, cplx z, int k_terms) {
    if (k_terms < 1) fail(ErrorKind::InvalidArgument, "product needs at least one factor");
    const double s = params.s(), c = params.c();
    ProductValue out = multiply_factors(chi_sigma, s, c, z, k_terms);
    out.trunc = {k_terms, c == 0.0 ? 0.0 : tail_bound_for(max_c0(chi_sigma, s * z), c, k_terms)};
    return out;
}

CharFn product_charfn(CharFn chi_sigma, const ChannelParams& params, double rel_tol) {
    return CharFn(CharFnKind::ProductAsymptotic, [chi = std::move(chi_sigma), params, rel_tol](cplx z) {
        return asymptotic_product(chi, params, z, rel_tol).value;
    });
}

double q_pochhammer(double a, double q, double rel_tol) {
    if (!(q < 1.0) || !(q > -1.0))
        fail(ErrorKind::Domain, "q-Pochhammer needs |q| < 1, got q = " + format_number(q));
    if (!(rel_tol > 0.0)) fail(ErrorKind::InvalidArgument, "q-Pochhammer tolerance must be positive");
    const double stop = rel_tol * (1.0 - std::abs(q));
    double prod = 1.0, aq = a;
    for (int k = 0; k < kMaxTerms; ++k) {
        if (std::abs(aq) < stop) return prod;
        prod *= 1.0 - aq;
        aq *= q;
    }
    fail(ErrorKind::Numerical, "q-Pochhammer product did not reach its tolerance");
}

namespace {

struct Derivatives {
    cplx dx, dy, dxx, dyy, dxy;
};

Derivatives differentiate(const CharFn& chi, double h) {
    auto f = [&](double x, double y) { return chi(cplx(x, y)); };
    const cplx f0 = f(0, 0);
    const cplx fxp = f(h, 0), fxm = f(-h, 0), fyp = f(0, h), fym = f(0, -h);
    const double h2 = h * h;
    return {(fxp - fxm) / (2 * h), (fyp - fym) / (2 * h), (fxp - 2.0 * f0 + fxm) / h2,
            (fyp - 2.0 * f0 + fym) / h2, (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h2)};
}

cplx richardson(cplx coarse, cplx fine, const char* what) {
    const double change = std::abs(coarse - fine) / std::max(1.0, std::abs(fine));
    if (change > kRichardsonTol)
        fail(ErrorKind::Numerical, std::string("finite-difference estimate of ") + what +
                                       " is unstable (step halving changes it by a relative " +
                                       format_number(change) + ")");
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

CharFnMoments moments_from_charfn(const CharFn& chi) {
    const Derivatives big = differentiate(chi, kFdStep);
    const Derivatives small = differentiate(chi, kFdStep / 2);
    const cplx dx = richardson(big.dx, small.dx, "d/dx");
    const cplx dy = richardson(big.dy, small.dy, "d/dy");
    const cplx dxx = richardson(big.dxx, small.dxx, "d2/dx2");
    const cplx dyy = richardson(big.dyy, small.dyy, "d2/dy2");
    const cplx dxy = richardson(big.dxy, small.dxy, "d2/dxdy");
    const cplx i(0.0, 1.0);

    CharFnMoments m{};
    m.mean_a = -0.5 * (dx + i * dy);
    const double sym = (-0.25 * (dxx + dyy)).real();  // <a^dag a> + 1/2
    const cplx a2 = 0.25 * (dxx - dyy + 2.0 * i * dxy);
    m.mean_number = sym - 0.5;
    m.cov_adag_a = sym - std::norm(m.mean_a);
    m.cov_aa = a2 - m.mean_a * m.mean_a;
    return m;
}

double log_charfn_quartic_coeff(const CharFn& chi) {
    constexpr int n = 9;
    RMatrix design(n, 3);
    RVector y(n);
    for (int j = 0; j < n; ++j) {
        const double t = -0.4 + 0.1 * j;
        const cplx v = chi(cplx(t, 0.0));
        if (!(std::abs(v) > 0.0)) fail(ErrorKind::Numerical, "characteristic function vanishes on the fit interval");
        const double t2 = t * t;
        design(j, 0) = t2;
        design(j, 1) = t2 * t2;
        design(j, 2) = t2 * t2 * t2;
        y[j] = std::log(std::abs(v));
    }
    const RVector coef = design.colPivHouseholderQr().solve(y);
    const double residual = (design * coef - y).cwiseAbs().maxCoeff();
    if (residual > kFitResidualTol)
        fail(ErrorKind::Numerical, "even-polynomial fit of ln chi has residual " + format_number(residual));
    return coef[1];
}

cplx displacement_generator_variance(const DensityMatrix& sigma, cplx z) {
    if (sigma.mode_count() != 1) fail(ErrorKind::Shape, "variance needs a single-mode state");
    const CMatrix& m = sigma.matrix();
    cplx mean_a = 0.0, mean_a2 = 0.0;
    for (int n = 1; n < sigma.dim(); ++n) mean_a += std::sqrt(static_cast<double>(n)) * m(n, n - 1);
    for (int n = 2; n < sigma.dim(); ++n)
        mean_a2 += std::sqrt(static_cast<double>(n) * (n - 1)) * m(n, n - 2);
    const double number = mean_photon_number(sigma);
    const cplx phi = z * std::conj(mean_a) - std::conj(z) * mean_a;
    const cplx phi2 = z * z * std::conj(mean_a2) + std::conj(z) * std::conj(z) * mean_a2 -
                      std::norm(z) * (2.0 * number + 1.0);
    return phi2 - phi * phi;
}

std::vector<cplx> ZGrid::points() const {
    if (!(radius > 0.0) || count < 1) fail(ErrorKind::InvalidArgument, "z-grid needs radius > 0 and count >= 1");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out.push_back(std::polar(radius * (j + 1) / count, golden * j));
    return out;
}

std::vector<GridSample> evaluate_grid(const CharFn& chi, const ZGrid& grid) {
    std::vector<GridSample> out;
    for (cplx z : grid.points()) out.push_back({z, chi(z), 0.0});
    return out;
}

std::vector<GridSample> evaluate_product_grid(const CharFn& chi_sigma, const ChannelParams& params,
                                              const ZGrid& grid, double rel_tol) {
    std::vector<GridSample> out;
    for (cplx z : grid.points()) {
        const ProductValue p = asymptotic_product(chi_sigma, params, z, rel_tol);
        out.push_back({z, p.value, p.trunc.tail_bound});
    }
    return out;
}

void write_grid_csv(const std::vector<GridSample>& samples, std::ostream& out) {
    out << "re_z,im_z,re_chi,im_chi,abs_chi,tail_bound\n";
    for (const GridSample& s : samples)
        out << format_number(s.z.real()) << ',' << format_number(s.z.imag()) << ',' << format_number(s.chi.real())
            << ',' << format_number(s.chi.imag()) << ',' << format_number(std::abs(s.chi)) << ','
            << format_number(s.tail_bound) << '\n';
}

}  // namespace repcol
