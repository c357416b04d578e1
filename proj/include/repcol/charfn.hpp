#pragma once

// Characteristic functions chi(z) = Tr(rho D(z)), D(z) = exp(z a^dag - z* a),
// the infinite-product asymptotic state and its special functions.

#include "repcol/channel.hpp"
#include "repcol/fock.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace repcol {

enum class CharFnKind { MatrixBacked, Thermal, Fock, Coherent, Gaussian, ProductAsymptotic };

const char* to_string(CharFnKind kind) noexcept;

class CharFn {
public:
    CharFn(CharFnKind kind, std::function<cplx(cplx)> eval)
        : kind_(kind), eval_(std::move(eval)) {}

    cplx operator()(cplx z) const { return eval_(z); }
    CharFnKind kind() const noexcept { return kind_; }

private:
    CharFnKind kind_;
    std::function<cplx(cplx)> eval_;
};

// Tr(rho D(z)) with D built on a padded cutoff so that truncation of the
// exponential does not reach the block seen by rho.
CharFn charfn_of_state(const DensityMatrix& rho);

// Padding used by charfn_of_state for displacement z at cutoff n_max.
int displacement_padding(cplx z);

// L_n(x) = sum_j binom(n, j) (-x)^j / j!
double laguerre(int n, double x);

CharFn charfn_fock(int n);
CharFn charfn_thermal(double beta);
CharFn charfn_coherent(cplx alpha);

struct ProductTruncation {
    int k_terms = 0;
    double tail_bound = 0.0;
};

struct ProductValue {
    cplx value;
    cplx log_value;  // meaningful unless underflow
    ProductTruncation trunc;
    bool underflow = false;
};

// prod_k chi_sigma(s c^k z), truncated once the certified bound
// 2 C0 c^K / (1 - c) on the omitted log-tail is <= rel_tol. C0 is 1.5 times
// the largest sampled |d/dy chi_sigma(y s z)| on y in [0, 1]. lambda = pi/2
// gives the single factor chi_sigma(z).
ProductValue asymptotic_product(const CharFn& chi_sigma, const ChannelParams& params, cplx z,
                                double rel_tol = 1e-12);

// The same product with exactly k_terms factors; the reported tail bound is
// that of the omitted factors.
ProductValue asymptotic_product_terms(const CharFn& chi_sigma, const ChannelParams& params, cplx z,
                                      int k_terms);

CharFn product_charfn(CharFn chi_sigma, const ChannelParams& params, double rel_tol = 1e-12);

// (a; q)_inf = prod_k (1 - a q^k) for |q| < 1, stopped once
// |a q^k| < rel_tol (1 - |q|).
double q_pochhammer(double a, double q, double rel_tol = 1e-16);

struct CharFnMoments {
    cplx mean_a;         // <a>
    double cov_adag_a;   // <a^dag a> + 1/2 - |<a>|^2
    cplx cov_aa;         // <a^2> - <a>^2
    double mean_number;  // <a^dag a>
};

// Wirtinger derivatives at 0 by central differences at h = 1e-3 and h/2,
// Richardson-combined. Throws Numerical when the two step sizes disagree
// by more than 1e-5 relative to max(1, |estimate|).
CharFnMoments moments_from_charfn(const CharFn& chi);

// t^4 coefficient of ln chi(t), t real, from a least-squares fit of
// {t^2, t^4, t^6} on 9 points spread evenly over [-0.4, 0.4].
double log_charfn_quartic_coeff(const CharFn& chi);

// Var_sigma(z b^dag - z* b).
cplx displacement_generator_variance(const DensityMatrix& sigma, cplx z);

// Golden-angle spiral: z_j = r_j exp(i j theta_g), r_j = radius (j+1)/count.
struct ZGrid {
    double radius;
    int count;

    std::vector<cplx> points() const;
};

struct GridSample {
    cplx z;
    cplx chi;
    double tail_bound;  // 0 for directly evaluated functions
};

std::vector<GridSample> evaluate_grid(const CharFn& chi, const ZGrid& grid);
std::vector<GridSample> evaluate_product_grid(const CharFn& chi_sigma, const ChannelParams& params,
                                              const ZGrid& grid, double rel_tol = 1e-12);

// re_z, im_z, re_chi, im_chi, abs_chi, tail_bound
void write_grid_csv(const std::vector<GridSample>& samples, std::ostream& out);

}  // namespace repcol
