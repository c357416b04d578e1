#pragma once

// Single-mode Gaussian states. Stored as the quadrature pair (V, d) for
// X = (a + a^dag)/sqrt2, P = i(a^dag - a)/sqrt2, with V = 2 Cov so that the
// vacuum has V = I. The (A, Delta) form in (b, b^dag) ordering is converted
// at the boundary: A = 2 Cov, Delta = (<b>, <b^dag>).

#include "repcol/channel.hpp"
#include "repcol/charfn.hpp"
#include "repcol/fock.hpp"

#include <Eigen/Dense>
#include <optional>

#include "json.hpp"

namespace repcol {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
using Matrix2r = Eigen::Matrix2d;
using Vector2r = Eigen::Vector2d;

class GaussianState {
public:
    static constexpr double kUncertaintyTol = 1e-9;

    // Requires V symmetric with det V >= 1 - 1e-9 and V positive.
    static GaussianState from_quadratures(const Matrix2r& v, const Vector2r& d);
    // Requires Delta[1] = conj(Delta[0]), A01 = A10 real, A11 = conj(A00).
    static GaussianState from_covariance(const Matrix2c& a, const Vector2c& delta);

    static GaussianState vacuum();
    static GaussianState thermal(double beta);

    const Matrix2r& v() const noexcept { return v_; }
    const Vector2r& d() const noexcept { return d_; }
    Matrix2c a() const;
    Vector2c delta() const;
    cplx mean_b() const;

private:
    GaussianState(const Matrix2r& v, const Vector2r& d) : v_(v), d_(d) {}

    Matrix2r v_;
    Vector2r d_;
};

// exp(1/4 Z^T Omega^T A Omega Z - Delta^T Omega Z), Z = (z, z*).
CharFn gaussian_charfn(const GaussianState& g);

// Same covariance, displacement scaled by s / (1 - c).
GaussianState asymptotic_gaussian(const GaussianState& g, const ChannelParams& params);

// First and second moments of a single-mode state. Throws Cutoff when the
// top two levels hold more than 1e-6 of the population.
GaussianState gaussian_from_moments(const DensityMatrix& rho);

// det(V)^-1/2
double gaussian_purity(const GaussianState& g);
// g(sqrt det V)
double gaussian_entropy(const GaussianState& g);

// ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2), with g(1) = 0.
double entropy_g(double x);

// Inverse temperature of the thermal state with this covariance, when A is
// anti-diagonal and Delta vanishes (both relative to tol). Mean photon
// numbers below 1e-12 give +inf.
std::optional<double> thermal_match(const GaussianState& g, double tol = 1e-7);

// {A_re, A_im, Delta_re, Delta_im, V, d}
nlohmann::json to_json(const GaussianState& g);
GaussianState gaussian_from_json(const nlohmann::json& j);

}  // namespace repcol
