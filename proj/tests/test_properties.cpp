#include "doctest.h"

#include "properties.hpp"

#include "repcol/gaussian.hpp"
#include "repcol/measures.hpp"

#include <cmath>
#include <random>

using namespace repcol;

TEST_CASE("channel output is a density matrix") {
    const properties::CptpDefect d = properties::cptp(101, 12);
    CHECK(d.trace < 1e-12);
    CHECK(d.hermiticity < 1e-12);
    CHECK(d.negativity < 1e-10);
}

TEST_CASE("characteristic function factorizes through the channel") {
    CHECK(properties::factorization(202, 3, 10) < 1e-7);
}

TEST_CASE("partial trace undoes the tensor product") {
    CHECK(properties::partial_trace_round_trip(303, 5) < 1e-14);
}

TEST_CASE("tail bound is sound under factor doubling") {
    CHECK(properties::tail_bound_ratio() <= 1.0);
}

TEST_CASE("channel contracts trace distance") {
    std::mt19937_64 rng(404);
    const FockCutoff c(30);
    for (int t = 0; t < 6; ++t) {
        const DensityMatrix x = fixtures::random_state(rng, c, 7, 2);
        const DensityMatrix y = fixtures::random_state(rng, c, 7, 3);
        const DensityMatrix sigma = fixtures::random_state(rng, c, 6, 1 + t % 2);
        const ChannelParams p(properties::kLambdas[t % 4], c);
        CHECK(trace_distance(apply_channel(x, sigma, p), apply_channel(y, sigma, p)) <=
              trace_distance(x, y) + 1e-12);
    }
}

TEST_CASE("photon number balance") {
    std::mt19937_64 rng(505);
    const FockCutoff c(30);
    for (int t = 0; t < 6; ++t) {
        const DensityMatrix rho = fixtures::random_state(rng, c, 7, 2);
        const DensityMatrix sigma = fixtures::random_state(rng, c, 7, 1 + t % 3);
        const ChannelParams p(properties::kLambdas[t % 4], c);
        const double expected = p.c() * p.c() * mean_photon_number(rho) + p.s() * p.s() * mean_photon_number(sigma);
        // Mean-field cross term.
        const ModeOperators ops = mode_operators(c);
        const cplx a_rho = (rho.matrix() * ops.annihilate).trace();
        const cplx b_sigma = (sigma.matrix() * ops.annihilate).trace();
        const double cross = 2.0 * p.c() * p.s() * (std::conj(a_rho) * b_sigma).real();
        CHECK(mean_photon_number(apply_channel(rho, sigma, p)) == doctest::Approx(expected + cross).epsilon(1e-11));
    }
}

TEST_CASE("fixed point does not depend on the initial state") {
    const FockCutoff c(40);
    const DensityMatrix sigma = fock_state(1, c);
    const ChannelParams p(0.5, c);
    const IterationOptions opt{1e-11, 10000, false};
    const DensityMatrix ref = iterate_to_fixed_point(fock_state(0, c), sigma, p, opt).final_state();
    for (const DensityMatrix& rho0 : {fock_state(3, c), coherent_state(cplx(0.8, 0.3), c), thermal_state(1.0, c)}) {
        const RelaxationTrajectory t = iterate_to_fixed_point(rho0, sigma, p, opt);
        REQUIRE(t.converged_at.has_value());
        CHECK(trace_distance(t.final_state(), ref) < 1e-9);
    }
}

TEST_CASE("fixed point is stationary and matches the product characteristic function") {
    const FockCutoff c(40);
    const DensityMatrix sigma = fock_state(2, c);
    const ChannelParams p(0.9, c);
    const DensityMatrix fp = iterate_to_fixed_point(fock_state(0, c), sigma, p, {1e-12, 10000, false}).final_state();
    CHECK(trace_distance(apply_channel(fp, sigma, p), fp) < 1e-11);
    const CharFn iter = charfn_of_state(fp);
    const CharFn prod = product_charfn(charfn_fock(2), p);
    for (cplx z : ZGrid{2.0, 15}.points()) CHECK(std::abs(iter(z) - prod(z)) < 1e-8);
}

TEST_CASE("Gaussian state maximises entropy at fixed covariance") {
    std::mt19937_64 rng(606);
    const FockCutoff c(30);
    for (int t = 0; t < 6; ++t) {
        const DensityMatrix rho = fixtures::random_state(rng, c, 6, 1 + t % 4);
        const GaussianState g = gaussian_from_moments(rho);
        CHECK(von_neumann_entropy(rho) <= gaussian_entropy(g) + 1e-9);
        CHECK(purity(rho) >= gaussian_purity(g) - 1e-9);
    }
}

TEST_CASE("weak-coupling distance to the thermal state shrinks like lambda squared") {
    const FockCutoff c(50);
    const DensityMatrix sigma = fock_state(2, c);
    const DensityMatrix target = thermal_state(thermal_beta(2.0), c);
    double previous = 0.0;
    for (double lambda : {0.2, 0.1, 0.05}) {
        const double d = trace_distance(iterate_to_fixed_point(fock_state(0, c), sigma, ChannelParams(lambda, c))
                                            .final_state(),
                                        target);
        if (previous > 0.0) CHECK(previous / d == doctest::Approx(4.0).epsilon(0.1));
        previous = d;
    }
}

TEST_CASE("weak-coupling expansion of the asymptotic characteristic function") {
    const cplx z(0.8, 0.0);
    const cplx half_var = 0.5 * displacement_generator_variance(fock_state(1, FockCutoff(10)), z);
    double previous = 0.0;
    for (double lambda : {0.2, 0.1, 0.05, 0.025}) {
        const ProductValue v = asymptotic_product(charfn_fock(1), ChannelParams(lambda, FockCutoff(10)), z);
        const double diff = std::abs(v.log_value - half_var);
        CHECK(diff <= lambda);
        if (previous > 0.0) CHECK(previous / diff == doctest::Approx(4.0).epsilon(0.15));
        previous = diff;
    }
}
