#include "doctest.h"

#include "fixtures.hpp"
#include "oracle.hpp"

#include "repcol/channel.hpp"
#include "repcol/error.hpp"
#include "repcol/measures.hpp"

#include <numbers>
#include <random>
#include <sstream>

using namespace repcol;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("channel parameters") {
    const ChannelParams p(0.3, FockCutoff(5));
    CHECK(p.s() * p.s() + p.c() * p.c() == doctest::Approx(1.0).epsilon(1e-16));
    CHECK(p.transmittance() == p.c());
    CHECK(ChannelParams(kPi / 2, FockCutoff(5)).c() == 0.0);
    CHECK(ChannelParams(kPi / 2, FockCutoff(5)).s() == 1.0);
    CHECK(kind_of([] { ChannelParams(0.0, FockCutoff(5)); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { ChannelParams(2.0, FockCutoff(5)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("beam splitter matches the dense generator exponential") {
    for (double lambda : {0.0, 0.3, 1.1, kPi / 2}) {
        const BeamSplitter s(lambda, FockCutoff(8));
        CAPTURE(lambda);
        CHECK((s.dense() - oracle::beam_splitter(lambda, 8)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("beam splitter examples") {
    const CMatrix id = BeamSplitter(0.0, FockCutoff(4)).dense();
    CHECK((id - CMatrix::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-14);

    const FockCutoff c(3);
    const CMatrix swap = beam_splitter_unitary(ChannelParams(kPi / 2, c));
    // |1,0> is joint index 1*4 + 0, |0,1> is index 1.
    CHECK(std::abs(std::abs(swap(1, 4)) - 1.0) < 1e-12);

    const BeamSplitter quarter(kPi / 4, c);
    CHECK(quarter.amplitude(1, 0, 1, 0) == doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK(quarter.amplitude(1, 0, 0, 0) == 0.0);
}

TEST_CASE("beam splitter is unitary and conserves total photon number") {
    const int n_max = 6, d = n_max + 1;
    const CMatrix s = beam_splitter_unitary(ChannelParams(0.8, FockCutoff(n_max)));
    CHECK((s.adjoint() * s - CMatrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int i = 0; i < d * d; ++i)
        for (int j = 0; j < d * d; ++j)
            if ((i / d + i % d) != (j / d + j % d)) CHECK(s(i, j) == cplx(0.0, 0.0));
}

TEST_CASE("Heisenberg relation on the exact subspace") {
    CHECK(heisenberg_check(ChannelParams(0.5, FockCutoff(20))) <= 1e-9);
    CHECK(heisenberg_check(ChannelParams(kPi / 2, FockCutoff(10))) <= 1e-9);
    // Boundary columns carry the truncation artifact.
    CHECK(heisenberg_check(ChannelParams(0.5, FockCutoff(10)), false) > 1e-3);
}

TEST_CASE("channel matches brute force for stationary and non-stationary reservoirs") {
    std::mt19937_64 rng(21);
    const FockCutoff c(9);
    for (double lambda : {0.25, 0.9, kPi / 2}) {
        const DensityMatrix rho = fixtures::random_state(rng, c, 4, 3);
        const DensityMatrix diag_sigma = thermal_state(2.5, c);
        const DensityMatrix full_sigma = fixtures::random_state(rng, c, 3, 2);
        const ChannelParams p(lambda, c);
        for (const DensityMatrix* sigma : {&diag_sigma, &full_sigma}) {
            const CollisionChannel ch(*sigma, p);
            CHECK(ch.phase_covariant() == (sigma == &diag_sigma));
            const CMatrix want = oracle::channel(rho.matrix(), sigma->matrix(), lambda);
            CAPTURE(lambda);
            CHECK((ch.apply(rho).matrix() - want).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("apply_channel examples") {
    std::mt19937_64 rng(22);
    const FockCutoff c(20);
    const DensityMatrix rho = fixtures::random_state(rng, c, 4, 2);
    const DensityMatrix sigma = thermal_state(1.2, FockCutoff(20));
    CHECK(trace_distance(apply_channel(rho, sigma, ChannelParams(kPi / 2, c)), sigma) < 1e-9);
    CHECK(trace_distance(apply_channel(sigma, sigma, ChannelParams(0.6, c)), sigma) < 1e-8);

    const DensityMatrix out = apply_channel(fock_state(2, c), fock_state(0, c), ChannelParams(0.3, c));
    CHECK(mean_photon_number(out) == doctest::Approx(2 * std::cos(0.3) * std::cos(0.3)).epsilon(1e-12));
    CHECK(mean_photon_number(out) == doctest::Approx(1.82533561).epsilon(1e-8));

    CHECK(kind_of([&] { apply_channel(fock_state(0, FockCutoff(5)), sigma, ChannelParams(0.3, c)); }) ==
          ErrorKind::Shape);
    CHECK(kind_of([&] { apply_channel(fock_state(19, c), sigma, ChannelParams(0.3, c)); }) == ErrorKind::Cutoff);
}

TEST_CASE("iterate_to_fixed_point examples") {
    const FockCutoff c(40);
    const DensityMatrix th = thermal_state(1.0, c);
    const RelaxationTrajectory t = iterate_to_fixed_point(fock_state(3, c), th, ChannelParams(0.7, c));
    REQUIRE(t.converged_at.has_value());
    CHECK(trace_distance(t.final_state(), th) < 1e-7);
    CHECK(t.distances.size() + 1 == t.mean_photon.size());
    for (double d : t.distances) CHECK(d >= 0.0);

    const DensityMatrix vac = fock_state(0, c);
    const RelaxationTrajectory tv = iterate_to_fixed_point(coherent_state(cplx(1.0, 0.5), c), vac, ChannelParams(0.4, c));
    CHECK(trace_distance(tv.final_state(), vac) < 1e-7);

    const DensityMatrix one = fock_state(1, c);
    const ChannelParams half(0.5, c);
    const auto a = iterate_to_fixed_point(vac, one, half);
    const auto b = iterate_to_fixed_point(coherent_state(1.0, c), one, half);
    CHECK(trace_distance(a.final_state(), b.final_state()) < 1e-7);
}

TEST_CASE("iteration stops at max_steps without converging") {
    const FockCutoff c(20);
    const auto t = iterate_to_fixed_point(fock_state(3, c), fock_state(0, c), ChannelParams(0.1, c), {1e-12, 5, true});
    CHECK_FALSE(t.converged_at.has_value());
    CHECK(t.steps() == 5);
    CHECK(t.states.size() == 6);
    CHECK(kind_of([&] { iterate_to_fixed_point(fock_state(3, c), fock_state(0, c), ChannelParams(0.1, c), {1e-13}); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("stored trajectory states are successive channel images") {
    const FockCutoff c(15);
    const DensityMatrix sigma = coherent_state(cplx(0.3, 0.2), c);
    const ChannelParams p(0.6, c);
    const auto t = iterate_to_fixed_point(fock_state(1, c), sigma, p, {1e-9, 4, true});
    const CollisionChannel ch(sigma, p);
    for (std::size_t k = 0; k + 1 < t.states.size(); ++k)
        CHECK((ch.apply(t.states[k]).matrix() - t.states[k + 1].matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("schedules") {
    const auto fixed = CouplingSchedule::van_hove_fixed(16);
    CHECK(fixed.values.size() == 16);
    CHECK(fixed.values.front() == 0.25);
    const auto running = CouplingSchedule::van_hove_running(4);
    CHECK(running.values[0] == 1.0);
    CHECK(running.values[3] == 0.5);
    CHECK(kind_of([] { CouplingSchedule::van_hove_fixed(0); }) == ErrorKind::InvalidArgument);

    const FockCutoff c(20);
    const DensityMatrix sigma = fock_state(1, c);
    const auto t = run_schedule(fock_state(0, c), sigma, CouplingSchedule::constant(0.5, 6), c);
    DensityMatrix manual = fock_state(0, c);
    for (int k = 0; k < 6; ++k) manual = apply_channel(manual, sigma, ChannelParams(0.5, c));
    CHECK((t.final_state().matrix() - manual.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("van Hove fixed-K distance to the thermal state decreases in K") {
    const FockCutoff c(30);
    const DensityMatrix sigma = fock_state(1, c);
    const DensityMatrix target = thermal_state(thermal_beta(1.0), c);
    double previous = 1.0;
    for (int k : {16, 64, 256}) {
        const double d = trace_distance(run_schedule(sigma, sigma, CouplingSchedule::van_hove_fixed(k), c).final_state(), target);
        CHECK(d < previous);
        previous = d;
    }
}

TEST_CASE("van Hove running schedule approaches the thermal state") {
    const FockCutoff c(30);
    const DensityMatrix sigma = fock_state(1, c);
    const auto t = run_schedule(fock_state(0, c), sigma, CouplingSchedule::van_hove_running(500), c);
    CHECK(trace_distance(t.final_state(), thermal_state(thermal_beta(1.0), c)) < 0.05);
}

TEST_CASE("trajectory CSV layout") {
    const FockCutoff c(10);
    const auto t = iterate_to_fixed_point(fock_state(1, c), fock_state(0, c), ChannelParams(1.0, c), {1e-9, 2});
    std::ostringstream s;
    write_trajectory_csv(t, s);
    std::istringstream in(s.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,trace_distance_to_next,mean_photon_number,purity");
    int rows = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows == 3);
    CHECK(last.rfind("2,nan,", 0) == 0);
}
