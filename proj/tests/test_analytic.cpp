#include "doctest.h"

#include "kerrmod/analytic.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/lindblad.hpp"
#include "kerrmod/wigner.hpp"

#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kerrmod;

namespace {

UnitaryKerrSpec plain_kerr(double alpha0, std::size_t dim) {
    UnitaryKerrSpec u;
    u.alpha0 = alpha0;
    u.chi0 = 1.0;
    u.dim = dim;
    return u;
}

} // namespace

TEST_SUITE("analytic") {

TEST_CASE("phase_accum closed forms") {
    UnitaryKerrSpec u = plain_kerr(1.0, 8);
    u.chi0 = 0.7;
    CHECK(phase_accum(u, 0.0) == 0.0);
    CHECK(phase_accum(u, 3.0) == doctest::Approx(2.1).epsilon(1e-14));

    u.chi0 = 1.0;
    u.chi1 = 0.5;
    u.delta_mod = 2.0;
    CHECK(phase_accum(u, std::numbers::pi) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("phase_accum equals adaptive quadrature of the modulation law") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        UnitaryKerrSpec u = plain_kerr(1.0, 4);
        u.chi0 = 2.0 * uni(gen);
        u.chi1 = 1.5 * uni(gen);
        u.delta_mod = 0.2 + 5.0 * uni(gen);
        u.phase_chi = 6.28 * uni(gen) - 3.14;
        const double t = 5.0 * uni(gen);
        const double quad = testsup::adaptive_simpson(
            [&](double tau) {
                return u.chi0 + u.chi1 * std::sin(u.delta_mod * tau + u.phase_chi);
            },
            0.0, t, 1e-13);
        CHECK(std::abs(phase_accum(u, t) - quad) <= 1e-10);
    }
}

TEST_CASE("spec validation") {
    UnitaryKerrSpec u = plain_kerr(2.0, 0);
    CHECK_THROWS_AS(u.validate(), InvalidParameterError);
    u = plain_kerr(2.0, 8);
    u.chi1 = 0.5;
    u.delta_mod = 0.0;
    CHECK_THROWS_AS(u.validate(), InvalidParameterError);
}

TEST_CASE("unitary_state is phase-only evolution of the initial coherent state") {
    const UnitaryKerrSpec u = plain_kerr(2.0, 38);
    const FockVector s0 = unitary_state(u, 0.0);
    const FockVector ref = coherent_state(38, cplx(2.0));
    for (std::size_t n = 0; n < 38; ++n)
        CHECK(std::abs(s0[n] - ref[n]) <= 1e-14);

    const FockVector st = unitary_state(u, 1.37);
    for (std::size_t n = 0; n < 38; ++n)
        CHECK(std::abs(std::abs(st[n]) - std::abs(s0[n])) <= 1e-14);
    const auto [m1, m2] = number_moments(st);
    (void)m2;
    CHECK(std::abs(m1 - 4.0) <= 1e-9);
}

TEST_CASE("unitary_density matches the outer product of unitary_state") {
    UnitaryKerrSpec u = plain_kerr(1.5, 20);
    u.chi1 = 0.4;
    u.delta_mod = 2.0;
    u.phase_chi = 0.3;
    const double t = 0.9;
    const FockVector s = unitary_state(u, t);
    for (std::size_t n = 0; n < 20; ++n)
        for (std::size_t m = 0; m < 20; ++m)
            CHECK(std::abs(unitary_density(u, t, n, m) - s[n] * std::conj(s[m])) <= 1e-12);
}

TEST_CASE("unitary_density diagonal is the time-independent Poisson weight") {
    const UnitaryKerrSpec u = plain_kerr(2.0, 30);
    for (double t : {0.0, 0.7, 2.4}) {
        for (std::size_t n = 0; n < 12; ++n) {
            const cplx d = unitary_density(u, t, n, n);
            const double expect =
                std::exp(-4.0) * std::pow(4.0, static_cast<double>(n)) /
                std::tgamma(static_cast<double>(n) + 1.0);
            CHECK(std::abs(d - cplx(expect)) <= 1e-12);
        }
    }
}

TEST_CASE("unitary_density hermiticity and off-diagonal phase convention") {
    const UnitaryKerrSpec u = plain_kerr(2.0, 30);
    // t with accumulated phase pi/2; the (1,0) entry carries e^{-i phi(n^2-m^2)}
    // from the outer product psi_n conj(psi_m).
    const double t = 0.5 * std::numbers::pi;
    CHECK(phase_accum(u, t) == doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-14));
    const cplx r10 = unitary_density(u, t, 1, 0);
    const cplx expect = 2.0 * std::exp(-4.0) * cplx(0.0, -1.0);
    CHECK(std::abs(r10 - expect) <= 1e-12);
    CHECK(std::abs(unitary_density(u, t, 0, 1) - std::conj(r10)) <= 1e-15);
    CHECK_THROWS_AS(unitary_density(u, t, 30, 0), InvalidParameterError);
}

TEST_CASE("superposition_time: constant Kerr gives pi/2") {
    const UnitaryKerrSpec u = plain_kerr(2.0, 8);
    CHECK(superposition_time(u) == doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("superposition_time: slow modulation matches the quasi-static limit") {
    UnitaryKerrSpec u = plain_kerr(2.0, 8);
    u.chi1 = 0.5;
    u.delta_mod = 1e-3;
    u.phase_chi = 0.5 * std::numbers::pi;
    const double t = superposition_time(u);
    CHECK(std::abs(t - std::numbers::pi / 3.0) <= 1e-3);
    CHECK(std::abs(phase_accum(u, t) - 0.5 * std::numbers::pi) <= 1e-10);
}

TEST_CASE("superposition_time requires a crossing inside the scan window") {
    UnitaryKerrSpec u = plain_kerr(2.0, 8);
    UnitaryKerrSpec bad = u;
    bad.chi0 = 0.0;
    CHECK_THROWS_AS(superposition_time(bad), InvalidParameterError);

    // Strong counter-phased modulation caps the accumulated phase at about
    // 1.25 rad inside t <= 10 pi / chi0, below the pi/2 target.
    u.chi1 = 40.0;
    u.delta_mod = 0.01;
    u.phase_chi = std::numbers::pi;
    CHECK_THROWS_AS(superposition_time(u), NoSuperpositionTimeError);
}

TEST_CASE("cat state at the superposition time has deep Wigner negativity") {
    const std::size_t dim = suggested_dim(4.0) + 8;
    const UnitaryKerrSpec u = plain_kerr(2.0, dim);
    const double t = superposition_time(u);

    Eigen::MatrixXcd rho(dim, dim);
    for (std::size_t n = 0; n < dim; ++n)
        for (std::size_t m = 0; m < dim; ++m)
            rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                unitary_density(u, t, n, m);

    GridSpec g;
    g.x_min = -3.0;
    g.x_max = 3.0;
    g.y_min = -3.0;
    g.y_max = 3.0;
    g.nx = 121;
    g.ny = 121;
    const WignerGrid w = wigner_from_rho(rho, g);
    CHECK(negativity(w).min_value < -0.05);
}

TEST_CASE("near-unitary master equation reproduces the closed form") {
    const std::size_t dim = 25;
    UnitaryKerrSpec u = plain_kerr(1.5, dim);

    OscillatorParams p;
    p.chi0 = 1.0;
    p.gamma = 1e-6;
    const double t = 0.25 * std::numbers::pi;
    const double dt = t / 1600.0;
    const DensityMatrix rho0 = density_from_state(coherent_state(dim, cplx(1.5)));
    const MasterSolution sol = integrate_master(p, dim, rho0, {t}, dt);
    REQUIRE(sol.rho.size() == 1);

    double worst = 0.0;
    for (std::size_t n = 0; n < dim; ++n)
        for (std::size_t m = 0; m < dim; ++m)
            worst = std::max(worst, std::abs(sol.rho[0].m(static_cast<Eigen::Index>(n),
                                                          static_cast<Eigen::Index>(m)) -
                                             unitary_density(u, t, n, m)));
    CHECK(worst <= 1e-4);
}

}
