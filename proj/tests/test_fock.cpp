#include "doctest.h"

#include "kerrmod/errors.hpp"
#include "kerrmod/fock.hpp"

#include "support.hpp"

#include <cmath>
#include <complex>

using namespace kerrmod;

TEST_SUITE("fock") {

TEST_CASE("fock_state basics and domain errors") {
    const FockVector s = fock_state(8, 3);
    CHECK(s.dim() == 8);
    for (std::size_t n = 0; n < 8; ++n)
        CHECK(s[n] == (n == 3 ? cplx(1.0) : cplx(0.0)));
    CHECK_THROWS_AS(fock_state(4, 4), InvalidParameterError);
    CHECK_THROWS_AS(fock_state(0, 0), InvalidParameterError);
    CHECK_THROWS_AS(coherent_state(0, cplx(1.0)), InvalidParameterError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(coherent_state(8, cplx(inf, 0.0)), InvalidParameterError);
}

TEST_CASE("coherent_state: vacuum limit is exact") {
    const FockVector s = coherent_state(12, cplx(0.0));
    CHECK(s[0] == cplx(1.0));
    for (std::size_t n = 1; n < 12; ++n)
        CHECK(s[n] == cplx(0.0));
}

TEST_CASE("coherent_state: mean occupation and Mandel Q at alpha0 = 2") {
    const FockVector s = coherent_state(30, cplx(2.0));
    CHECK(std::abs(norm(s) - 1.0) <= 1e-12);
    const auto [m1, m2] = number_moments(s);
    CHECK(std::abs(m1 - 4.0) <= 1e-9);
    const double q = (m2 - m1 * m1 - m1) / m1;
    CHECK(std::abs(q) <= 1e-8);
}

TEST_CASE("coherent_state matches the closed-form amplitudes") {
    const cplx alpha(1.2, -0.7);
    const FockVector s = coherent_state(24, alpha);
    const double a2 = std::norm(alpha);
    cplx pw(1.0);
    double fact = 1.0;
    for (std::size_t n = 0; n < 12; ++n) {
        const cplx expect = std::exp(-0.5 * a2) * pw / std::sqrt(fact);
        CHECK(std::abs(s[n] - expect) <= 1e-12);
        pw *= alpha;
        fact *= static_cast<double>(n + 1);
    }
}

TEST_CASE("apply_lowering on basis states") {
    const FockVector z = apply_lowering(vacuum_state(6));
    for (std::size_t n = 0; n < 6; ++n)
        CHECK(z[n] == cplx(0.0));
    const FockVector one = apply_lowering(fock_state(6, 1));
    CHECK(one[0] == cplx(1.0));
    for (std::size_t n = 1; n < 6; ++n)
        CHECK(one[n] == cplx(0.0));
}

TEST_CASE("coherent states are lowering eigenvectors up to the tail") {
    const cplx alpha(2.0);
    const FockVector s = coherent_state(30, alpha);
    const FockVector low = apply_lowering(s);
    for (std::size_t n = 0; n + 1 < 30; ++n)
        CHECK(std::abs(low[n] - alpha * s[n]) <= 1e-8);
}

TEST_CASE("apply_raising on basis states") {
    const FockVector one = apply_raising(vacuum_state(6));
    CHECK(one[1] == cplx(1.0));
    CHECK(std::abs(norm(one) - 1.0) <= 1e-15);
    const FockVector four = apply_raising(fock_state(6, 3));
    CHECK(four[4].real() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("raising leakage counter records the dropped amplitude") {
    FockVector s(4);
    s[3] = cplx(0.6, 0.8);
    double leak = 0.0;
    const FockVector out = apply_raising(s, leak);
    for (std::size_t n = 0; n < 4; ++n)
        CHECK(out[n] == (n == 0 ? cplx(0.0) : std::sqrt(static_cast<double>(n)) * s[n - 1]));
    CHECK(leak == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("commutator expectation is 1 within leakage") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const FockVector s = testsup::random_state(18, seed);
        double leak = 0.0;
        const FockVector up = apply_raising(s, leak);
        const FockVector down = apply_lowering(s);
        const double aad = norm(up) * norm(up);
        const double ada = norm(down) * norm(down);
        CHECK(std::abs(aad - ada - 1.0) <= leak + 1e-12);
    }
}

TEST_CASE("lowering and raising are adjoint for states with empty top bin") {
    for (unsigned seed = 10; seed < 14; ++seed) {
        const FockVector u = testsup::random_state(16, seed, 1);
        const FockVector v = testsup::random_state(16, seed + 100, 1);
        const cplx lhs = inner(u, apply_lowering(v));
        const cplx rhs = inner(apply_raising(u), v);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("raising then lowering scales |n> by n+1") {
    for (std::size_t n = 0; n + 1 < 9; ++n) {
        const FockVector s = apply_lowering(apply_raising(fock_state(9, n)));
        CHECK(std::abs(s[n] - cplx(static_cast<double>(n) + 1.0)) <= 1e-12);
    }
}

TEST_CASE("number moments of basis and coherent states") {
    auto [z1, z2] = number_moments(vacuum_state(4));
    CHECK(z1 == 0.0);
    CHECK(z2 == 0.0);
    auto [f1, f2] = number_moments(fock_state(8, 5));
    CHECK(f1 == 5.0);
    CHECK(f2 == 25.0);
    auto [c1, c2] = number_moments(coherent_state(30, cplx(2.0)));
    CHECK(std::abs(c1 - 4.0) <= 1e-8);
    CHECK(std::abs(c2 - 20.0) <= 1e-8);
    CHECK(c2 >= c1 * c1);
}

TEST_CASE("mean_lowering of a coherent state returns alpha") {
    const cplx alpha(0.9, -1.1);
    const FockVector s = coherent_state(28, alpha);
    CHECK(std::abs(mean_lowering(s) - alpha) <= 1e-8);
}

TEST_CASE("normalize rejects unusable vectors and fixes norms") {
    FockVector z(5);
    CHECK_THROWS_AS(normalize(z), InvalidParameterError);
    FockVector s(5);
    s[2] = cplx(3.0, 4.0);
    normalize(s);
    CHECK(std::abs(norm(s) - 1.0) <= 1e-12);
    CHECK(std::abs(s[2] - cplx(0.6, 0.8)) <= 1e-15);
}

TEST_CASE("inner is conjugate-linear in the first argument") {
    FockVector u(3), v(3);
    u[1] = cplx(0.0, 1.0);
    v[1] = cplx(2.0, 0.0);
    CHECK(inner(u, v) == cplx(0.0, -2.0));
    CHECK_THROWS_AS(inner(u, FockVector(4)), InvalidParameterError);
}

TEST_CASE("tail_mass sums the monitor band") {
    FockVector s(10);
    for (std::size_t n = 0; n < 10; ++n)
        s[n] = cplx(std::sqrt(0.1));
    CHECK(tail_mass(s) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tail_mass(s, 2) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(tail_mass(s, 50) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("suggested_dim implements the occupancy heuristic") {
    CHECK(suggested_dim(0.0) == 10);
    CHECK(suggested_dim(4.0) == 30);
    CHECK(suggested_dim(249.0) == 386);
    CHECK_THROWS_AS(suggested_dim(-1.0), InvalidParameterError);
}

}
