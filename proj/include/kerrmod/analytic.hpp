#pragma once

#include "kerrmod/fock.hpp"

#include <cstddef>

namespace kerrmod {

/// Closed-form description of the lossless, undriven modulated Kerr
/// evolution of an initial coherent state. With f = gamma = 0 the number
/// basis only picks up phases:
///   psi_n(t) = e^{-|alpha0|^2/2} alpha0^n / sqrt(n!) * e^{-i phi(t) n^2},
/// where phi(t) is the accumulated nonlinearity integral chi over [0, t].
struct UnitaryKerrSpec {
    double alpha0 = 0.0;     // real initial amplitude
    double chi0 = 0.0;
    double chi1 = 0.0;
    double delta_mod = 0.0;  // modulation frequency of chi
    double phase_chi = 0.0;
    std::size_t dim = 2;

    void validate() const;
};

/// phi(t) = chi0 t - (chi1/delta_mod)(cos(delta_mod t + phase) - cos(phase)).
double phase_accum(const UnitaryKerrSpec& spec, double t);

/// The state at time t (unit norm over the truncated basis).
FockVector unitary_state(const UnitaryKerrSpec& spec, double t);

/// Matrix element rho_nm(t) = psi_n(t) conj(psi_m(t)) in closed form:
/// e^{-alpha0^2} alpha0^(n+m) / sqrt(n! m!) * e^{-i phi(t)(n^2 - m^2)}.
cplx unitary_density(const UnitaryKerrSpec& spec, double t, std::size_t n, std::size_t m);

/// Smallest t > 0 with phi(t) = pi/2 (the two-component superposition
/// time), located by a bracket scan over [0, 10 pi / chi0] refined by
/// bisection to 1e-10. Throws NoSuperpositionTimeError if no bracket is
/// found in the window.
double superposition_time(const UnitaryKerrSpec& spec);

} // namespace kerrmod
