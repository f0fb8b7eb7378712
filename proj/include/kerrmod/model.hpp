#pragma once

#include "kerrmod/fock.hpp"

#include <utility>

namespace kerrmod {

/// Parameters of the driven, damped oscillator with a Kerr-type
/// nonlinearity. All rates are expressed in units of the relaxation
/// rate (gamma = 1 defines the canonical time scale); nbar is the
/// thermal occupation of the reservoir.
///
/// Both the nonlinearity and the drive carry an optional sinusoidal
/// modulation:
///   chi(t) = chi0 + chi1 * sin(mod_freq_chi * t + phase_chi)
///   f(t)   = f0   + f1   * sin(mod_freq_f * t)
struct OscillatorParams {
    double delta = 0.0;         // detuning
    double chi0 = 0.0;          // nonlinearity, static part
    double chi1 = 0.0;          // nonlinearity, modulation amplitude
    double mod_freq_chi = 0.0;  // nonlinearity modulation frequency
    double phase_chi = 0.0;     // nonlinearity modulation phase
    double f0 = 0.0;            // drive, static part
    double f1 = 0.0;            // drive, modulation amplitude
    double mod_freq_f = 0.0;    // drive modulation frequency
    double gamma = 1.0;         // relaxation rate
    double nbar = 0.0;          // reservoir occupation

    /// Throws InvalidParameterError unless gamma > 0, nbar >= 0 and all
    /// fields are finite.
    void validate() const;
};

/// chi(t).
double chi_at(const OscillatorParams& p, double t);

/// f(t).
double drive_at(const OscillatorParams& p, double t);

/// Closed-form integral of chi over [t0, t1].
double chi_integral(const OscillatorParams& p, double t0, double t1);

/// H(t)|s> with H = delta n + chi(t) n^2 + f(t) (a + a^+), assembled from
/// the ladder primitives. The n^2 term is the literal square of the
/// number operator, not a normal-ordered form.
FockVector apply_hamiltonian(const OscillatorParams& p, double t, const FockVector& s);

/// Collapse-operator prefactors {c1, c2} for L1 = c1 a, L2 = c2 a^+:
/// c1 = sqrt((nbar + 1) gamma), c2 = sqrt(nbar gamma).
std::pair<double, double> lindblad_coeffs(const OscillatorParams& p);

} // namespace kerrmod
