#include "kerrmod/model.hpp"
#include "kerrmod/errors.hpp"

#include <cmath>

namespace kerrmod {

void OscillatorParams::validate() const {
    const double fields[] = {delta, chi0, chi1, mod_freq_chi, phase_chi,
                             f0, f1, mod_freq_f, gamma, nbar};
    for (double v : fields)
        if (!std::isfinite(v))
            throw InvalidParameterError("OscillatorParams: non-finite field");
    if (gamma <= 0.0)
        throw InvalidParameterError("OscillatorParams: gamma must be > 0");
    if (nbar < 0.0)
        throw InvalidParameterError("OscillatorParams: nbar must be >= 0");
}

double chi_at(const OscillatorParams& p, double t) {
    return p.chi0 + p.chi1 * std::sin(p.mod_freq_chi * t + p.phase_chi);
}

double drive_at(const OscillatorParams& p, double t) {
    return p.f0 + p.f1 * std::sin(p.mod_freq_f * t);
}

double chi_integral(const OscillatorParams& p, double t0, double t1) {
    double acc = p.chi0 * (t1 - t0);
    if (p.chi1 != 0.0) {
        if (p.mod_freq_chi != 0.0) {
            acc -= p.chi1 / p.mod_freq_chi
                 * (std::cos(p.mod_freq_chi * t1 + p.phase_chi)
                  - std::cos(p.mod_freq_chi * t0 + p.phase_chi));
        } else {
            acc += p.chi1 * std::sin(p.phase_chi) * (t1 - t0);
        }
    }
    return acc;
}

FockVector apply_hamiltonian(const OscillatorParams& p, double t, const FockVector& s) {
    const double chi = chi_at(p, t);
    const double f = drive_at(p, t);
    const std::size_t d = s.dim();

    FockVector lowered = apply_lowering(s);
    FockVector raised = apply_raising(s);
    FockVector out(d);
    for (std::size_t n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        out[n] = (p.delta * nn + chi * nn * nn) * s[n] + f * (lowered[n] + raised[n]);
    }
    return out;
}

std::pair<double, double> lindblad_coeffs(const OscillatorParams& p) {
    // gamma = 0 is allowed here so a drift-only step can exercise the
    // unitary limit; simulation entry points enforce gamma > 0.
    if (p.gamma < 0.0 || p.nbar < 0.0)
        throw InvalidParameterError("lindblad_coeffs: gamma and nbar must be >= 0");
    return {std::sqrt((p.nbar + 1.0) * p.gamma), std::sqrt(p.nbar * p.gamma)};
}

} // namespace kerrmod
