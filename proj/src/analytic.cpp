#include "kerrmod/analytic.hpp"
#include "kerrmod/errors.hpp"

#include <cmath>
#include <numbers>

namespace kerrmod {

void UnitaryKerrSpec::validate() const {
    const double fields[] = {alpha0, chi0, chi1, delta_mod, phase_chi};
    for (double v : fields)
        if (!std::isfinite(v))
            throw InvalidParameterError("UnitaryKerrSpec: non-finite field");
    if (dim < 1)
        throw InvalidParameterError("UnitaryKerrSpec: dim must be >= 1");
    if (chi1 != 0.0 && delta_mod == 0.0)
        throw InvalidParameterError(
            "UnitaryKerrSpec: modulated chi needs a nonzero modulation frequency");
}

double phase_accum(const UnitaryKerrSpec& spec, double t) {
    spec.validate();
    double acc = spec.chi0 * t;
    if (spec.chi1 != 0.0)
        acc -= spec.chi1 / spec.delta_mod
             * (std::cos(spec.delta_mod * t + spec.phase_chi) - std::cos(spec.phase_chi));
    return acc;
}

FockVector unitary_state(const UnitaryKerrSpec& spec, double t) {
    const double phi = phase_accum(spec, t);
    FockVector s = coherent_state(spec.dim, cplx(spec.alpha0, 0.0));
    for (std::size_t n = 0; n < spec.dim; ++n) {
        const double nn = static_cast<double>(n);
        const double th = -phi * nn * nn;
        s[n] *= cplx(std::cos(th), std::sin(th));
    }
    return s;
}

cplx unitary_density(const UnitaryKerrSpec& spec, double t, std::size_t n, std::size_t m) {
    if (n >= spec.dim || m >= spec.dim)
        throw InvalidParameterError("unitary_density: index outside basis");
    const double phi = phase_accum(spec, t);
    const double a = std::abs(spec.alpha0);
    if (a == 0.0)
        return n == 0 && m == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    const double lnmag = -a * a + (nn + mm) * std::log(a)
                       - 0.5 * std::lgamma(nn + 1.0) - 0.5 * std::lgamma(mm + 1.0);
    const double th = -phi * (nn * nn - mm * mm);
    return std::exp(lnmag) * cplx(std::cos(th), std::sin(th));
}

double superposition_time(const UnitaryKerrSpec& spec) {
    spec.validate();
    if (!(spec.chi0 > 0.0))
        throw InvalidParameterError("superposition_time: chi0 must be > 0");
    const double target = 0.5 * std::numbers::pi;
    const double t_max = 10.0 * std::numbers::pi / spec.chi0;
    const int n_scan = 10000;

    auto g = [&](double t) { return phase_accum(spec, t) - target; };

    double lo = 0.0, glo = g(0.0);
    double hi = 0.0, ghi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= n_scan; ++i) {
        hi = t_max * static_cast<double>(i) / n_scan;
        ghi = g(hi);
        if (glo < 0.0 && ghi >= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        glo = ghi;
    }
    if (!bracketed)
        throw NoSuperpositionTimeError(
            "superposition_time: no phase crossing inside the scan window");

    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace kerrmod
