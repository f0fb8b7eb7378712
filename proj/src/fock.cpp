#include "kerrmod/fock.hpp"
#include "kerrmod/errors.hpp"

#include <cmath>

namespace kerrmod {

FockVector fock_state(std::size_t dim, std::size_t n) {
    if (dim < 1)
        throw InvalidParameterError("fock_state: dim must be >= 1");
    if (n >= dim)
        throw InvalidParameterError("fock_state: level outside basis");
    FockVector s(dim);
    s[n] = 1.0;
    return s;
}

FockVector vacuum_state(std::size_t dim) {
    return fock_state(dim, 0);
}

FockVector coherent_state(std::size_t dim, cplx alpha0) {
    if (dim < 1)
        throw InvalidParameterError("coherent_state: dim must be >= 1");
    if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()))
        throw InvalidParameterError("coherent_state: non-finite amplitude");

    const double r = std::abs(alpha0);
    if (r == 0.0)
        return vacuum_state(dim);

    const double phase = std::arg(alpha0);
    const double logr = std::log(r);
    FockVector s(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        const double ln = -0.5 * r * r + static_cast<double>(n) * logr
                        - 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
        const double mag = std::exp(ln);
        const double th = phase * static_cast<double>(n);
        s[n] = {mag * std::cos(th), mag * std::sin(th)};
    }
    normalize(s);
    return s;
}

FockVector apply_lowering(const FockVector& s) {
    const std::size_t d = s.dim();
    FockVector out(d);
    for (std::size_t n = 0; n + 1 < d; ++n)
        out[n] = std::sqrt(static_cast<double>(n) + 1.0) * s[n + 1];
    return out;
}

FockVector apply_raising(const FockVector& s, double& leakage) {
    const std::size_t d = s.dim();
    FockVector out(d);
    for (std::size_t n = 1; n < d; ++n)
        out[n] = std::sqrt(static_cast<double>(n)) * s[n - 1];
    leakage += static_cast<double>(d) * std::norm(s[d - 1]);
    return out;
}

FockVector apply_raising(const FockVector& s) {
    double dropped = 0.0;
    return apply_raising(s, dropped);
}

cplx inner(const FockVector& u, const FockVector& v) {
    if (u.dim() != v.dim())
        throw InvalidParameterError("inner: dimension mismatch");
    cplx acc = 0.0;
    for (std::size_t n = 0; n < u.dim(); ++n)
        acc += std::conj(u[n]) * v[n];
    return acc;
}

double norm(const FockVector& s) {
    double acc = 0.0;
    for (const cplx& a : s.amp)
        acc += std::norm(a);
    return std::sqrt(acc);
}

void normalize(FockVector& s) {
    const double nrm = norm(s);
    if (nrm == 0.0 || !std::isfinite(nrm))
        throw InvalidParameterError("normalize: vector has no usable norm");
    const double inv = 1.0 / nrm;
    for (cplx& a : s.amp)
        a *= inv;
}

std::pair<double, double> number_moments(const FockVector& s) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < s.dim(); ++n) {
        const double p = std::norm(s[n]);
        const double nn = static_cast<double>(n);
        m1 += nn * p;
        m2 += nn * nn * p;
    }
    return {m1, m2};
}

cplx mean_lowering(const FockVector& s) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n + 1 < s.dim(); ++n)
        acc += std::conj(s[n]) * (std::sqrt(static_cast<double>(n) + 1.0) * s[n + 1]);
    return acc;
}

double tail_mass(const FockVector& s, std::size_t band) {
    const std::size_t d = s.dim();
    const std::size_t lo = band >= d ? 0 : d - band;
    double acc = 0.0;
    for (std::size_t n = lo; n < d; ++n)
        acc += std::norm(s[n]);
    return acc;
}

std::size_t suggested_dim(double n_max) {
    if (n_max < 0.0 || !std::isfinite(n_max))
        throw InvalidParameterError("suggested_dim: n_max must be finite and >= 0");
    return static_cast<std::size_t>(std::ceil(n_max + 8.0 * std::sqrt(n_max) + 10.0));
}

} // namespace kerrmod
