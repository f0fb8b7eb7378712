#include "kerrmod/semiclassical.hpp"
#include "kerrmod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace kerrmod {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_finite_amplitude(cplx alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw InvalidParameterError("mean field: initial amplitude must be finite");
}

void require_ascending(const std::vector<double>& grid, const char* what) {
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0)
            throw InvalidParameterError(std::string(what) + ": entries must be finite and >= 0");
        if (i > 0 && grid[i] < prev)
            throw InvalidParameterError(std::string(what) + ": entries must be ascending");
        prev = grid[i];
    }
}

/// One Newton step toward the stationary fixed point of the constant-
/// parameter flow. Returns false when the Jacobian is too close to
/// singular to trust (at a fold).
bool newton_step(const OscillatorParams& p, cplx& alpha) {
    const double x = alpha.real();
    const double y = alpha.imag();
    const double u = p.delta + p.chi0 * (1.0 + 2.0 * (x * x + y * y));
    const double hg = 0.5 * p.gamma;

    const double fx = -hg * x + u * y;
    const double fy = -hg * y - u * x - p.f0;

    const double jxx = -hg + 4.0 * p.chi0 * x * y;
    const double jxy = u + 4.0 * p.chi0 * y * y;
    const double jyx = -(u + 4.0 * p.chi0 * x * x);
    const double jyy = -hg - 4.0 * p.chi0 * x * y;

    const double det = jxx * jyy - jxy * jyx;
    if (std::abs(det) < 1e-12 * (1.0 + u * u))
        return false;
    alpha = cplx(x - (fx * jyy - fy * jxy) / det, y - (jxx * fy - jyx * fx) / det);
    return true;
}

/// Relaxes the stationary system (f1 = chi1 = 0) to its steady state,
/// then polishes with Newton. Convergence deadline t = 200 / gamma, with
/// a limit-cycle guard on the residual oscillation amplitude.
cplx relax_to_steady(const OscillatorParams& p, cplx seed, const OdeOptions& opt) {
    auto rhs = [&p](double t, cplx a) { return mean_field_rhs(a, t, p); };
    AdaptiveIntegrator integ(rhs, opt);

    const double chunk = 1.0 / p.gamma;
    const double deadline = 200.0 / p.gamma;
    cplx a = seed;
    double t = 0.0;
    bool settled = false;
    while (t < deadline) {
        a = integ.advance(a, t, t + chunk);
        t += chunk;
        if (std::abs(mean_field_rhs(a, t, p)) < 1e-8) {
            settled = true;
            break;
        }
    }
    if (!settled) {
        // Residual oscillation over one more relaxation time.
        double amp = 0.0;
        cplx ref = a;
        cplx b = a;
        const int probes = 64;
        for (int i = 1; i <= probes; ++i) {
            const double t1 = t + chunk * static_cast<double>(i) / probes;
            b = integ.advance(b, t + chunk * static_cast<double>(i - 1) / probes, t1);
            amp = std::max(amp, std::abs(b - ref));
        }
        if (amp >= 1e-8) {
            char msg[112];
            std::snprintf(msg, sizeof msg,
                          "no steady state within t = 200/gamma at f = %.6g "
                          "(residual oscillation %.3e)",
                          p.f0, amp);
            throw ConvergenceError(msg);
        }
        a = b;
    }

    for (int it = 0; it < 10; ++it) {
        if (std::abs(mean_field_rhs(a, 0.0, p)) < 1e-13 * std::max(1.0, std::abs(p.f0)))
            break;
        if (!newton_step(p, a))
            break;
    }
    return a;
}

} // namespace

cplx mean_field_rhs(cplx alpha, double t, const OscillatorParams& p) {
    const double chi = chi_at(p, t);
    const double norm2 = std::norm(alpha);
    const cplx rot(-0.5 * p.gamma, -(p.delta + chi * (1.0 + 2.0 * norm2)));
    return rot * alpha + cplx(0.0, -drive_at(p, t));
}

MeanFieldSolution integrate_mean_field(cplx alpha0, const std::vector<double>& t_grid,
                                       const OscillatorParams& p, const OdeOptions& opt) {
    p.validate();
    require_finite_amplitude(alpha0);
    require_ascending(t_grid, "integrate_mean_field grid");

    MeanFieldSolution sol;
    sol.times = t_grid;
    sol.alpha.reserve(t_grid.size());

    auto rhs = [&p](double t, cplx a) { return mean_field_rhs(a, t, p); };
    AdaptiveIntegrator integ(rhs, opt);
    cplx a = alpha0;
    double t = 0.0;
    for (double tg : t_grid) {
        a = integ.advance(a, t, tg);
        t = tg;
        sol.alpha.push_back(a);
    }
    return sol;
}

double strobe_period(const OscillatorParams& p) {
    const bool chi_on = p.chi1 != 0.0;
    const bool f_on = p.f1 != 0.0;
    if (!chi_on && !f_on)
        throw StrobeUndefinedError("strobe period: no modulation channel is active");
    if (chi_on && f_on && p.mod_freq_chi != p.mod_freq_f)
        throw StrobeUndefinedError(
            "strobe period: both channels modulated with different frequencies");
    const double omega = std::abs(chi_on ? p.mod_freq_chi : p.mod_freq_f);
    if (!(omega > 0.0))
        throw StrobeUndefinedError("strobe period: modulation frequency must be nonzero");
    return two_pi / omega;
}

PoincareSection poincare_section(cplx alpha0, const OscillatorParams& p, std::size_t n_points,
                                 double t0, double transient, const OdeOptions& opt) {
    p.validate();
    require_finite_amplitude(alpha0);
    if (!std::isfinite(t0) || t0 < 0.0 || !std::isfinite(transient) || transient < 0.0)
        throw InvalidParameterError("poincare_section: t0 and transient must be finite and >= 0");

    PoincareSection sec;
    sec.strobe_period = strobe_period(p);
    sec.t0 = t0;
    sec.discarded_transient = transient;
    if (n_points == 0)
        return sec;
    sec.points.reserve(n_points);

    std::size_t n0 = 0;
    if (transient > t0)
        n0 = static_cast<std::size_t>(std::ceil((transient - t0) / sec.strobe_period - 1e-12));

    auto rhs = [&p](double t, cplx a) { return mean_field_rhs(a, t, p); };
    AdaptiveIntegrator integ(rhs, opt);
    cplx a = alpha0;
    double t = 0.0;
    for (std::size_t n = n0; n < n0 + n_points; ++n) {
        const double tn = t0 + sec.strobe_period * static_cast<double>(n);
        a = integ.advance(a, t, tn);
        t = tn;
        sec.points.emplace_back(a.real(), a.imag());
    }
    return sec;
}

double bounding_box_area(const PoincareSection& section) {
    if (section.points.empty())
        return 0.0;
    double x_lo = section.points[0].first, x_hi = x_lo;
    double y_lo = section.points[0].second, y_hi = y_lo;
    for (const auto& [x, y] : section.points) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    return (x_hi - x_lo) * (y_hi - y_lo);
}

std::vector<SweepPoint> hysteresis_sweep(const OscillatorParams& p,
                                         const std::vector<double>& f_values,
                                         SweepDirection direction, const OdeOptions& opt) {
    p.validate();
    if (p.f1 != 0.0 || p.chi1 != 0.0)
        throw InvalidParameterError("hysteresis_sweep: requires a stationary system "
                                    "(f1 = 0 and chi1 = 0)");
    for (std::size_t i = 1; i < f_values.size(); ++i)
        if (!(f_values[i] >= f_values[i - 1]))
            throw InvalidParameterError("hysteresis_sweep: f_values must be ascending");

    std::vector<SweepPoint> out;
    out.reserve(f_values.size());
    cplx seed(0.0, 0.0);
    OscillatorParams pf = p;

    auto run_point = [&](double f) {
        if (!std::isfinite(f))
            throw InvalidParameterError("hysteresis_sweep: drive values must be finite");
        pf.f0 = f;
        seed = relax_to_steady(pf, seed, opt);
        out.push_back({f, std::norm(seed)});
    };

    if (direction == SweepDirection::up)
        for (auto it = f_values.begin(); it != f_values.end(); ++it)
            run_point(*it);
    else
        for (auto it = f_values.rbegin(); it != f_values.rend(); ++it)
            run_point(*it);
    return out;
}

double fixed_point_residual(const OscillatorParams& p, cplx alpha) {
    const double I = std::norm(alpha);
    const double u = p.delta + p.chi0 * (1.0 + 2.0 * I);
    return p.f0 * p.f0 - I * (0.25 * p.gamma * p.gamma + u * u);
}

ScaledParams scale_transform(const OscillatorParams& p, double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0))
        throw InvalidParameterError("scale_transform: lambda must be finite and > 0");
    const double il2 = 1.0 / (lambda * lambda);
    ScaledParams s;
    static_cast<OscillatorParams&>(s) = p;
    s.lambda = lambda;
    s.delta = p.delta + p.chi0 * (1.0 - il2);
    s.chi0 = p.chi0 * il2;
    s.chi1 = p.chi1 * il2;
    s.f0 = p.f0 * lambda;
    s.f1 = p.f1 * lambda;
    return s;
}

} // namespace kerrmod
