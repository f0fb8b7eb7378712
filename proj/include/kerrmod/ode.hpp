#pragma once

#include "kerrmod/errors.hpp"
#include "kerrmod/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace kerrmod {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_max = 0.1;
    double h_min = 1e-13;
    std::size_t max_steps = 20'000'000;  // per advance() call
};

/// Adaptive Dormand-Prince 5(4) for one complex amplitude. Carries the
/// step proposal across segments, so strobed integrations stay cheap.
/// Deterministic: no state besides the proposal, no fallbacks.
template <class Rhs>
class AdaptiveIntegrator {
public:
    explicit AdaptiveIntegrator(Rhs rhs, OdeOptions opt = {})
        : rhs_(std::move(rhs)), opt_(opt), h_(opt.h_init) {
        if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0) || !(opt_.h_init > 0.0) ||
            !(opt_.h_max > 0.0) || !(opt_.h_min > 0.0))
            throw InvalidParameterError("OdeOptions: tolerances and steps must be positive");
    }

    /// Advances y from t0 to t1 >= t0; the returned state corresponds to
    /// t1 up to the h_min endpoint slack.
    cplx advance(cplx y, double t0, double t1) {
        if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0)
            throw InvalidParameterError("AdaptiveIntegrator: bad time segment");

        double t = t0;
        std::size_t steps = 0;
        while (t1 - t > opt_.h_min) {
            const bool clamped = t1 - t < h_;
            const double h = clamped ? t1 - t : h_;

            const cplx k1 = rhs_(t, y);
            const cplx k2 = rhs_(t + h * (1.0 / 5.0), y + h * (1.0 / 5.0) * k1);
            const cplx k3 = rhs_(t + h * (3.0 / 10.0),
                                 y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
            const cplx k4 = rhs_(t + h * (4.0 / 5.0),
                                 y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
            const cplx k5 =
                rhs_(t + h * (8.0 / 9.0),
                     y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                              64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
            const cplx k6 = rhs_(t + h, y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                                 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                                 5103.0 / 18656.0 * k5));
            const cplx y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                     125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                                     11.0 / 84.0 * k6);
            const cplx k7 = rhs_(t + h, y5);

            const cplx ev = h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 +
                                 71.0 / 1920.0 * k4 - 17253.0 / 339200.0 * k5 +
                                 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7);
            const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y), std::abs(y5));
            double err = std::abs(ev) / sc;
            if (!std::isfinite(err))
                err = std::numeric_limits<double>::infinity();

            if (err <= 1.0) {
                t += h;
                y = y5;
                if (!clamped) {
                    const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                    h_ = std::min(h * std::clamp(fac, 0.2, 5.0), opt_.h_max);
                }
            } else {
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            }

            if (h_ < opt_.h_min) {
                char msg[96];
                std::snprintf(msg, sizeof msg,
                              "step size collapsed to %.3e at t=%.6g", h_, t);
                throw StiffnessError(msg);
            }
            if (++steps > opt_.max_steps)
                throw StiffnessError("step budget exhausted before reaching segment end");
        }
        return y;
    }

    double step_proposal() const { return h_; }

private:
    Rhs rhs_;
    OdeOptions opt_;
    double h_;
};

} // namespace kerrmod
