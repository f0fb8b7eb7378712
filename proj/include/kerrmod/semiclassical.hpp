#pragma once

#include "kerrmod/model.hpp"
#include "kerrmod/ode.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace kerrmod {

/// dalpha/dt = -(gamma/2) alpha - i (Delta + chi(t)(1 + 2|alpha|^2)) alpha - i f(t)
cplx mean_field_rhs(cplx alpha, double t, const OscillatorParams& p);

struct MeanFieldSolution {
    std::vector<double> times;
    std::vector<cplx> alpha;
};

/// Integrates the mean-field amplitude from t = 0, sampling at t_grid
/// (ascending, nonnegative). Adaptive with rtol 1e-9 by default.
MeanFieldSolution integrate_mean_field(cplx alpha0, const std::vector<double>& t_grid,
                                       const OscillatorParams& p, const OdeOptions& opt = {});

/// Strobe period of the active modulation channel, 2 pi / delta or
/// 2 pi / Omega. Throws StrobeUndefinedError when no channel is modulated
/// or when both are with different frequencies.
double strobe_period(const OscillatorParams& p);

struct PoincareSection {
    std::vector<std::pair<double, double>> points;  // (Re alpha, Im alpha)
    double strobe_period = 0.0;
    double t0 = 0.0;
    double discarded_transient = 0.0;
};

/// Stroboscopic samples at t_n = t0 + strobe_period * n, n >= 0, keeping
/// the first n_points with t_n >= transient. Integration starts from
/// alpha0 at t = 0.
PoincareSection poincare_section(cplx alpha0, const OscillatorParams& p, std::size_t n_points,
                                 double t0, double transient, const OdeOptions& opt = {});

/// Area of the axis-aligned bounding box of the section (0 when empty).
double bounding_box_area(const PoincareSection& section);

enum class SweepDirection { up, down };

struct SweepPoint {
    double f = 0.0;
    double intensity = 0.0;  // |alpha_ss|^2
};

/// Stationary drive sweep (requires f1 = chi1 = 0). Each point is relaxed
/// to a steady state seeded from the previous point's endpoint, then
/// polished with Newton iterations; direction selects the traversal order
/// of f_values (given ascending). Throws ConvergenceError when no steady
/// state is reached within t = 200/gamma.
std::vector<SweepPoint> hysteresis_sweep(const OscillatorParams& p,
                                         const std::vector<double>& f_values,
                                         SweepDirection direction, const OdeOptions& opt = {});

/// |f0|^2 - I [(gamma/2)^2 + (Delta + chi0 (1 + 2 I))^2] at I = |alpha|^2:
/// zero exactly at the stationary fixed points.
double fixed_point_residual(const OscillatorParams& p, cplx alpha);

struct ScaledParams : OscillatorParams {
    double lambda = 1.0;
};

/// Parameter map Delta' = Delta + chi0 (1 - 1/lambda^2), chi' = chi/lambda^2,
/// f' = lambda f (both modulation channels scaled channel-wise), gamma' = gamma.
/// Mean-field trajectories with alpha'(0) = lambda alpha(0) then satisfy
/// alpha'(t) = lambda alpha(t) whenever chi1 = 0; the chi1 sine term breaks
/// exact covariance because the Delta shift can absorb only the static part.
ScaledParams scale_transform(const OscillatorParams& p, double lambda);

} // namespace kerrmod
