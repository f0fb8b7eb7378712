#pragma once

#include "kerrmod/lindblad.hpp"

#include <cstddef>
#include <vector>

namespace kerrmod {

/// Rectangular phase-space window sampled at cell centers.
struct GridSpec {
    double x_min = -5.0, x_max = 5.0;
    double y_min = -5.0, y_max = 5.0;
    std::size_t nx = 201, ny = 201;

    void validate() const;
    double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
    double dy() const { return (y_max - y_min) / static_cast<double>(ny); }
    double x_at(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
    double y_at(std::size_t j) const { return y_min + (static_cast<double>(j) + 0.5) * dy(); }
};

/// W sampled on a grid; values are row-major with the x index major.
struct WignerGrid {
    GridSpec spec;
    std::vector<double> values;  // size nx * ny

    double at(std::size_t i, std::size_t j) const { return values[i * spec.ny + j]; }
    /// Midpoint-rule integral of W over the window.
    double integral() const;
};

/// Matrix element W_mn(r, theta) of the phase-space kernel; for m >= n
///   W_mn = (2/pi)(-1)^n sqrt(n!/m!) e^{i(m-n)theta} (2r)^{m-n} e^{-2r^2}
///          L_n^{m-n}(4 r^2),
/// and W_nm = conj(W_mn). Magnitude factors are tracked in log space with
/// a rescaled Laguerre recurrence, so the evaluation stays finite for any
/// m, n up to a few thousand at any radius.
cplx wigner_coeff(std::size_t m, std::size_t n, double r, double theta);

/// W(x, y) = Re sum_nm rho_nm W_mn at one point; throws
/// CorruptedDensityError if the imaginary residue exceeds 1e-8.
double wigner_point(const Eigen::MatrixXcd& rho, double x, double y);

/// Samples W on the grid (embarrassingly parallel over rows). Throws
/// CorruptedDensityError if the imaginary residue exceeds 1e-8 anywhere.
WignerGrid wigner_from_rho(const Eigen::MatrixXcd& rho, const GridSpec& grid,
                           unsigned n_workers = 1);

struct Negativity {
    double min_value = 0.0;
    double neg_volume = 0.0;  // sum of |W| dx dy over cells with W < 0
};

Negativity negativity(const WignerGrid& grid);

/// P_n = Re rho_nn.
std::vector<double> photon_distribution(const Eigen::MatrixXcd& rho);

struct QuadratureDistribution {
    std::vector<double> coords;
    std::vector<double> values;
    /// Set when the window boundary still carries weight (> 1e-6 of the
    /// peak), i.e. the marginal is truncated.
    bool truncated_support = false;
};

enum class QuadratureAxis { x, y };

/// Marginal of W along one quadrature (midpoint sum over the other axis).
QuadratureDistribution quadrature_distribution(const WignerGrid& grid, QuadratureAxis axis);

struct GridPeak {
    double x = 0.0, y = 0.0, w = 0.0;
};

/// Strict 8-neighbour local maxima above floor_frac * max(W), sorted by
/// height, descending.
std::vector<GridPeak> find_local_maxima(const WignerGrid& grid, double floor_frac = 0.1);

/// Symmetric window half-width sqrt(<n>) + 5 suggested by the occupation
/// of rho.
double suggested_half_width(const Eigen::MatrixXcd& rho);

} // namespace kerrmod
