#include "kerrmod/wigner.hpp"
#include "kerrmod/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

namespace kerrmod {

namespace {

constexpr double two_over_pi = 2.0 / std::numbers::pi;

// Rescaling bounds for the Laguerre sweep mantissas: 2^466 and 466*ln 2.
constexpr double resc_hi = 0x1p466;
constexpr double resc_lo = 0x1p-466;
constexpr double resc_log = 466.0 * std::numbers::ln2;

// One diagonal of the kernel at fixed k = m - n, evaluated by a three-term
// recurrence on the scaled product
//   g_n = sqrt(n!/(n+k)!) (2r)^k e^{-2r^2} L_n^k(4r^2),
// whose true value is bounded by pi/2 * |W_{n+k,n}| <= 1. The mantissa
// pair (g_{n-1}, g_n) carries an exponent offset `off` so intermediate
// magnitudes far outside the double range (deep tails at large radius or
// high k) never overflow or flush to zero.
class KernelDiagonal {
public:
    // lgam_k = lgamma(k + 1)
    KernelDiagonal(std::size_t k, double r, double lgam_k) : k_(static_cast<double>(k)) {
        x_ = 4.0 * r * r;
        off_ = -2.0 * r * r;
        if (k > 0)
            off_ += k_ * std::log(2.0 * r) - 0.5 * lgam_k;  // -inf at r = 0, exact
        update_scale();
    }

    /// g_n including the exponent offset (the current term, n from 0 up).
    double value() const { return scale_ * b_; }

    /// Advances n -> n + 1.
    void advance() {
        const double np1 = n_ + 1.0;
        const double tn = std::sqrt(np1 / (np1 + k_));
        const double tn1 = n_ > 0.0 ? std::sqrt(n_ / (n_ + k_)) : 0.0;
        const double nb = tn / np1 * ((2.0 * n_ + k_ + 1.0 - x_) * b_ - (n_ + k_) * tn1 * a_);
        a_ = b_;
        b_ = nb;
        n_ = np1;

        const double mag = std::max(std::abs(a_), std::abs(b_));
        if (mag > resc_hi) {
            a_ = std::ldexp(a_, -466);
            b_ = std::ldexp(b_, -466);
            off_ += resc_log;
            update_scale();
        } else if (mag < resc_lo && mag > 0.0) {
            a_ = std::ldexp(a_, 466);
            b_ = std::ldexp(b_, 466);
            off_ -= resc_log;
            update_scale();
        }
    }

private:
    void update_scale() {
        scale_ = off_ > -745.0 ? std::exp(std::min(off_, 709.0)) : 0.0;
    }

    double k_;
    double x_ = 0.0;
    double n_ = 0.0;
    double a_ = 0.0;  // g_{n-1} mantissa
    double b_ = 1.0;  // g_n mantissa (L_0 = 1)
    double off_ = 0.0;
    double scale_ = 0.0;
};

cplx wigner_sum(const Eigen::MatrixXcd& rho, double x, double y) {
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    const double r = std::hypot(x, y);
    const double theta = std::atan2(y, x);

    const cplx eith(std::cos(theta), std::sin(theta));
    cplx eik(1.0, 0.0);  // e^{i k theta}
    double lgam = 0.0;   // lgamma(k + 1)
    cplx acc(0.0, 0.0);

    for (std::size_t k = 0; k < dim; ++k) {
        if (k > 0) {
            lgam += std::log(static_cast<double>(k));
            eik *= eith;
        }
        if (k > 0 && r == 0.0)
            continue;  // (2r)^k vanishes exactly
        KernelDiagonal diag(k, r, lgam);
        double sign = two_over_pi;  // (2/pi)(-1)^n
        for (std::size_t n = 0; n + k < dim; ++n) {
            const double coeff = sign * diag.value();
            if (k == 0)
                acc += coeff * rho(n, n);
            else
                acc += coeff * (rho(n, n + k) * eik + rho(n + k, n) * std::conj(eik));
            diag.advance();
            sign = -sign;
        }
    }
    return acc;
}

void check_residue(double residue) {
    if (residue > 1e-8) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "wigner transform: imaginary residue %.3e exceeds 1e-8", residue);
        throw CorruptedDensityError(msg);
    }
}

void require_square(const Eigen::MatrixXcd& rho) {
    if (rho.rows() < 1 || rho.rows() != rho.cols())
        throw InvalidParameterError("wigner: density matrix must be square and non-empty");
}

} // namespace

void GridSpec::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max) || !(x_max > x_min) || !(y_max > y_min))
        throw InvalidParameterError("GridSpec: window must be finite with positive extent");
    if (nx < 1 || ny < 1)
        throw InvalidParameterError("GridSpec: nx and ny must be >= 1");
}

double WignerGrid::integral() const {
    double acc = 0.0;
    for (double v : values)
        acc += v;
    return acc * spec.dx() * spec.dy();
}

cplx wigner_coeff(std::size_t m, std::size_t n, double r, double theta) {
    if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(theta))
        throw InvalidParameterError("wigner_coeff: bad polar coordinates");
    if (m < n)
        return std::conj(wigner_coeff(n, m, r, theta));

    const std::size_t k = m - n;
    if (k > 0 && r == 0.0)
        return {0.0, 0.0};
    const double lgam_k = std::lgamma(static_cast<double>(k) + 1.0);
    KernelDiagonal diag(k, r, lgam_k);
    for (std::size_t i = 0; i < n; ++i)
        diag.advance();
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double base = two_over_pi * sign * diag.value();
    const double ang = static_cast<double>(k) * theta;
    return base * cplx(std::cos(ang), std::sin(ang));
}

double wigner_point(const Eigen::MatrixXcd& rho, double x, double y) {
    require_square(rho);
    const cplx w = wigner_sum(rho, x, y);
    check_residue(std::abs(w.imag()));
    return w.real();
}

WignerGrid wigner_from_rho(const Eigen::MatrixXcd& rho, const GridSpec& grid,
                           unsigned n_workers) {
    require_square(rho);
    grid.validate();

    WignerGrid out;
    out.spec = grid;
    out.values.assign(grid.nx * grid.ny, 0.0);

    if (n_workers == 0) {
        n_workers = std::thread::hardware_concurrency();
        if (n_workers == 0)
            n_workers = 1;
    }
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, grid.nx));

    std::atomic<std::size_t> cursor{0};
    std::vector<double> residues(n_workers, 0.0);

    auto rows = [&](unsigned wid) {
        double worst = 0.0;
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= grid.nx)
                break;
            const double x = grid.x_at(i);
            for (std::size_t j = 0; j < grid.ny; ++j) {
                const cplx w = wigner_sum(rho, x, grid.y_at(j));
                out.values[i * grid.ny + j] = w.real();
                worst = std::max(worst, std::abs(w.imag()));
            }
        }
        residues[wid] = worst;
    };

    if (n_workers == 1) {
        rows(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned wid = 0; wid < n_workers; ++wid)
            pool.emplace_back(rows, wid);
        for (std::thread& th : pool)
            th.join();
    }

    double worst = 0.0;
    for (double v : residues)
        worst = std::max(worst, v);
    check_residue(worst);
    return out;
}

Negativity negativity(const WignerGrid& grid) {
    Negativity neg;
    double acc = 0.0;
    double mn = grid.values.empty() ? 0.0 : grid.values[0];
    for (double v : grid.values) {
        mn = std::min(mn, v);
        if (v < 0.0)
            acc -= v;
    }
    neg.min_value = mn;
    neg.neg_volume = acc * grid.spec.dx() * grid.spec.dy();
    return neg;
}

std::vector<double> photon_distribution(const Eigen::MatrixXcd& rho) {
    require_square(rho);
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    std::vector<double> p(d);
    for (std::size_t n = 0; n < d; ++n)
        p[n] = rho(n, n).real();
    return p;
}

QuadratureDistribution quadrature_distribution(const WignerGrid& grid, QuadratureAxis axis) {
    QuadratureDistribution q;
    const GridSpec& g = grid.spec;
    if (axis == QuadratureAxis::x) {
        q.coords.resize(g.nx);
        q.values.assign(g.nx, 0.0);
        for (std::size_t i = 0; i < g.nx; ++i) {
            q.coords[i] = g.x_at(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < g.ny; ++j)
                acc += grid.at(i, j);
            q.values[i] = acc * g.dy();
        }
    } else {
        q.coords.resize(g.ny);
        q.values.assign(g.ny, 0.0);
        for (std::size_t j = 0; j < g.ny; ++j) {
            q.coords[j] = g.y_at(j);
            double acc = 0.0;
            for (std::size_t i = 0; i < g.nx; ++i)
                acc += grid.at(i, j);
            q.values[j] = acc * g.dx();
        }
    }
    double peak = 0.0;
    for (double v : q.values)
        peak = std::max(peak, std::abs(v));
    if (!q.values.empty() &&
        (std::abs(q.values.front()) > 1e-6 * peak || std::abs(q.values.back()) > 1e-6 * peak))
        q.truncated_support = true;
    return q;
}

std::vector<GridPeak> find_local_maxima(const WignerGrid& grid, double floor_frac) {
    std::vector<GridPeak> peaks;
    const GridSpec& g = grid.spec;
    if (g.nx < 3 || g.ny < 3)
        return peaks;
    double top = grid.values[0];
    for (double v : grid.values)
        top = std::max(top, v);
    const double floor = top > 0.0 ? floor_frac * top : top;

    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        for (std::size_t j = 1; j + 1 < g.ny; ++j) {
            const double v = grid.at(i, j);
            if (v <= floor)
                continue;
            bool strict = true;
            for (int di = -1; di <= 1 && strict; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0)
                        continue;
                    if (grid.at(i + static_cast<std::size_t>(di),
                                j + static_cast<std::size_t>(dj)) >= v) {
                        strict = false;
                        break;
                    }
                }
            if (strict)
                peaks.push_back({g.x_at(i), g.y_at(j), v});
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const GridPeak& a, const GridPeak& b) { return a.w > b.w; });
    return peaks;
}

double suggested_half_width(const Eigen::MatrixXcd& rho) {
    require_square(rho);
    const auto [m1, m2] = density_number_moments(rho);
    (void)m2;
    return std::sqrt(std::max(m1, 0.0)) + 5.0;
}

} // namespace kerrmod
