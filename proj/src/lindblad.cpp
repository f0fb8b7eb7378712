#include "kerrmod/lindblad.hpp"
#include "kerrmod/errors.hpp"

#include <cmath>
#include <cstdio>

namespace kerrmod {

namespace {

Eigen::MatrixXcd lowering_matrix(std::size_t dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t n = 0; n + 1 < dim; ++n)
        a(n, n + 1) = std::sqrt(static_cast<double>(n) + 1.0);
    return a;
}

} // namespace

double DensityMatrix::hermiticity_residual() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double psd_tol) const {
    char buf[160];
    const double herm = hermiticity_residual();
    if (!(herm <= herm_tol)) {
        std::snprintf(buf, sizeof buf,
                      "density matrix: hermiticity residual %.3e exceeds %.3e", herm, herm_tol);
        throw CorruptedDensityError(buf);
    }
    const double tr = trace_real();
    if (!(std::abs(tr - 1.0) <= trace_tol)) {
        std::snprintf(buf, sizeof buf,
                      "density matrix: trace %.12g deviates from 1 by more than %.3e", tr, trace_tol);
        throw CorruptedDensityError(buf);
    }
    const double ev = min_eigenvalue();
    if (!(ev >= -psd_tol)) {
        std::snprintf(buf, sizeof buf,
                      "density matrix: eigenvalue %.3e below -%.3e", ev, psd_tol);
        throw CorruptedDensityError(buf);
    }
}

DensityMatrix density_from_state(const FockVector& s, double time) {
    const std::size_t d = s.dim();
    Eigen::VectorXcd v(d);
    for (std::size_t n = 0; n < d; ++n)
        v(n) = s[n];
    DensityMatrix rho;
    rho.m = v * v.adjoint();
    rho.time = time;
    return rho;
}

Eigen::MatrixXcd rho_derivative(const OscillatorParams& p, double t,
                                const Eigen::MatrixXcd& rho) {
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    const double chi = chi_at(p, t);
    const double f = drive_at(p, t);
    const auto [c1, c2] = lindblad_coeffs(p);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        h(n, n) = p.delta * nn + chi * nn * nn;
        if (n + 1 < d) {
            const double r = f * std::sqrt(nn + 1.0);
            h(n, n + 1) += r;
            h(n + 1, n) += r;
        }
    }

    const Eigen::MatrixXcd a = lowering_matrix(d);
    const Eigen::MatrixXcd ad = a.adjoint();

    // Keep the dissipators linear in rho (no adjoint folding): an
    // anti-Hermitian roundoff component must stay damped too, otherwise
    // long integrations amplify it exponentially.
    Eigen::MatrixXcd out = cplx(0.0, -1.0) * (h * rho - rho * h);
    if (c1 != 0.0) {
        const Eigen::MatrixXcd arho = a * rho;
        out += (c1 * c1) * (arho * ad - 0.5 * (ad * arho) - 0.5 * (rho * ad) * a);
    }
    if (c2 != 0.0) {
        const Eigen::MatrixXcd adrho = ad * rho;
        out += (c2 * c2) * (adrho * a - 0.5 * (a * adrho) - 0.5 * (rho * a) * ad);
    }
    return out;
}

std::pair<double, double> density_number_moments(const Eigen::MatrixXcd& rho) {
    double m1 = 0.0, m2 = 0.0;
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    for (std::size_t n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        const double pn = rho(n, n).real();
        m1 += nn * pn;
        m2 += nn * nn * pn;
    }
    return {m1, m2};
}

MasterSolution integrate_master(const OscillatorParams& p, std::size_t dim,
                                const DensityMatrix& rho0,
                                const std::vector<double>& sample_times,
                                double dt, bool allow_large) {
    p.validate();
    if (dim < 1 || rho0.dim() != dim)
        throw InvalidParameterError("integrate_master: dimension mismatch");
    if (dim > 64 && !allow_large)
        throw InvalidParameterError(
            "integrate_master: dim > 64 needs allow_large (dense dim^2 cost)");
    if (!(dt > 0.0) || dt > 1e-2)
        throw InvalidParameterError("integrate_master: dt must be in (0, 1e-2]");
    if (sample_times.empty())
        throw InvalidParameterError("integrate_master: no sample times");

    // Snap sample times to the fixed step grid.
    std::vector<long> sample_steps;
    sample_steps.reserve(sample_times.size());
    long last = -1;
    for (double t : sample_times) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw InvalidParameterError("integrate_master: bad sample time");
        const long k = std::lround(t / dt);
        if (k <= last)
            throw InvalidParameterError("integrate_master: sample times must be increasing");
        sample_steps.push_back(k);
        last = k;
    }

    MasterSolution sol;
    Eigen::MatrixXcd rho = rho0.m;
    std::size_t next = 0;
    const long n_steps = sample_steps.back();
    for (long step = 0; step <= n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        if (next < sample_steps.size() && step == sample_steps[next]) {
            DensityMatrix snap{rho, t};
            try {
                snap.validate(1e-9, 1e-8, 1e-7);
            } catch (const CorruptedDensityError& e) {
                char buf[224];
                std::snprintf(buf, sizeof buf,
                              "integrate_master at t=%.6g: %s (dt too large)", t, e.what());
                throw StepFailureError(buf);
            }
            sol.times.push_back(t);
            const auto [m1, m2] = density_number_moments(rho);
            sol.mean_n.push_back(m1);
            sol.mean_n2.push_back(m2);
            sol.rho.push_back(std::move(snap));
            ++next;
        }
        if (step == n_steps)
            break;
        const Eigen::MatrixXcd k1 = rho_derivative(p, t, rho);
        const Eigen::MatrixXcd k2 = rho_derivative(p, t + 0.5 * dt, rho + (0.5 * dt) * k1);
        const Eigen::MatrixXcd k3 = rho_derivative(p, t + 0.5 * dt, rho + (0.5 * dt) * k2);
        const Eigen::MatrixXcd k4 = rho_derivative(p, t + dt, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return sol;
}

} // namespace kerrmod
