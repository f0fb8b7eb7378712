#pragma once

#include "kerrmod/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace kerrmod {

/// Dense density matrix in the truncated number basis.
struct DensityMatrix {
    Eigen::MatrixXcd m;
    double time = 0.0;

    std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }
    double trace_real() const { return m.trace().real(); }

    /// max_ij |m_ij - conj(m_ji)|.
    double hermiticity_residual() const;

    /// Smallest eigenvalue of the hermitized matrix.
    double min_eigenvalue() const;

    /// Throws CorruptedDensityError unless Hermitian within herm_tol,
    /// unit trace within trace_tol and min eigenvalue >= -psd_tol.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double psd_tol = 1e-7) const;
};

DensityMatrix density_from_state(const FockVector& s, double time = 0.0);

/// Right-hand side of the master equation
///   d rho/dt = -i[H, rho] + sum_j (L_j rho L_j^+ - {L_j^+ L_j, rho}/2)
/// with H = delta n + chi(t) n^2 + f(t)(a + a^+), L1 = c1 a, L2 = c2 a^+.
/// The result is Hermitian and traceless to rounding.
Eigen::MatrixXcd rho_derivative(const OscillatorParams& p, double t,
                                const Eigen::MatrixXcd& rho);

struct MasterSolution {
    std::vector<double> times;
    std::vector<DensityMatrix> rho;
    std::vector<double> mean_n, mean_n2;
};

/// Fixed-step classical RK4 on the vectorized master equation. Sample
/// times are snapped to the step grid. Dense dim^2 storage: dim is
/// guarded at 64 unless allow_large is set.
MasterSolution integrate_master(const OscillatorParams& p, std::size_t dim,
                                const DensityMatrix& rho0,
                                const std::vector<double>& sample_times,
                                double dt = 1e-3, bool allow_large = false);

/// Number-operator moments (<n>, <n^2>) of a density matrix.
std::pair<double, double> density_number_moments(const Eigen::MatrixXcd& rho);

} // namespace kerrmod
