#pragma once

#include "kerrmod/fock.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace testsup {

using kerrmod::cplx;

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

/// Deterministic random Hermitian positive unit-trace matrix (A A^+ / tr).
Eigen::MatrixXcd random_density(std::size_t dim, std::uint64_t seed);

/// Deterministic random unit-norm state with a cushion of empty top bins.
kerrmod::FockVector random_state(std::size_t dim, std::uint64_t seed,
                                 std::size_t empty_top = 0);

/// Wigner function evaluated straight from its characteristic-function
/// integral, W(a) = (1/pi^2) Int d2l e^{a conj(l) - conj(a) l} Tr[rho D(l)],
/// with the displacement matrix elements <m|D(l)|n> computed as explicit
/// finite sums. Midpoint rule on [-half_width, half_width]^2 with the
/// given step. Independent of the series-expansion evaluator under test.
double wigner_integral_oracle(const Eigen::MatrixXcd& rho, double x, double y,
                              double half_width = 11.0, double step = 0.1);

} // namespace testsup
