#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace kerrmod {

using cplx = std::complex<double>;

/// State vector in a truncated number basis {|0>, ..., |dim-1>}.
struct FockVector {
    std::vector<cplx> amp;

    FockVector() = default;
    explicit FockVector(std::size_t dim) : amp(dim) {}

    std::size_t dim() const { return amp.size(); }
    cplx& operator[](std::size_t n) { return amp[n]; }
    const cplx& operator[](std::size_t n) const { return amp[n]; }
};

/// |0...0, 1 at n, 0...> basis state.
FockVector fock_state(std::size_t dim, std::size_t n);

FockVector vacuum_state(std::size_t dim);

/// Coherent state with amplitude alpha0, renormalized over the truncated
/// basis. Amplitudes are assembled in log space so large |alpha0| and
/// large dim do not overflow the factorial.
FockVector coherent_state(std::size_t dim, cplx alpha0);

/// (a s)_n = sqrt(n+1) s_{n+1}; the result's top bin is 0.
FockVector apply_lowering(const FockVector& s);

/// (a^+ s)_n = sqrt(n) s_{n-1}. Amplitude raised past the top bin is
/// dropped; the overload with a leakage reference accumulates the dropped
/// probability weight dim * |s_{dim-1}|^2.
FockVector apply_raising(const FockVector& s);
FockVector apply_raising(const FockVector& s, double& leakage);

/// Hermitian inner product <u|v> (conjugate-linear in u).
cplx inner(const FockVector& u, const FockVector& v);

double norm(const FockVector& s);

/// Scales to unit norm; throws InvalidParameterError on a zero vector.
void normalize(FockVector& s);

/// (<n>, <n^2>) for a unit-norm state.
std::pair<double, double> number_moments(const FockVector& s);

/// <a> = sum_n conj(s_n) sqrt(n+1) s_{n+1}.
cplx mean_lowering(const FockVector& s);

/// Probability weight in the top `band` bins; the truncation monitor.
double tail_mass(const FockVector& s, std::size_t band = 5);

/// Basis-size heuristic for a run that explores occupations up to n_max:
/// n_max + 8 sqrt(n_max) + 10, rounded up.
std::size_t suggested_dim(double n_max);

} // namespace kerrmod
