#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testsup {

namespace {

double simpson_slice(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_slice(a, fa, m, fm, flm);
    const double right = simpson_slice(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (a == b)
        return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return simpson_rec(f, a, fa, b, fb, m, fm, simpson_slice(a, fa, b, fb, fm), tol, 48);
}

Eigen::MatrixXcd random_density(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            a(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

kerrmod::FockVector random_state(std::size_t dim, std::uint64_t seed,
                                 std::size_t empty_top) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    kerrmod::FockVector s(dim);
    for (std::size_t n = 0; n + empty_top < dim; ++n)
        s[n] = cplx(gauss(rng), gauss(rng));
    kerrmod::normalize(s);
    return s;
}

double wigner_integral_oracle(const Eigen::MatrixXcd& rho, double x, double y,
                              double half_width, double step) {
    const auto d = static_cast<std::size_t>(rho.rows());
    std::vector<double> fact(2 * d, 1.0);
    for (std::size_t k = 1; k < fact.size(); ++k)
        fact[k] = fact[k - 1] * static_cast<double>(k);
    std::vector<double> sqrt_fact(d, 1.0);
    for (std::size_t k = 1; k < d; ++k)
        sqrt_fact[k] = std::sqrt(fact[k]);

    const cplx alpha(x, y);
    const auto cells = static_cast<std::size_t>(std::llround(2.0 * half_width / step));
    std::vector<cplx> lpow(d), clpow(d);
    cplx acc(0.0, 0.0);

    for (std::size_t iu = 0; iu < cells; ++iu) {
        const double u = -half_width + (static_cast<double>(iu) + 0.5) * step;
        for (std::size_t iv = 0; iv < cells; ++iv) {
            const double v = -half_width + (static_cast<double>(iv) + 0.5) * step;
            const cplx l(u, v);
            lpow[0] = 1.0;
            clpow[0] = 1.0;
            for (std::size_t k = 1; k < d; ++k) {
                lpow[k] = lpow[k - 1] * l;
                clpow[k] = clpow[k - 1] * (-std::conj(l));
            }
            // C(l) = e^{-|l|^2/2} sum_{mn} rho_nm sqrt(m! n!)
            //        sum_k l^{m-n+k} (-conj(l))^k / ((m-n+k)! k! (n-k)!)
            cplx c(0.0, 0.0);
            for (std::size_t n = 0; n < d; ++n) {
                for (std::size_t m = 0; m < d; ++m) {
                    cplx elem(0.0, 0.0);
                    const std::size_t k0 = n > m ? n - m : 0;
                    for (std::size_t k = k0; k <= n; ++k) {
                        const std::size_t j = m - n + k;
                        if (j >= d)
                            break;
                        elem += lpow[j] * clpow[k] / (fact[j] * fact[k] * fact[n - k]);
                    }
                    c += rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) *
                         sqrt_fact[m] * sqrt_fact[n] * elem;
                }
            }
            const double uu = u * u + v * v;
            // e^{alpha conj(l) - conj(alpha) l} = e^{2i Im(alpha conj(l))}
            const double phase = 2.0 * (y * u - x * v);
            acc += std::exp(-0.5 * uu) * cplx(std::cos(phase), std::sin(phase)) * c;
        }
    }
    return acc.real() * step * step / (std::numbers::pi * std::numbers::pi);
}

} // namespace testsup
