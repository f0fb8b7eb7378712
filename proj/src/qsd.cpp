#include "kerrmod/qsd.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

namespace kerrmod {

namespace {

// ---------------------------------------------------------------- schedule

struct Schedule {
    long n_steps = 0;
    std::vector<long> sample_steps;
    std::vector<long> snapshot_steps;
};

std::vector<long> snap_to_grid(std::span<const double> times, double dt, double t_end,
                               const char* what) {
    std::vector<long> steps;
    steps.reserve(times.size());
    long last = -1;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0 || t > t_end + 0.5 * dt)
            throw InvalidParameterError(std::string(what) + ": time outside [0, t_end]");
        const long k = std::lround(t / dt);
        if (k <= last)
            throw InvalidParameterError(std::string(what) + ": times must be strictly increasing");
        steps.push_back(k);
        last = k;
    }
    return steps;
}

Schedule build_schedule(const TrajectoryConfig& cfg, std::span<const double> snapshot_times) {
    Schedule sch;
    sch.sample_steps = snap_to_grid(cfg.sample_times, cfg.dt, cfg.t_end, "sample_times");
    sch.snapshot_steps = snap_to_grid(snapshot_times, cfg.dt, cfg.t_end, "rho_times");
    sch.n_steps = std::lround(cfg.t_end / cfg.dt);
    if (!sch.sample_steps.empty())
        sch.n_steps = std::max(sch.n_steps, sch.sample_steps.back());
    if (!sch.snapshot_steps.empty())
        sch.n_steps = std::max(sch.n_steps, sch.snapshot_steps.back());
    return sch;
}

// ----------------------------------------------------------------- stepper

// One-step propagator for the nonlinear stochastic state diffusion
//   d|psi> = -iH|psi>dt
//          + sum_j (<L_j^+>L_j - L_j^+L_j/2 - <L_j^+><L_j>/2)|psi>dt
//          + sum_j (L_j - <L_j>)|psi> dxi_j
// followed by renormalization. Channel 1 is c1*a, channel 2 is c2*a^+.
//
// The exp_diag scheme multiplies the Euler update by the exact one-step
// integrating factor of the diagonal generator,
//   exp[(-i(delta n + <chi> n^2) - (c1^2 n + c2^2 (n+1))/2) dt],
// with <chi> the exact step average of chi(t). The Kerr phase factor
// u^(n^2) is generated by a two-multiply recurrence per bin instead of a
// per-bin complex exponential; this loop dominates the cost of every
// ensemble run, so the complex arithmetic is written out in doubles to
// keep the compiler out of the IEEE corner-case helper calls.
class Stepper {
public:
    Stepper(const OscillatorParams& p, double dt, StepScheme scheme, std::size_t dim)
        : p_(p), dt_(dt), scheme_(scheme), dim_(dim), buf_(dim) {
        const auto [c1, c2] = lindblad_coeffs(p);
        c1_ = c1;
        c2_ = c2;
        c1sq_ = c1 * c1;
        c2sq_ = c2 * c2;
        sqrt_n_.resize(dim + 1);
        for (std::size_t n = 0; n <= dim; ++n)
            sqrt_n_[n] = std::sqrt(static_cast<double>(n));
        if (scheme == StepScheme::exp_diag) {
            damp_rot_.resize(dim);
            for (std::size_t n = 0; n < dim; ++n) {
                const double nn = static_cast<double>(n);
                const double mag =
                    std::exp(-(0.5 * c1sq_ * nn + 0.5 * c2sq_ * (nn + 1.0)) * dt);
                const double ang = -p.delta * nn * dt;
                damp_rot_[n] = {mag * std::cos(ang), mag * std::sin(ang)};
            }
        }
    }

    /// Advances s (unit norm) from t to t + dt in place.
    void step(FockVector& s, double t, const NoisePair& xi) {
        if (scheme_ == StepScheme::euler)
            step_euler(s, t, xi);
        else
            step_exp_diag(s, t, xi);
    }

private:
    void renorm_from(FockVector& s, const std::vector<cplx>& buf, double norm2, double t) const {
        const double nrm = std::sqrt(norm2);
        if (!(nrm >= 1e-8)) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "qsd step at t=%.6g: norm %.3e below 1e-8, dt too large", t, nrm);
            throw StepFailureError(msg);
        }
        const double inv = 1.0 / nrm;
        for (std::size_t n = 0; n < dim_; ++n)
            s[n] = buf[n] * inv;
    }

    // Reference scheme: one explicit Euler-Maruyama step on everything.
    void step_euler(FockVector& s, double t, const NoisePair& xi) {
        const double chi = chi_at(p_, t);
        const double f = drive_at(p_, t);
        const cplx a_mean = mean_lowering(s);
        const cplx ad_mean = std::conj(a_mean);
        const double a_abs2 = std::norm(a_mean);
        const cplx mi(0.0, -1.0);

        double norm2 = 0.0;
        for (std::size_t n = 0; n < dim_; ++n) {
            const double nn = static_cast<double>(n);
            const cplx low = n + 1 < dim_ ? sqrt_n_[n + 1] * s[n + 1] : cplx(0.0);
            const cplx rai = n > 0 ? sqrt_n_[n] * s[n - 1] : cplx(0.0);
            const cplx hs = (p_.delta * nn + chi * nn * nn) * s[n] + f * (low + rai);
            cplx drift = mi * hs;
            drift += c1sq_ * (ad_mean * low - 0.5 * nn * s[n] - 0.5 * a_abs2 * s[n]);
            drift += c2sq_ * (a_mean * rai - 0.5 * (nn + 1.0) * s[n] - 0.5 * a_abs2 * s[n]);
            cplx out = s[n] + dt_ * drift;
            out += c1_ * (low - a_mean * s[n]) * xi.dxi1;
            out += c2_ * (rai - ad_mean * s[n]) * xi.dxi2;
            buf_[n] = out;
            norm2 += std::norm(out);
        }
        renorm_from(s, buf_, norm2, t);
    }

    void step_exp_diag(FockVector& s, double t, const NoisePair& xi) {
        const double f = drive_at(p_, t);
        const double dphi = chi_integral(p_, t, t + dt_);

        // Kerr rotation u = exp(-i dphi); p_k = u^(n^2) via
        // p_{n+1} = p_n q_n, q_{n+1} = q_n u^2.
        const double u_re = std::cos(dphi), u_im = -std::sin(dphi);
        const double u2_re = u_re * u_re - u_im * u_im;
        const double u2_im = 2.0 * u_re * u_im;
        double pk_re = 1.0, pk_im = 0.0;
        double qk_re = u_re, qk_im = u_im;

        double ar = 0.0, ai = 0.0;  // <a>
        {
            const cplx a_mean = mean_lowering(s);
            ar = a_mean.real();
            ai = a_mean.imag();
        }
        const double a_abs2 = ar * ar + ai * ai;
        const double scal = -0.5 * (c1sq_ + c2sq_) * a_abs2;

        const double x1r = xi.dxi1.real(), x1i = xi.dxi1.imag();
        const double x2r = xi.dxi2.real(), x2i = xi.dxi2.imag();

        double norm2 = 0.0;
        for (std::size_t n = 0; n < dim_; ++n) {
            const double sr = s[n].real(), si = s[n].imag();
            double lr = 0.0, li = 0.0, rr = 0.0, ri = 0.0;
            if (n + 1 < dim_) {
                const double c = sqrt_n_[n + 1];
                lr = c * s[n + 1].real();
                li = c * s[n + 1].imag();
            }
            if (n > 0) {
                const double c = sqrt_n_[n];
                rr = c * s[n - 1].real();
                ri = c * s[n - 1].imag();
            }

            // drift: -i f (low + rai) + c1^2 conj(<a>) low + c2^2 <a> rai + scal s
            double dr = f * (li + ri) + c1sq_ * (ar * lr + ai * li)
                      + c2sq_ * (ar * rr - ai * ri) + scal * sr;
            double di = -f * (lr + rr) + c1sq_ * (ar * li - ai * lr)
                      + c2sq_ * (ar * ri + ai * rr) + scal * si;

            // noise: c1 (low - <a> s) dxi1 + c2 (rai - conj(<a>) s) dxi2
            const double t1r = lr - (ar * sr - ai * si);
            const double t1i = li - (ar * si + ai * sr);
            const double t2r = rr - (ar * sr + ai * si);
            const double t2i = ri - (ar * si - ai * sr);

            double or_ = sr + dt_ * dr + c1_ * (t1r * x1r - t1i * x1i)
                       + c2_ * (t2r * x2r - t2i * x2i);
            double oi_ = si + dt_ * di + c1_ * (t1r * x1i + t1i * x1r)
                       + c2_ * (t2r * x2i + t2i * x2r);

            // integrating factor: damp_rot[n] * u^(n^2)
            const double wr = damp_rot_[n].real(), wi = damp_rot_[n].imag();
            const double phr = wr * pk_re - wi * pk_im;
            const double phi = wr * pk_im + wi * pk_re;
            const double fr = or_ * phr - oi_ * phi;
            const double fi = or_ * phi + oi_ * phr;
            buf_[n] = {fr, fi};
            norm2 += fr * fr + fi * fi;

            const double npk_re = pk_re * qk_re - pk_im * qk_im;
            const double npk_im = pk_re * qk_im + pk_im * qk_re;
            pk_re = npk_re;
            pk_im = npk_im;
            const double nqk_re = qk_re * u2_re - qk_im * u2_im;
            const double nqk_im = qk_re * u2_im + qk_im * u2_re;
            qk_re = nqk_re;
            qk_im = nqk_im;
        }
        renorm_from(s, buf_, norm2, t);
    }

    OscillatorParams p_;
    double dt_;
    StepScheme scheme_;
    std::size_t dim_;
    std::vector<cplx> buf_;
    double c1_ = 0.0, c2_ = 0.0, c1sq_ = 0.0, c2sq_ = 0.0;
    std::vector<double> sqrt_n_;
    std::vector<cplx> damp_rot_;
};

FockVector make_initial_state(const TrajectoryConfig& cfg) {
    switch (cfg.initial_state) {
        case InitialState::vacuum:
            return vacuum_state(cfg.dim);
        case InitialState::coherent:
            return coherent_state(cfg.dim, cfg.initial_alpha);
        case InitialState::fock:
            return fock_state(cfg.dim, cfg.initial_fock_n);
    }
    throw InvalidParameterError("unknown initial state");
}

void check_tail(const FockVector& s, double threshold, double t) {
    const double mass = tail_mass(s);
    if (mass > threshold) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "truncation overflow: tail mass %.3e exceeds %.3e at t=%.6g",
                      mass, threshold, t);
        throw TruncationOverflowError(msg, t);
    }
}

TrajectoryResult run_trajectory_impl(const TrajectoryConfig& cfg, const OscillatorParams& p,
                                     std::span<const double> snapshot_times) {
    cfg.validate();
    p.validate();
    const Schedule sch = build_schedule(cfg, snapshot_times);

    FockVector s = make_initial_state(cfg);
    NoiseSource rng(cfg.seed);
    Stepper stepper(p, cfg.dt, cfg.scheme, cfg.dim);

    TrajectoryResult res;
    res.times.reserve(sch.sample_steps.size());
    res.mean_n.reserve(sch.sample_steps.size());
    res.mean_n2.reserve(sch.sample_steps.size());

    std::size_t next_sample = 0, next_snap = 0;
    for (long step = 0;; ++step) {
        const double t = static_cast<double>(step) * cfg.dt;
        if (next_sample < sch.sample_steps.size() && step == sch.sample_steps[next_sample]) {
            check_tail(s, cfg.tail_threshold, t);
            const auto [m1, m2] = number_moments(s);
            res.times.push_back(t);
            res.mean_n.push_back(m1);
            res.mean_n2.push_back(m2);
            ++next_sample;
        }
        if (next_snap < sch.snapshot_steps.size() && step == sch.snapshot_steps[next_snap]) {
            check_tail(s, cfg.tail_threshold, t);
            res.snapshot_times.push_back(t);
            res.snapshots.push_back(s);
            ++next_snap;
        }
        if (step == sch.n_steps)
            break;
        NoisePair xi{rng.wiener(cfg.dt), rng.wiener(cfg.dt)};
        stepper.step(s, t, xi);
    }
    return res;
}

// --------------------------------------------------------------- reduction

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 16) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += v[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

Eigen::MatrixXcd outer_reduce(const std::vector<TrajectoryResult>& res,
                              std::size_t rindex, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        const FockVector& s = res[lo].snapshots[rindex];
        Eigen::Map<const Eigen::VectorXcd> v(s.amp.data(),
                                             static_cast<Eigen::Index>(s.dim()));
        return v * v.adjoint();
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    Eigen::MatrixXcd acc = outer_reduce(res, rindex, lo, mid);
    acc += outer_reduce(res, rindex, mid, hi);
    return acc;
}

} // namespace

// ------------------------------------------------------------- public API

void TrajectoryConfig::validate() const {
    if (!(dt > 0.0) || dt > 1e-2)
        throw InvalidParameterError("TrajectoryConfig: dt must be in (0, 1e-2]");
    if (!std::isfinite(t_end) || t_end < 0.0)
        throw InvalidParameterError("TrajectoryConfig: t_end must be finite and >= 0");
    if (dim < 2)
        throw InvalidParameterError("TrajectoryConfig: dim must be >= 2");
    if (!(tail_threshold > 0.0))
        throw InvalidParameterError("TrajectoryConfig: tail_threshold must be > 0");
    if (initial_state == InitialState::fock && initial_fock_n >= dim)
        throw InvalidParameterError("TrajectoryConfig: initial level outside basis");
    if (initial_state == InitialState::coherent &&
        (!std::isfinite(initial_alpha.real()) || !std::isfinite(initial_alpha.imag())))
        throw InvalidParameterError("TrajectoryConfig: non-finite initial amplitude");
}

double mandel_q(double mean_n, double mean_n2) {
    if (!(mean_n > 0.0))
        throw UndefinedQError("mandel_q: mean occupation is not positive");
    return (mean_n2 - mean_n * mean_n - mean_n) / mean_n;
}

double pairwise_sum(std::span<const double> v) {
    return pairwise_sum_impl(v.data(), v.size());
}

FockVector qsd_step(const FockVector& s, double t, double dt, const NoisePair& noise,
                    const OscillatorParams& p, StepScheme scheme) {
    if (!(dt > 0.0) || dt > 1e-2)
        throw InvalidParameterError("qsd_step: dt must be in (0, 1e-2]");
    FockVector out = s;
    Stepper stepper(p, dt, scheme, s.dim());
    stepper.step(out, t, noise);
    return out;
}

TrajectoryResult run_trajectory(const TrajectoryConfig& cfg, const OscillatorParams& p,
                                bool want_state) {
    if (want_state)
        return run_trajectory_impl(cfg, p, cfg.sample_times);
    return run_trajectory_impl(cfg, p, {});
}

EnsembleResult run_ensemble(const TrajectoryConfig& cfg, const OscillatorParams& p,
                            std::size_t n_traj, std::span<const double> rho_times,
                            unsigned n_workers,
                            const std::function<void(std::size_t)>& progress) {
    cfg.validate();
    p.validate();
    if (n_traj < 1)
        throw InvalidParameterError("run_ensemble: n_traj must be >= 1");

    if (n_workers == 0) {
        n_workers = std::thread::hardware_concurrency();
        if (n_workers == 0)
            n_workers = 1;
    }
    n_workers = static_cast<unsigned>(
        std::min<std::size_t>(n_workers, n_traj));

    // Trajectory k is a pure function of cfg.seed + k; results land in
    // per-trajectory slots so the schedule cannot influence anything.
    std::vector<TrajectoryResult> results(n_traj);
    std::vector<std::exception_ptr> failures(n_traj);
    std::atomic<std::size_t> cursor{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= n_traj)
                return;
            TrajectoryConfig local = cfg;
            local.seed = cfg.seed + k;
            try {
                results[k] = run_trajectory_impl(local, p, rho_times);
            } catch (...) {
                failures[k] = std::current_exception();
            }
            if (progress) {
                const std::size_t d = done.fetch_add(1) + 1;
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d);
            }
        }
    };

    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w)
            pool.emplace_back(worker);
        for (std::thread& th : pool)
            th.join();
    }

    for (std::size_t k = 0; k < n_traj; ++k) {
        if (!failures[k])
            continue;
        const std::string tag = " (trajectory " + std::to_string(k) + ")";
        try {
            std::rethrow_exception(failures[k]);
        } catch (const TruncationOverflowError& e) {
            throw TruncationOverflowError(e.what() + tag, e.time);
        } catch (const StepFailureError& e) {
            throw StepFailureError(e.what() + tag);
        } catch (const Error& e) {
            throw InvalidParameterError(e.what() + tag);
        }
    }

    // Fixed-order reduction: every statistic is a pairwise sum over the
    // trajectory index, so the bytes cannot depend on the worker count.
    EnsembleResult out;
    const std::size_t n_samples = results.empty() ? 0 : results[0].times.size();
    EnsembleStats& st = out.stats;
    st.n_traj = n_traj;
    st.times = results[0].times;
    st.mean_n.resize(n_samples);
    st.mean_n2.resize(n_samples);
    st.q.resize(n_samples);
    st.se_n.resize(n_samples);
    st.se_q.resize(n_samples);

    const double m = static_cast<double>(n_traj);
    std::vector<double> xs(n_traj), ys(n_traj), work(n_traj);
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (std::size_t k = 0; k < n_traj; ++k) {
            xs[k] = results[k].mean_n[s];
            ys[k] = results[k].mean_n2[s];
        }
        const double m1 = pairwise_sum(xs) / m;
        const double m2 = pairwise_sum(ys) / m;
        st.mean_n[s] = m1;
        st.mean_n2[s] = m2;

        double var_x = 0.0, var_y = 0.0, cov_xy = 0.0;
        if (n_traj > 1) {
            for (std::size_t k = 0; k < n_traj; ++k)
                work[k] = (xs[k] - m1) * (xs[k] - m1);
            var_x = pairwise_sum(work) / (m - 1.0);
            for (std::size_t k = 0; k < n_traj; ++k)
                work[k] = (ys[k] - m2) * (ys[k] - m2);
            var_y = pairwise_sum(work) / (m - 1.0);
            for (std::size_t k = 0; k < n_traj; ++k)
                work[k] = (xs[k] - m1) * (ys[k] - m2);
            cov_xy = pairwise_sum(work) / (m - 1.0);
        }
        st.se_n[s] = std::sqrt(var_x / m);
        if (m1 > 0.0) {
            st.q[s] = mandel_q(m1, m2);
            const double g1 = -m2 / (m1 * m1) - 1.0;  // dQ/d<n>
            const double g2 = 1.0 / m1;               // dQ/d<n^2>
            const double var_q =
                (g1 * g1 * var_x + 2.0 * g1 * g2 * cov_xy + g2 * g2 * var_y) / m;
            st.se_q[s] = std::sqrt(std::max(var_q, 0.0));
        } else {
            st.q[s] = std::numeric_limits<double>::quiet_NaN();
            st.se_q[s] = std::numeric_limits<double>::quiet_NaN();
        }
    }

    const std::size_t n_rho = results[0].snapshot_times.size();
    for (std::size_t r = 0; r < n_rho; ++r) {
        DensityMatrix rho;
        rho.m = outer_reduce(results, r, 0, n_traj) / m;
        rho.time = results[0].snapshot_times[r];
        out.rho.push_back(std::move(rho));
    }
    return out;
}

} // namespace kerrmod
