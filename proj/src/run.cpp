#include "kerrmod/run.hpp"
#include "kerrmod/analytic.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/io.hpp"
#include "kerrmod/lindblad.hpp"
#include "kerrmod/semiclassical.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>

namespace fs = std::filesystem;

namespace kerrmod {

namespace {

std::string out_path(const RunSpec& spec, const std::string& name) {
    return (fs::path(spec.out_dir) / name).string();
}

FockVector initial_state_vector(const TrajectoryConfig& tr) {
    switch (tr.initial_state) {
    case InitialState::vacuum: return vacuum_state(tr.dim);
    case InitialState::coherent: return coherent_state(tr.dim, tr.initial_alpha);
    case InitialState::fock: return fock_state(tr.dim, tr.initial_fock_n);
    }
    throw InvalidParameterError("run: unknown initial state");
}

std::function<void(std::size_t)> make_progress(std::size_t n_traj, bool quiet) {
    if (quiet)
        return {};
    const std::size_t step = std::max<std::size_t>(1, n_traj / 20);
    return [n_traj, step](std::size_t done) {
        if (done % step == 0 || done == n_traj) {
            std::fprintf(stderr, "trajectories: %zu/%zu\n", done, n_traj);
            std::fflush(stderr);
        }
    };
}

EnsembleResult run_ensemble_for(const RunSpec& spec, const RunOptions& opt) {
    TrajectoryConfig tr = spec.trajectory;
    tr.seed = spec.seed;
    return run_ensemble(tr, spec.params, spec.n_traj, spec.rho_times, opt.workers,
                        make_progress(spec.n_traj, opt.quiet));
}

std::string unique_tag(std::set<std::string>& used, double t) {
    const std::string tag = time_tag(t);
    std::string cand = tag;
    int k = 1;
    while (!used.insert(cand).second)
        cand = tag + "_" + std::to_string(k++);
    return cand;
}

void write_ensemble_outputs(const RunSpec& spec, const EnsembleResult& res) {
    write_stats_csv(out_path(spec, "stats.csv"), res.stats);
    std::set<std::string> used;
    for (const DensityMatrix& rho : res.rho)
        write_rho_ndjson(out_path(spec, "rho_t" + unique_tag(used, rho.time) + ".ndjson"),
                         rho.m);
}

void print_stats_summary(const EnsembleStats& stats) {
    double q_min = std::numeric_limits<double>::quiet_NaN();
    double q_min_t = 0.0;
    double n_max = 0.0, n_max_t = 0.0;
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
        if (stats.mean_n[k] > n_max) {
            n_max = stats.mean_n[k];
            n_max_t = stats.times[k];
        }
        if (!std::isnan(stats.q[k]) && (std::isnan(q_min) || stats.q[k] < q_min)) {
            q_min = stats.q[k];
            q_min_t = stats.times[k];
        }
    }
    std::printf("ensemble: %zu trajectories, %zu samples; <n> peak %.6g at t = %.6g; "
                "min Q %.6g at t = %.6g\n",
                stats.n_traj, stats.times.size(), n_max, n_max_t, q_min, q_min_t);
}

GridSpec grid_for(const WignerRunSpec& w, const Eigen::MatrixXcd& rho) {
    GridSpec g;
    if (w.explicit_window)
        return w.window;
    const double hw = w.half_width > 0.0 ? w.half_width : suggested_half_width(rho);
    g.x_min = -hw;
    g.x_max = hw;
    g.y_min = -hw;
    g.y_max = hw;
    g.nx = w.nx;
    g.ny = w.ny;
    return g;
}

void wigner_outputs(const RunSpec& spec, const RunOptions& opt,
                    const std::vector<DensityMatrix>& rhos) {
    std::vector<std::pair<double, Negativity>> negs;
    std::set<std::string> used;
    for (const DensityMatrix& rho : rhos) {
        const GridSpec g = grid_for(spec.wigner, rho.m);
        const WignerGrid wg = wigner_from_rho(rho.m, g, opt.workers);
        const std::string tag = unique_tag(used, rho.time);
        write_wigner_csv(out_path(spec, "wigner_t" + tag + ".csv"), wg);
        write_wigner_matrix(out_path(spec, "wigner_t" + tag + ".dat"), wg);

        const std::vector<double> pn = photon_distribution(rho.m);
        std::vector<double> ns(pn.size());
        for (std::size_t n = 0; n < ns.size(); ++n)
            ns[n] = static_cast<double>(n);
        write_series_csv(out_path(spec, "pn_t" + tag + ".csv"), "n,p", ns, pn);

        const QuadratureDistribution qd = quadrature_distribution(wg, QuadratureAxis::x);
        write_series_csv(out_path(spec, "quad_x_t" + tag + ".csv"), "x,p", qd.coords, qd.values);

        const Negativity neg = negativity(wg);
        negs.emplace_back(rho.time, neg);
        std::printf("wigner t = %.6g: min W = %.6g, negative volume = %.6g, integral = %.6g\n",
                    rho.time, neg.min_value, neg.neg_volume, wg.integral());
    }
    write_negativity_json(out_path(spec, "negativity.json"), negs);
}

struct AnalyticState {
    UnitaryKerrSpec u;
    double t = 0.0;
    DensityMatrix rho;
};

AnalyticState make_analytic_state(const RunSpec& spec) {
    AnalyticState a;
    a.u.alpha0 = spec.analytic.alpha0;
    a.u.chi0 = spec.params.chi0;
    a.u.chi1 = spec.params.chi1;
    a.u.delta_mod = spec.params.mod_freq_chi;
    a.u.phase_chi = spec.params.phase_chi;
    a.u.dim = spec.analytic.dim != 0
                  ? spec.analytic.dim
                  : suggested_dim(a.u.alpha0 * a.u.alpha0) + 8;
    a.u.validate();
    a.t = spec.analytic.t >= 0.0 ? spec.analytic.t : superposition_time(a.u);
    a.rho.time = a.t;
    a.rho.m.resize(static_cast<Eigen::Index>(a.u.dim), static_cast<Eigen::Index>(a.u.dim));
    for (std::size_t n = 0; n < a.u.dim; ++n)
        for (std::size_t m = 0; m < a.u.dim; ++m)
            a.rho.m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                unitary_density(a.u, a.t, n, m);
    return a;
}

int cmd_ensemble(const RunSpec& spec, const RunOptions& opt) {
    const EnsembleResult res = run_ensemble_for(spec, opt);
    write_ensemble_outputs(spec, res);
    print_stats_summary(res.stats);
    return 0;
}

int cmd_wigner(const RunSpec& spec, const RunOptions& opt) {
    if (spec.wigner.source == WignerSource::ensemble) {
        const EnsembleResult res = run_ensemble_for(spec, opt);
        write_ensemble_outputs(spec, res);
        print_stats_summary(res.stats);
        wigner_outputs(spec, opt, res.rho);
    } else {
        const AnalyticState a = make_analytic_state(spec);
        std::set<std::string> used;
        write_rho_ndjson(out_path(spec, "rho_t" + unique_tag(used, a.t) + ".ndjson"), a.rho.m);
        wigner_outputs(spec, opt, {a.rho});
    }
    return 0;
}

int cmd_analytic(const RunSpec& spec, const RunOptions& opt) {
    const AnalyticState a = make_analytic_state(spec);
    std::set<std::string> used;
    write_rho_ndjson(out_path(spec, "rho_t" + unique_tag(used, a.t) + ".ndjson"), a.rho.m);
    wigner_outputs(spec, opt, {a.rho});

    nlohmann::ordered_json j;
    j["alpha0"] = a.u.alpha0;
    j["dim"] = a.u.dim;
    j["t"] = a.t;
    j["phase"] = phase_accum(a.u, a.t);
    std::ofstream out(out_path(spec, "analytic.json"), std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open output file " + out_path(spec, "analytic.json"));
    out << j.dump() << '\n';
    std::printf("analytic: t = %.12g, accumulated phase = %.12g\n", a.t, phase_accum(a.u, a.t));
    return 0;
}

int cmd_poincare(const RunSpec& spec) {
    const PoincareSection sec =
        poincare_section(spec.poincare.alpha0, spec.params, spec.poincare.n_points,
                         spec.poincare.t0, spec.poincare.transient);
    write_poincare_csv(out_path(spec, "poincare.csv"), sec);
    std::printf("poincare: %zu points, strobe period %.6g, bounding-box area %.6g\n",
                sec.points.size(), sec.strobe_period, bounding_box_area(sec));
    return 0;
}

int cmd_sweep(const RunSpec& spec) {
    std::vector<double> fv(spec.sweep.n);
    for (std::size_t k = 0; k < spec.sweep.n; ++k)
        fv[k] = spec.sweep.f_min + (spec.sweep.f_max - spec.sweep.f_min) *
                                       static_cast<double>(k) /
                                       static_cast<double>(spec.sweep.n - 1);
    const auto up = hysteresis_sweep(spec.params, fv, SweepDirection::up);
    const auto down = hysteresis_sweep(spec.params, fv, SweepDirection::down);
    write_sweep_csv(out_path(spec, "sweep.csv"), up, down);

    // Branch separation summary (down is in descending-f order).
    double gap = 0.0, gap_f = 0.0;
    for (std::size_t k = 0; k < up.size(); ++k) {
        const double d = std::abs(up[k].intensity - down[down.size() - 1 - k].intensity);
        if (d > gap) {
            gap = d;
            gap_f = up[k].f;
        }
    }
    std::printf("sweep: %zu drive values, largest branch separation %.6g at f = %.6g\n",
                up.size(), gap, gap_f);
    return 0;
}

int cmd_oracle_check(const RunSpec& spec, const RunOptions& opt) {
    const EnsembleResult res = run_ensemble_for(spec, opt);
    const TrajectoryConfig& tr = spec.trajectory;
    const DensityMatrix rho0 = density_from_state(initial_state_vector(tr));
    const double me_dt = std::min(tr.dt, 1e-3);
    const MasterSolution me =
        integrate_master(spec.params, tr.dim, rho0, tr.sample_times, me_dt);

    double worst_n = 0.0, at_n = 0.0, worst_q = 0.0, at_q = 0.0;
    for (std::size_t k = 0; k < res.stats.times.size(); ++k) {
        const double dev_n = std::abs(res.stats.mean_n[k] - me.mean_n[k]);
        const double r_n = dev_n == 0.0 ? 0.0 : dev_n / res.stats.se_n[k];
        if (r_n > worst_n) {
            worst_n = r_n;
            at_n = res.stats.times[k];
        }
        if (std::isnan(res.stats.q[k]) || me.mean_n[k] <= 1e-12)
            continue;
        const double q_me =
            (me.mean_n2[k] - me.mean_n[k] * me.mean_n[k] - me.mean_n[k]) / me.mean_n[k];
        const double dev_q = std::abs(res.stats.q[k] - q_me);
        const double r_q = dev_q == 0.0 ? 0.0 : dev_q / res.stats.se_q[k];
        if (r_q > worst_q) {
            worst_q = r_q;
            at_q = res.stats.times[k];
        }
    }
    const bool pass = worst_n <= 3.0 && worst_q <= 3.0;

    nlohmann::ordered_json j;
    j["pass"] = pass;
    j["max_dev_n_over_se"] = worst_n;
    j["at_t_n"] = at_n;
    j["max_dev_q_over_se"] = worst_q;
    j["at_t_q"] = at_q;
    j["n_traj"] = res.stats.n_traj;
    std::ofstream out(out_path(spec, "oracle.json"), std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open output file " + out_path(spec, "oracle.json"));
    out << j.dump() << '\n';

    std::printf("oracle check: %s (max |dev|/se: n %.3g at t = %.3g, Q %.3g at t = %.3g)\n",
                pass ? "PASS" : "FAIL", worst_n, at_n, worst_q, at_q);
    return pass ? 0 : 3;
}

} // namespace

int run_spec(const RunSpec& spec, const RunOptions& opt) {
    fs::create_directories(spec.out_dir);
    write_manifest(out_path(spec, "manifest.json"), spec);
    switch (spec.command) {
    case Command::ensemble: return cmd_ensemble(spec, opt);
    case Command::wigner: return cmd_wigner(spec, opt);
    case Command::analytic: return cmd_analytic(spec, opt);
    case Command::poincare: return cmd_poincare(spec);
    case Command::sweep: return cmd_sweep(spec);
    case Command::oracle_check: return cmd_oracle_check(spec, opt);
    }
    throw InvalidParameterError("run: unknown command");
}

} // namespace kerrmod
