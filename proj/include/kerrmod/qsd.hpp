#pragma once

#include "kerrmod/fock.hpp"
#include "kerrmod/lindblad.hpp"
#include "kerrmod/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kerrmod {

enum class InitialState { vacuum, coherent, fock };

/// Integration scheme for the stochastic state diffusion step.
///
/// euler     - textbook explicit Euler-Maruyama on the full generator.
/// exp_diag  - Euler-Maruyama with an integrating factor on the diagonal
///             part (number-conserving Hamiltonian terms and the diagonal
///             damping), which removes the stiffness of chi(t) n^2 at
///             large occupation while leaving the stochastic convergence
///             order unchanged. Preferred for production runs.
enum class StepScheme { euler, exp_diag };

struct TrajectoryConfig {
    double dt = 1e-3;                  // step, gamma-units; (0, 1e-2]
    double t_end = 0.0;
    std::vector<double> sample_times;  // snapped to the step grid
    std::uint64_t seed = 0;
    InitialState initial_state = InitialState::vacuum;
    cplx initial_alpha{0.0, 0.0};      // for InitialState::coherent
    std::size_t initial_fock_n = 0;    // for InitialState::fock
    std::size_t dim = 2;
    StepScheme scheme = StepScheme::exp_diag;
    double tail_threshold = 1e-6;      // truncation monitor, top 5 bins

    void validate() const;
};

/// Complex Wiener increments for the two collapse channels over one step.
struct NoisePair {
    cplx dxi1{0.0, 0.0};
    cplx dxi2{0.0, 0.0};
};

/// Per-trajectory record: number moments at the sample times, plus
/// optional state snapshots.
struct TrajectoryResult {
    std::vector<double> times;
    std::vector<double> mean_n, mean_n2;
    std::vector<double> snapshot_times;
    std::vector<FockVector> snapshots;
};

/// Ensemble statistics. q entries are NaN where the mean occupation is
/// not positive (missing sample, not zero). Standard errors are over the
/// trajectory-to-trajectory scatter; se_q is a first-order propagation
/// through the Q formula.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean_n, mean_n2, q, se_n, se_q;
    std::size_t n_traj = 0;
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<DensityMatrix> rho;  // at the requested density sample times
};

///// Mandel parameter from ensemble-level moments:
/// Q = (<n^2> - <n>^2 - <n>) / <n>. Throws UndefinedQError if <n> <= 0.
double mandel_q(double mean_n, double mean_n2);

/// One stochastic step from state s at time t. Returns the renormalized
/// successor state; throws StepFailureError if the pre-normalization norm
/// collapses below 1e-8.
FockVector qsd_step(const FockVector& s, double t, double dt, const NoisePair& noise,
                    const OscillatorParams& p, StepScheme scheme = StepScheme::exp_diag);

/// Integrates a single trajectory. The noise stream is a pure function of
/// cfg.seed, so repeated calls are bit-identical. If want_state is set the
/// state vector is recorded at every sample time.
TrajectoryResult run_trajectory(const TrajectoryConfig& cfg, const OscillatorParams& p,
                                bool want_state = false);

/// Runs n_traj trajectories with seeds cfg.seed + k on n_workers threads
/// and reduces them in fixed trajectory order (pairwise summation), so the
/// output is bit-identical for any worker count. Density matrices are
/// accumulated at rho_times as averaged projectors. The progress callback,
/// if set, receives the completed-trajectory count (serialized, so it may
/// write to a stream directly); it must not affect the results.
EnsembleResult run_ensemble(const TrajectoryConfig& cfg, const OscillatorParams& p,
                            std::size_t n_traj, std::span<const double> rho_times = {},
                            unsigned n_workers = 1,
                            const std::function<void(std::size_t)>& progress = {});

/// Fixed-order pairwise (cascade) summation; the reduction primitive that
/// keeps ensemble statistics independent of scheduling.
double pairwise_sum(std::span<const double> v);

} // namespace kerrmod
