#pragma once

#include "kerrmod/model.hpp"
#include "kerrmod/qsd.hpp"
#include "kerrmod/wigner.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kerrmod {

enum class Command { ensemble, wigner, analytic, poincare, sweep, oracle_check };

const char* command_name(Command c);
/// Throws ConfigError for anything outside the documented command set.
Command command_from_name(const std::string& name);

enum class WignerSource { ensemble, analytic };

struct WignerRunSpec {
    WignerSource source = WignerSource::ensemble;
    double half_width = 0.0;  // 0 = auto from the occupation of rho
    std::size_t nx = 201, ny = 201;
    bool explicit_window = false;
    GridSpec window;
};

struct AnalyticRunSpec {
    double alpha0 = 2.0;
    std::size_t dim = 0;  // 0 = auto from alpha0
    double t = -1.0;      // < 0 = evaluate at the superposition time
};

struct PoincareRunSpec {
    std::size_t n_points = 2000;
    double t0 = 0.0;
    double transient = 30.0;
    cplx alpha0{0.0, 0.0};
};

struct SweepRunSpec {
    double f_min = 0.0;
    double f_max = 0.0;
    std::size_t n = 48;
};

/// The flat dotted-key map a config document reduces to. Ordered, so the
/// manifest serialization is canonical.
using FlatConfig = std::map<std::string, std::string>;

struct RunSpec {
    Command command = Command::ensemble;
    OscillatorParams params;
    TrajectoryConfig trajectory;
    std::size_t n_traj = 0;
    std::vector<double> rho_times;
    WignerRunSpec wigner;
    AnalyticRunSpec analytic;
    PoincareRunSpec poincare;
    SweepRunSpec sweep;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    FlatConfig resolved;  // exactly the keys the spec was built from
};

/// Parses `key = value` lines (# starts a comment, blank lines skipped).
/// Duplicate keys are ConfigErrors; no type checking happens here.
FlatConfig parse_flat_config(const std::string& text);

/// Validates every key (unknown keys are errors naming the key), parses
/// values, applies defaults, and cross-checks the per-command required
/// keys. The returned spec carries the input map in `resolved`.
RunSpec build_run_spec(const FlatConfig& cfg);

RunSpec parse_config(const std::string& text);

/// Reads a config from disk. Content starting with '{' is treated as a
/// manifest (JSON) and its "config" object is used, so a run can be
/// reproduced from the manifest it wrote.
RunSpec load_config_file(const std::string& path);

} // namespace kerrmod
