#include "kerrmod/config.hpp"
#include "kerrmod/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kerrmod {

namespace {

std::string trim(std::string_view sv) {
    std::size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1])))
        --e;
    return std::string(sv.substr(b, e - b));
}

bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.')
        return false;
    for (char c : key)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
            return false;
    return true;
}

double parse_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ConfigError("key " + key + ": expected a number, got \"" + value + "\"");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ConfigError("key " + key + ": expected a nonnegative integer, got \"" + value +
                          "\"");
    return v;
}

/// Reads every documented key (so leftovers can be flagged as unknown) and
/// hands typed values to the spec builder.
class Reader {
public:
    explicit Reader(const FlatConfig& cfg) : cfg_(cfg) {}

    bool has(const std::string& key) {
        seen_.insert(key);
        return cfg_.find(key) != cfg_.end();
    }

    double number(const std::string& key, double def) {
        return has(key) ? parse_number(key, cfg_.at(key)) : def;
    }

    double require_number(const std::string& key) {
        if (!has(key))
            throw ConfigError("missing required key " + key);
        return parse_number(key, cfg_.at(key));
    }

    std::uint64_t uint(const std::string& key, std::uint64_t def) {
        return has(key) ? parse_uint(key, cfg_.at(key)) : def;
    }

    std::uint64_t require_uint(const std::string& key) {
        if (!has(key))
            throw ConfigError("missing required key " + key);
        return parse_uint(key, cfg_.at(key));
    }

    std::string word(const std::string& key, const std::string& def) {
        return has(key) ? cfg_.at(key) : def;
    }

    std::string require_word(const std::string& key) {
        if (!has(key))
            throw ConfigError("missing required key " + key);
        return cfg_.at(key);
    }

    std::vector<double> number_list(const std::string& key) {
        std::vector<double> out;
        if (!has(key))
            return out;
        const std::string& value = cfg_.at(key);
        std::size_t pos = 0;
        while (pos <= value.size()) {
            const std::size_t comma = std::min(value.find(',', pos), value.size());
            const std::string item = trim(std::string_view(value).substr(pos, comma - pos));
            if (item.empty())
                throw ConfigError("key " + key + ": empty list entry");
            out.push_back(parse_number(key, item));
            pos = comma + 1;
        }
        return out;
    }

    /// Every config key must have been consumed by now.
    void finish() const {
        for (const auto& [key, value] : cfg_)
            if (seen_.find(key) == seen_.end())
                throw ConfigError("unknown key " + key);
    }

private:
    const FlatConfig& cfg_;
    std::set<std::string> seen_;
};

} // namespace

const char* command_name(Command c) {
    switch (c) {
    case Command::ensemble: return "ensemble";
    case Command::wigner: return "wigner";
    case Command::analytic: return "analytic";
    case Command::poincare: return "poincare";
    case Command::sweep: return "sweep";
    case Command::oracle_check: return "oracle-check";
    }
    return "?";
}

Command command_from_name(const std::string& name) {
    if (name == "ensemble") return Command::ensemble;
    if (name == "wigner") return Command::wigner;
    if (name == "analytic") return Command::analytic;
    if (name == "poincare") return Command::poincare;
    if (name == "sweep") return Command::sweep;
    if (name == "oracle-check") return Command::oracle_check;
    throw ConfigError("key run.command: unknown command \"" + name + "\"");
}

FlatConfig parse_flat_config(const std::string& text) {
    FlatConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError("line " + std::to_string(lineno) + ": malformed key \"" + key +
                              "\"");
        if (value.empty())
            throw ConfigError("key " + key + ": empty value");
        if (!cfg.emplace(key, value).second)
            throw ConfigError("duplicate key " + key);
    }
    return cfg;
}

RunSpec build_run_spec(const FlatConfig& cfg) {
    Reader r(cfg);
    RunSpec spec;
    spec.resolved = cfg;

    spec.command = command_from_name(r.require_word("run.command"));
    spec.seed = r.uint("run.seed", 1);
    spec.out_dir = r.word("run.out_dir", "out");
    spec.n_traj = static_cast<std::size_t>(r.uint("run.n_traj", 0));

    OscillatorParams& p = spec.params;
    p.delta = r.number("model.delta", 0.0);
    p.chi0 = r.number("model.chi0", 0.0);
    p.chi1 = r.number("model.chi1", 0.0);
    p.mod_freq_chi = r.number("model.mod_freq_chi", 0.0);
    p.phase_chi = r.number("model.phase_chi", 0.0);
    p.f0 = r.number("model.f0", 0.0);
    p.f1 = r.number("model.f1", 0.0);
    p.mod_freq_f = r.number("model.mod_freq_f", 0.0);
    p.gamma = r.number("model.gamma", 1.0);
    p.nbar = r.number("model.nbar", 0.0);
    p.validate();

    TrajectoryConfig& tr = spec.trajectory;
    tr.dt = r.number("trajectory.dt", 1e-3);
    const bool have_t_end = r.has("trajectory.t_end");
    if (have_t_end)
        tr.t_end = r.require_number("trajectory.t_end");
    tr.dim = static_cast<std::size_t>(r.uint("trajectory.dim", 2));
    tr.tail_threshold = r.number("trajectory.tail_threshold", 1e-6);
    tr.seed = spec.seed;

    const std::string scheme = r.word("trajectory.scheme", "exp_diag");
    if (scheme == "euler")
        tr.scheme = StepScheme::euler;
    else if (scheme == "exp_diag")
        tr.scheme = StepScheme::exp_diag;
    else
        throw ConfigError("key trajectory.scheme: expected euler or exp_diag, got \"" + scheme +
                          "\"");

    const std::string init = r.word("trajectory.initial_state", "vacuum");
    if (init == "vacuum")
        tr.initial_state = InitialState::vacuum;
    else if (init == "coherent")
        tr.initial_state = InitialState::coherent;
    else if (init == "fock")
        tr.initial_state = InitialState::fock;
    else
        throw ConfigError("key trajectory.initial_state: expected vacuum, coherent or fock, "
                          "got \"" + init + "\"");
    tr.initial_alpha = cplx(r.number("trajectory.alpha0_re", 0.0),
                            r.number("trajectory.alpha0_im", 0.0));
    tr.initial_fock_n = static_cast<std::size_t>(r.uint("trajectory.fock_n", 0));

    const double sample_dt = r.number("trajectory.sample_dt", have_t_end ? tr.t_end / 200.0 : 0.0);
    const double sample_start = r.number("trajectory.sample_start", 0.0);
    if (have_t_end) {
        if (!(sample_dt > 0.0))
            throw ConfigError("key trajectory.sample_dt: must be > 0");
        if (sample_dt < tr.dt)
            throw ConfigError("key trajectory.sample_dt: must be >= trajectory.dt");
        if (!(sample_start >= 0.0) || sample_start > tr.t_end)
            throw ConfigError("key trajectory.sample_start: must lie in [0, trajectory.t_end]");
        if ((tr.t_end - sample_start) / sample_dt > 20000.0)
            throw ConfigError("key trajectory.sample_dt: more than 20000 samples requested");
        tr.sample_times.clear();
        for (std::size_t k = 0;; ++k) {
            const double t = sample_start + sample_dt * static_cast<double>(k);
            if (t >= tr.t_end * (1.0 - 1e-12))
                break;
            tr.sample_times.push_back(t);
        }
        tr.sample_times.push_back(tr.t_end);
    }

    spec.rho_times = r.number_list("ensemble.rho_times");
    for (std::size_t i = 1; i < spec.rho_times.size(); ++i)
        if (!(spec.rho_times[i] > spec.rho_times[i - 1]))
            throw ConfigError("key ensemble.rho_times: entries must be ascending");

    WignerRunSpec& w = spec.wigner;
    const std::string source = r.word("wigner.source", "ensemble");
    if (source == "ensemble")
        w.source = WignerSource::ensemble;
    else if (source == "analytic")
        w.source = WignerSource::analytic;
    else
        throw ConfigError("key wigner.source: expected ensemble or analytic, got \"" + source +
                          "\"");
    w.half_width = r.number("wigner.half_width", 0.0);
    w.nx = static_cast<std::size_t>(r.uint("wigner.nx", 201));
    w.ny = static_cast<std::size_t>(r.uint("wigner.ny", 201));
    const bool wx0 = r.has("wigner.x_min"), wx1 = r.has("wigner.x_max");
    const bool wy0 = r.has("wigner.y_min"), wy1 = r.has("wigner.y_max");
    if (wx0 || wx1 || wy0 || wy1) {
        if (!(wx0 && wx1 && wy0 && wy1))
            throw ConfigError("explicit wigner window requires all of wigner.x_min, "
                              "wigner.x_max, wigner.y_min, wigner.y_max");
        w.explicit_window = true;
        w.window.x_min = r.require_number("wigner.x_min");
        w.window.x_max = r.require_number("wigner.x_max");
        w.window.y_min = r.require_number("wigner.y_min");
        w.window.y_max = r.require_number("wigner.y_max");
        w.window.nx = w.nx;
        w.window.ny = w.ny;
        w.window.validate();
    }

    AnalyticRunSpec& an = spec.analytic;
    an.alpha0 = r.number("analytic.alpha0", 2.0);
    an.dim = static_cast<std::size_t>(r.uint("analytic.dim", 0));
    an.t = r.number("analytic.t", -1.0);

    PoincareRunSpec& po = spec.poincare;
    po.n_points = static_cast<std::size_t>(r.uint("poincare.n_points", 2000));
    po.t0 = r.number("poincare.t0", 0.0);
    po.transient = r.number("poincare.transient", 30.0);
    po.alpha0 = cplx(r.number("poincare.alpha0_re", 0.0), r.number("poincare.alpha0_im", 0.0));

    SweepRunSpec& sw = spec.sweep;
    const bool have_sweep = r.has("sweep.f_min") || r.has("sweep.f_max");
    if (have_sweep) {
        sw.f_min = r.require_number("sweep.f_min");
        sw.f_max = r.require_number("sweep.f_max");
    }
    sw.n = static_cast<std::size_t>(r.uint("sweep.n", 48));

    r.finish();

    // Per-command requirements.
    const bool needs_ensemble = spec.command == Command::ensemble ||
                                spec.command == Command::oracle_check ||
                                (spec.command == Command::wigner &&
                                 w.source == WignerSource::ensemble);
    if (needs_ensemble) {
        if (!have_t_end)
            throw ConfigError("missing required key trajectory.t_end");
        if (!r.has("trajectory.dim"))
            throw ConfigError("missing required key trajectory.dim");
        if (spec.n_traj < 1)
            throw ConfigError("missing required key run.n_traj");
        spec.trajectory.validate();
    }
    if (spec.command == Command::wigner && w.source == WignerSource::ensemble &&
        spec.rho_times.empty())
        throw ConfigError("missing required key ensemble.rho_times");
    if (spec.command == Command::sweep) {
        if (!have_sweep)
            throw ConfigError("missing required key sweep.f_min");
        if (!(sw.f_max >= sw.f_min))
            throw ConfigError("key sweep.f_max: must be >= sweep.f_min");
        if (sw.n < 2)
            throw ConfigError("key sweep.n: must be >= 2");
    }
    if (spec.command == Command::analytic ||
        (spec.command == Command::wigner && w.source == WignerSource::analytic)) {
        if (!(an.alpha0 > 0.0) || !std::isfinite(an.alpha0))
            throw ConfigError("key analytic.alpha0: must be finite and > 0");
    }
    return spec;
}

RunSpec parse_config(const std::string& text) {
    return build_run_spec(parse_flat_config(text));
}

RunSpec load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("manifest " + path + ": " + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object())
            throw ConfigError("manifest " + path + ": missing \"config\" object");
        FlatConfig cfg;
        for (const auto& [key, value] : j["config"].items()) {
            if (!value.is_string())
                throw ConfigError("manifest " + path + ": config values must be strings (key " +
                                  key + ")");
            cfg.emplace(key, value.get<std::string>());
        }
        return build_run_spec(cfg);
    }
    return parse_config(text);
}

} // namespace kerrmod
