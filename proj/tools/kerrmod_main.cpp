#include "kerrmod/config.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/io.hpp"
#include "kerrmod/run.hpp"
#include "kerrmod/version.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

namespace {

struct CliArgs {
    std::string config_path;
    unsigned workers = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool quiet = false;
};

const char* kCommandHelp[][2] = {
    {"ensemble", "stochastic trajectory ensemble: stats.csv and sampled density matrices"},
    {"wigner", "phase-space distribution and negativity of sampled density matrices"},
    {"analytic", "closed-form lossless benchmark state, its Wigner function and phase"},
    {"poincare", "stroboscopic mean-field section: poincare.csv"},
    {"sweep", "stationary drive sweep with both branch directions: sweep.csv"},
    {"oracle-check", "trajectory-vs-master-equation consistency report"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven, damped, modulated Kerr oscillator toolkit"};
    app.set_version_flag("--version", kerrmod::kVersion);
    app.require_subcommand(1);

    CliArgs args;
    for (const auto& [name, help] : kCommandHelp) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", args.config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--workers", args.workers, "worker thread count (0 = all cores)")
            ->envname("KERRMOD_WORKERS");
        sub->add_option("--seed", args.seed, "override run.seed");
        sub->add_option("--out", args.out_dir, "override run.out_dir");
        sub->add_flag("--quiet", args.quiet, "suppress progress output");
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    std::string out_dir_hint;
    try {
        kerrmod::RunSpec spec = kerrmod::load_config_file(args.config_path);
        if (sub->count("--seed") > 0 || sub->count("--out") > 0) {
            kerrmod::FlatConfig cfg = spec.resolved;
            if (sub->count("--seed") > 0)
                cfg["run.seed"] = std::to_string(args.seed);
            if (sub->count("--out") > 0)
                cfg["run.out_dir"] = args.out_dir;
            spec = kerrmod::build_run_spec(cfg);
        }
        if (kerrmod::command_name(spec.command) != sub->get_name())
            throw kerrmod::ConfigError("config declares run.command = " +
                                       std::string(kerrmod::command_name(spec.command)) +
                                       " but the " + sub->get_name() +
                                       " command was invoked");
        out_dir_hint = spec.out_dir;

        kerrmod::RunOptions opt;
        opt.workers = args.workers;
        opt.quiet = args.quiet;
        return kerrmod::run_spec(spec, opt);
    } catch (const kerrmod::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::printf("{\"error\":\"%s\"}\n", e.kind());
        if (!out_dir_hint.empty() && std::filesystem::exists(out_dir_hint))
            kerrmod::write_error_json(out_dir_hint + "/error.json", e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::printf("{\"error\":\"internal\"}\n");
        if (!out_dir_hint.empty() && std::filesystem::exists(out_dir_hint))
            kerrmod::write_error_json(out_dir_hint + "/error.json", "internal", e.what());
        return 2;
    }
}
