#include "doctest.h"

#include "kerrmod/config.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/io.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

using namespace kerrmod;

namespace {

std::string config_path(const std::string& name) {
    return std::string(KERRMOD_CONFIG_DIR) + "/" + name;
}

template <class E, class F>
std::string message_of(F&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

const std::string minimal_ensemble = "run.command = ensemble\n"
                                     "run.n_traj = 10\n"
                                     "trajectory.t_end = 1.0\n"
                                     "trajectory.dim = 16\n"
                                     "model.f0 = 1.0\n";

std::string with_line(const std::string& extra) {
    return minimal_ensemble + extra + "\n";
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("tmp_cfg_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_SUITE("config") {

TEST_CASE("flat parsing handles comments, whitespace, and malformed lines") {
    const FlatConfig cfg = parse_flat_config("# header comment\n"
                                             "\n"
                                             "  model.delta =  -15  # inline note\n"
                                             "model.chi0=2\n"
                                             "\t run.out_dir = out/fig3 \n");
    REQUIRE(cfg.size() == 3);
    CHECK(cfg.at("model.delta") == "-15");
    CHECK(cfg.at("model.chi0") == "2");
    CHECK(cfg.at("run.out_dir") == "out/fig3");

    CHECK(message_of<ConfigError>([] { parse_flat_config("a = 1\nno equals sign\n"); }) ==
          "line 2: expected key = value");
    CHECK(message_of<ConfigError>([] { parse_flat_config("Model.delta = 1\n"); })
              .find("malformed key") != std::string::npos);
    CHECK(message_of<ConfigError>([] { parse_flat_config(".x = 1\n"); })
              .find("malformed key") != std::string::npos);
    CHECK(message_of<ConfigError>([] { parse_flat_config("a b = 1\n"); })
              .find("malformed key") != std::string::npos);
    CHECK(message_of<ConfigError>([] { parse_flat_config("model.delta = # gone\n"); }) ==
          "key model.delta: empty value");
    CHECK(message_of<ConfigError>([] {
              parse_flat_config("model.delta = 1\nmodel.delta = 2\n");
          }) == "duplicate key model.delta");
}

TEST_CASE("run specs resolve defaults") {
    const RunSpec spec = parse_config(minimal_ensemble);
    CHECK(spec.command == Command::ensemble);
    CHECK(spec.seed == 1);
    CHECK(spec.out_dir == "out");
    CHECK(spec.n_traj == 10);
    CHECK(spec.params.gamma == 1.0);
    CHECK(spec.params.f0 == 1.0);
    CHECK(spec.trajectory.dt == 1e-3);
    CHECK(spec.trajectory.dim == 16);
    CHECK(spec.trajectory.seed == spec.seed);
    CHECK(spec.trajectory.scheme == StepScheme::exp_diag);
    CHECK(spec.trajectory.initial_state == InitialState::vacuum);
    REQUIRE(spec.trajectory.sample_times.size() == 201);
    CHECK(spec.trajectory.sample_times.front() == 0.0);
    CHECK(spec.trajectory.sample_times.back() == 1.0);
    CHECK(spec.wigner.nx == 201);
    CHECK(spec.wigner.source == WignerSource::ensemble);
    CHECK_FALSE(spec.wigner.explicit_window);
    CHECK(spec.sweep.n == 48);
    CHECK(spec.resolved == parse_flat_config(minimal_ensemble));

    const RunSpec seeded = parse_config(with_line("run.seed = 777"));
    CHECK(seeded.seed == 777);
    CHECK(seeded.trajectory.seed == 777);
}

TEST_CASE("sample grid construction from sample_dt") {
    const RunSpec spec = parse_config("run.command = ensemble\n"
                                      "run.n_traj = 1\n"
                                      "trajectory.t_end = 2.0\n"
                                      "trajectory.dim = 4\n"
                                      "trajectory.sample_dt = 0.5\n");
    const std::vector<double> expect{0.0, 0.5, 1.0, 1.5, 2.0};
    CHECK(spec.trajectory.sample_times == expect);

    const RunSpec coarse = parse_config("run.command = ensemble\n"
                                        "run.n_traj = 1\n"
                                        "trajectory.t_end = 2.0\n"
                                        "trajectory.dim = 4\n"
                                        "trajectory.sample_dt = 2.0\n");
    const std::vector<double> ends{0.0, 2.0};
    CHECK(coarse.trajectory.sample_times == ends);

    const RunSpec offset = parse_config("run.command = ensemble\n"
                                        "run.n_traj = 1\n"
                                        "trajectory.t_end = 2.0\n"
                                        "trajectory.dim = 4\n"
                                        "trajectory.sample_dt = 0.5\n"
                                        "trajectory.sample_start = 0.75\n");
    const std::vector<double> shifted{0.75, 1.25, 1.75, 2.0};
    CHECK(offset.trajectory.sample_times == shifted);

    const RunSpec at_end = parse_config("run.command = ensemble\n"
                                        "run.n_traj = 1\n"
                                        "trajectory.t_end = 2.0\n"
                                        "trajectory.dim = 4\n"
                                        "trajectory.sample_start = 2.0\n");
    const std::vector<double> last{2.0};
    CHECK(at_end.trajectory.sample_times == last);
}

TEST_CASE("config errors name the offending key") {
    auto build = [](const std::string& text) { return [text] { parse_config(text); }; };

    CHECK(message_of<ConfigError>(build(with_line("model.chii0 = 1"))) ==
          "unknown key model.chii0");
    CHECK_THROWS_AS(parse_config(with_line("model.gamma = -1")), InvalidParameterError);
    CHECK(message_of<ConfigError>(build(with_line("model.delta = abc"))) ==
          "key model.delta: expected a number, got \"abc\"");
    CHECK(message_of<ConfigError>(build(with_line("run.workers = 2"))) ==
          "unknown key run.workers");
    CHECK(message_of<ConfigError>(build("run.command = frobnicate\n")) ==
          "key run.command: unknown command \"frobnicate\"");
    CHECK(message_of<ConfigError>(build("model.delta = 1\n")) ==
          "missing required key run.command");
    CHECK(message_of<ConfigError>(build("run.command = ensemble\n"
                                        "run.n_traj = -3\n"))
              .find("expected a nonnegative integer") != std::string::npos);

    CHECK(message_of<ConfigError>(build("run.command = ensemble\n"
                                        "run.n_traj = 10\n"
                                        "trajectory.dim = 16\n")) ==
          "missing required key trajectory.t_end");
    CHECK(message_of<ConfigError>(build("run.command = ensemble\n"
                                        "run.n_traj = 10\n"
                                        "trajectory.t_end = 1.0\n")) ==
          "missing required key trajectory.dim");
    CHECK(message_of<ConfigError>(build("run.command = ensemble\n"
                                        "trajectory.t_end = 1.0\n"
                                        "trajectory.dim = 16\n")) ==
          "missing required key run.n_traj");

    CHECK(message_of<ConfigError>(build(with_line("trajectory.scheme = rk4")))
              .find("expected euler or exp_diag") != std::string::npos);
    CHECK(message_of<ConfigError>(build(with_line("trajectory.initial_state = squeezed")))
              .find("expected vacuum, coherent or fock") != std::string::npos);
    CHECK(message_of<ConfigError>(build(with_line("wigner.source = file")))
              .find("expected ensemble or analytic") != std::string::npos);

    CHECK(message_of<ConfigError>(build(with_line("trajectory.sample_dt = 0"))) ==
          "key trajectory.sample_dt: must be > 0");
    CHECK(message_of<ConfigError>(build(with_line("trajectory.sample_dt = 1e-4"))) ==
          "key trajectory.sample_dt: must be >= trajectory.dt");
    CHECK(message_of<ConfigError>(build(with_line("trajectory.sample_dt = 4e-5\n"
                                                  "trajectory.dt = 4e-5"))) ==
          "key trajectory.sample_dt: more than 20000 samples requested");
    CHECK(message_of<ConfigError>(build(with_line("trajectory.sample_start = -0.5"))) ==
          "key trajectory.sample_start: must lie in [0, trajectory.t_end]");
    CHECK(message_of<ConfigError>(build(with_line("trajectory.sample_start = 99"))) ==
          "key trajectory.sample_start: must lie in [0, trajectory.t_end]");

    CHECK(message_of<ConfigError>(build(with_line("ensemble.rho_times = 2.0, 1.0"))) ==
          "key ensemble.rho_times: entries must be ascending");
    CHECK(message_of<ConfigError>(build(with_line("ensemble.rho_times = 1,,2"))) ==
          "key ensemble.rho_times: empty list entry");

    CHECK(message_of<ConfigError>(build(with_line("wigner.x_min = -5")))
              .find("requires all of wigner.x_min") != std::string::npos);

    CHECK(message_of<ConfigError>(build("run.command = sweep\n")) ==
          "missing required key sweep.f_min");
    CHECK(message_of<ConfigError>(build("run.command = sweep\n"
                                        "sweep.f_min = 2\n"
                                        "sweep.f_max = 1\n")) ==
          "key sweep.f_max: must be >= sweep.f_min");
    CHECK(message_of<ConfigError>(build("run.command = sweep\n"
                                        "sweep.f_min = 1\n"
                                        "sweep.f_max = 2\n"
                                        "sweep.n = 1\n")) == "key sweep.n: must be >= 2");

    CHECK(message_of<ConfigError>(build("run.command = analytic\n"
                                        "analytic.alpha0 = 0\n")) ==
          "key analytic.alpha0: must be finite and > 0");
}

TEST_CASE("explicit wigner windows carry all four bounds") {
    const RunSpec spec = parse_config(with_line("ensemble.rho_times = 1.0\n"
                                                "wigner.x_min = -3\n"
                                                "wigner.x_max = 3\n"
                                                "wigner.y_min = -2\n"
                                                "wigner.y_max = 2\n"
                                                "wigner.nx = 51\n"
                                                "wigner.ny = 41"));
    CHECK(spec.wigner.explicit_window);
    CHECK(spec.wigner.window.x_min == -3.0);
    CHECK(spec.wigner.window.x_max == 3.0);
    CHECK(spec.wigner.window.y_min == -2.0);
    CHECK(spec.wigner.window.y_max == 2.0);
    CHECK(spec.wigner.window.nx == 51);
    CHECK(spec.wigner.window.ny == 41);
}

TEST_CASE("manifest round trip rebuilds the identical spec") {
    const std::string text = with_line("run.seed = 424242\n"
                                       "model.chi0 = 0.1\n"
                                       "ensemble.rho_times = 0.5, 1.0");
    const RunSpec spec = parse_config(text);

    TempFile manifest("manifest.json", "");
    write_manifest(manifest.path, spec);
    const RunSpec back = load_config_file(manifest.path);
    CHECK(back.resolved == spec.resolved);
    CHECK(back.seed == spec.seed);
    CHECK(back.command == spec.command);
    CHECK(back.trajectory.sample_times == spec.trajectory.sample_times);
    CHECK(back.rho_times == spec.rho_times);
    CHECK(back.params.chi0 == spec.params.chi0);

    TempFile plain("plain.cfg", text);
    const RunSpec direct = load_config_file(plain.path);
    CHECK(direct.resolved == spec.resolved);

    CHECK(message_of<ConfigError>([] { load_config_file("does_not_exist.cfg"); })
              .find("cannot open config file") != std::string::npos);
    TempFile broken("broken.json", "{ not json");
    CHECK(message_of<ConfigError>([&] { load_config_file(broken.path); })
              .find("manifest") != std::string::npos);
    TempFile hollow("hollow.json", "{\"version\": \"1\"}");
    CHECK(message_of<ConfigError>([&] { load_config_file(hollow.path); })
              .find("missing \"config\" object") != std::string::npos);
}

TEST_CASE("shipped figure configs all build") {
    const char* names[] = {"fig1_case1.cfg", "fig1_case2.cfg", "fig2.cfg",
                           "fig2_lo.cfg",    "fig3.cfg",       "fig3_control.cfg",
                           "fig4.cfg",       "fig5.cfg",       "fig6.cfg",
                           "fig6_quantum.cfg", "fig6_regular.cfg", "oracle_smoke.cfg"};
    for (const char* name : names) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config_file(config_path(name)));
    }

    const RunSpec fig3 = load_config_file(config_path("fig3.cfg"));
    CHECK(fig3.command == Command::wigner);
    CHECK(fig3.params.delta == -15.0);
    CHECK(fig3.params.chi0 == 2.0);
    CHECK(fig3.params.f0 == 5.8);
    CHECK(fig3.params.f1 == 2.9);
    CHECK(fig3.params.mod_freq_f == 2.0);
    CHECK(fig3.n_traj == 3000);
    REQUIRE(fig3.rho_times.size() == 1);
    CHECK(fig3.rho_times[0] == 6.9);

    const RunSpec fig1 = load_config_file(config_path("fig1_case1.cfg"));
    CHECK(fig1.command == Command::ensemble);
    CHECK(fig1.params.chi0 == 5e-3);
    CHECK(fig1.params.chi1 == 3.5e-3);
    CHECK(fig1.params.mod_freq_chi == 3.0);
    CHECK(fig1.params.f0 == 20.0);
    CHECK(fig1.trajectory.dim >= 450);
}

}
