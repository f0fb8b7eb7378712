#include "kerrmod/io.hpp"
#include "kerrmod/errors.hpp"
#include "kerrmod/version.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace kerrmod {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open output file " + path);
    return out;
}

} // namespace

std::string format_full(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string time_tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    std::string tag(buf);
    for (char& c : tag) {
        if (c == '.')
            c = 'p';
        else if (c == '-')
            c = 'm';
        else if (c == '+')
            c = '_';
    }
    return tag;
}

void write_stats_csv(const std::string& path, const EnsembleStats& stats) {
    std::ofstream out = open_out(path);
    out << "t,mean_n,se_n,q\n";
    for (std::size_t k = 0; k < stats.times.size(); ++k)
        out << format_full(stats.times[k]) << ',' << format_full(stats.mean_n[k]) << ','
            << format_full(stats.se_n[k]) << ',' << format_full(stats.q[k]) << '\n';
}

void write_rho_ndjson(const std::string& path, const Eigen::MatrixXcd& rho) {
    std::ofstream out = open_out(path);
    for (Eigen::Index n = 0; n < rho.rows(); ++n)
        for (Eigen::Index m = 0; m < rho.cols(); ++m)
            out << "{\"n\":" << n << ",\"m\":" << m << ",\"re\":" << format_full(rho(n, m).real())
                << ",\"im\":" << format_full(rho(n, m).imag()) << "}\n";
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
    std::ofstream out = open_out(path);
    out << "x,y,w\n";
    for (std::size_t i = 0; i < grid.spec.nx; ++i)
        for (std::size_t j = 0; j < grid.spec.ny; ++j)
            out << format_full(grid.spec.x_at(i)) << ',' << format_full(grid.spec.y_at(j)) << ','
                << format_full(grid.at(i, j)) << '\n';
}

void write_wigner_matrix(const std::string& path, const WignerGrid& grid) {
    std::ofstream out = open_out(path);
    out << grid.spec.nx;
    for (std::size_t i = 0; i < grid.spec.nx; ++i)
        out << ' ' << format_full(grid.spec.x_at(i));
    out << '\n';
    for (std::size_t j = 0; j < grid.spec.ny; ++j) {
        out << format_full(grid.spec.y_at(j));
        for (std::size_t i = 0; i < grid.spec.nx; ++i)
            out << ' ' << format_full(grid.at(i, j));
        out << '\n';
    }
}

void write_negativity_json(const std::string& path,
                           const std::vector<std::pair<double, Negativity>>& rows) {
    std::ofstream out = open_out(path);
    for (const auto& [t, neg] : rows)
        out << "{\"min\":" << format_full(neg.min_value)
            << ",\"neg_volume\":" << format_full(neg.neg_volume) << ",\"t\":" << format_full(t)
            << "}\n";
}

void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<double>& a, const std::vector<double>& b) {
    std::ofstream out = open_out(path);
    out << header << '\n';
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        out << format_full(a[i]) << ',' << format_full(b[i]) << '\n';
}

void write_poincare_csv(const std::string& path, const PoincareSection& section) {
    std::ofstream out = open_out(path);
    out << "x,y\n";
    for (const auto& [x, y] : section.points)
        out << format_full(x) << ',' << format_full(y) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& up,
                     const std::vector<SweepPoint>& down) {
    std::ofstream out = open_out(path);
    out << "f,intensity,branch\n";
    for (const SweepPoint& pt : up)
        out << format_full(pt.f) << ',' << format_full(pt.intensity) << ",up\n";
    for (const SweepPoint& pt : down)
        out << format_full(pt.f) << ',' << format_full(pt.intensity) << ",down\n";
}

void write_manifest(const std::string& path, const RunSpec& spec) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = command_name(spec.command);
    j["seed"] = spec.seed;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : spec.resolved)
        cfg[key] = value;
    j["config"] = cfg;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_error_json(const std::string& path, const std::string& kind,
                      const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::ofstream out = open_out(path);
    out << j.dump() << '\n';
}

} // namespace kerrmod
