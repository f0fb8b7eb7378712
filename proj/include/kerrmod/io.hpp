#pragma once

#include "kerrmod/config.hpp"
#include "kerrmod/qsd.hpp"
#include "kerrmod/semiclassical.hpp"
#include "kerrmod/wigner.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kerrmod {

/// Full round-trip decimal formatting (17 significant digits); NaN is
/// rendered as "nan". All numeric output flows through this, so files are
/// byte-stable.
std::string format_full(double v);

/// Filesystem-safe tag for a sample time ("6.9" -> "6p9").
std::string time_tag(double t);

/// Columns: t,mean_n,se_n,q. Undefined Q samples are written as nan.
void write_stats_csv(const std::string& path, const EnsembleStats& stats);

/// One JSON object per row, row-major: {"n":i,"m":j,"re":x,"im":y}.
void write_rho_ndjson(const std::string& path, const Eigen::MatrixXcd& rho);

/// Columns: x,y,w (x-major).
void write_wigner_csv(const std::string& path, const WignerGrid& grid);

/// gnuplot nonuniform-matrix block (splot "..." nonuniform matrix).
void write_wigner_matrix(const std::string& path, const WignerGrid& grid);

/// One line per sampled time: {"min":...,"neg_volume":...,"t":...}.
void write_negativity_json(const std::string& path,
                           const std::vector<std::pair<double, Negativity>>& rows);

/// Two-column CSV with the given header line ("a,b").
void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<double>& a, const std::vector<double>& b);

/// Columns: x,y (strobe samples in time order).
void write_poincare_csv(const std::string& path, const PoincareSection& section);

/// Columns: f,intensity,branch; the up branch rows first, then down.
void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& up,
                     const std::vector<SweepPoint>& down);

/// Resolved flat config + seed + version; loadable as a config document.
void write_manifest(const std::string& path, const RunSpec& spec);

/// {"error": kind, "message": ...} on a single line.
void write_error_json(const std::string& path, const std::string& kind,
                      const std::string& message);

} // namespace kerrmod
