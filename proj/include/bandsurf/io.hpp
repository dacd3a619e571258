#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandsurf/denoise.hpp"
#include "bandsurf/funcrep.hpp"
#include "bandsurf/lifting.hpp"
#include "bandsurf/point_cloud.hpp"
#include "bandsurf/recovery.hpp"
#include "bandsurf/support.hpp"
#include "bandsurf/trigpoly.hpp"

namespace bandsurf::io {

using nlohmann::json;

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

// JSON: {"dims": n, "freqs": [[k1, ..., kn], ...]} in canonical order.
json to_json(const SupportSet& s);
SupportSet support_from_json(const json& j);

// Complex vectors are stored interleaved: [re0, im0, re1, im1, ...].
json complex_to_json(const CVector& v);
CVector complex_from_json(const json& j);

// Support fields plus "coeffs" (interleaved).
json to_json(const TrigPolynomial& p);
TrigPolynomial poly_from_json(const json& j);

// {"kind": "rect", "lo": [...], "hi": [...]} or {"kind": "ball", "d": d, "q": 1|2|"inf"[, "dims": n]}.
json to_json(const KernelConfig& c);
KernelConfig kernel_config_from_json(const json& j);

json to_json(const NullSpaceBasis& b);
/// "features" or "kernel".
AlphaSolver parse_solver(const std::string& name);
json to_json(const AnchorModel& m);
AnchorModel anchor_model_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Cloud CSV: header x1..xn [,component], one row per point.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
void write_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& in);
PointCloud read_cloud_csv(const std::string& path);

/// Generic numeric table with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column, or -1.
    std::ptrdiff_t column(const std::string& name) const;
};
Table read_table_csv(std::istream& in);
Table read_table_csv(const std::string& path);

/// Writes a Hermitian/complex matrix as CSV with "re_j,im_j" column pairs.
void write_complex_matrix_csv(std::ostream& out, const CMatrix& m);

void write_phase_table_csv(std::ostream& out, const std::vector<PhaseRow>& rows);
void write_denoise_log_csv(std::ostream& out, const std::vector<IterationMetrics>& log);

} // namespace bandsurf::io
