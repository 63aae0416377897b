#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kernelforge/descriptors.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/mmd.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"

namespace kf::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// --- kernel JSON (strict schema: unknown fields are rejected) ---
// Leaves carry a "family" discriminator, combinators an "op" one.
KernelSpec parse_kernel(const json& j);
ojson kernel_to_json(const KernelSpec& spec);

ScalarFn parse_scalar_fn(const json& j);
ojson scalar_fn_to_json(const ScalarFn& f);
WeightFn parse_weight(const json& j);
ojson weight_to_json(const WeightFn& w);
MapFn parse_map(const json& j);
ojson map_to_json(const MapFn& m);
SiteCnd parse_site_cnd(const json& j);
ojson site_cnd_to_json(const SiteCnd& c);
LogCond parse_log_cond(const json& j);
ojson log_cond_to_json(const LogCond& l);
MatrixKernel parse_matrix_kernel(const json& j);
ojson matrix_kernel_to_json(const MatrixKernel& k);

KernelSpec load_kernel_file(const std::string& path);

// --- matrices ---
// .json holds a 2-d array; anything else is parsed as headerless CSV.
SymMatrix read_matrix_file(const std::string& path);
void write_matrix_csv(const std::string& path, const SymMatrix& m);
ojson matrix_to_json(const SymMatrix& m);

// --- points ---
struct SiteTable {
    std::vector<std::string> ids;
    std::vector<Point> points;
    const Point& lookup(const std::string& id) const;
};

SiteTable read_sites_csv(const std::string& path);

struct PointParseOptions {
    bool lift = false;            // interpret rows as chart coordinates
    const SiteTable* sites = nullptr;
    int channels = 0;             // >0: channel column expected/allowed
};

/// One tabular format for every domain. The header row decides the shape:
/// a `site_id` column makes product points (requires a site table), a
/// trailing `t` column makes validated hyperboloid points, a `channel`
/// column wraps the base point, anything else is Euclidean.
std::vector<Point> read_points_csv(const std::string& path,
                                   const PointParseOptions& opts = {});

/// Point columns plus a trailing `weight` column.
DiscreteMeasure read_measure_csv(const std::string& path,
                                 const PointParseOptions& opts = {});

// --- misc ---
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);
std::string file_digest(const std::string& path);
std::string format_double(double v); // shortest round-trip decimal

} // namespace kf::io
