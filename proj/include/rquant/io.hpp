#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rquant/manifold.hpp"
#include "rquant/quantization.hpp"
#include "rquant/traffic.hpp"

namespace rquant::io {

/// Shortest round-trip decimal form of a double; the same bits always give
/// the same text, which is what makes rerun outputs byte-identical.
std::string format_double(double x);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a half-written artifact.
void atomic_write(const std::string& path, const std::string& content);

nlohmann::json point_to_json(const ManifoldPoint& p);
ManifoldPoint point_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const QuantizedMeasure& qm);
QuantizedMeasure measure_from_json(const nlohmann::json& j);

/// Ordered key/value pairs echoed into every artifact.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

nlohmann::json config_to_json(const ConfigEcho& echo);

/// Column header for one coordinate of a manifold point, e.g. sphere2_y.
std::vector<std::string> csv_columns(const ManifoldId& id);

/// Points as CSV: '#' comment lines carrying the config echo, then a header
/// naming the manifold, then one row per point.
std::string points_to_csv(const std::vector<ManifoldPoint>& points,
                          const ConfigEcho& echo);

/// Inverse of points_to_csv; the manifold is recognized from the header.
/// Malformed or off-manifold rows raise DataError listing line numbers.
std::vector<ManifoldPoint> points_from_csv(const std::string& content);

std::vector<ManifoldPoint> read_points_file(const std::string& path);

std::string labels_to_csv(const std::vector<TrafficSample>& samples,
                          const std::vector<int>& labels, const ConfigEcho& echo);

/// Scatter of labeled positions, one fill color per class.
std::string labels_to_svg(const std::vector<TrafficSample>& samples,
                          const std::vector<int>& labels, std::size_t n_classes);

std::string read_file(const std::string& path);

} // namespace rquant::io
