#include "rquant/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rquant/errors.hpp"

namespace rquant::io {

namespace {

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    while (used < s.size() &&
           (s[used] == ' ' || s[used] == '\t' || s[used] == '\r')) {
        ++used;
    }
    if (used != s.size()) {
        throw std::invalid_argument("trailing characters");
    }
    return x;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field.erase(0, field.find_first_not_of(" \t\r"));
        field.erase(field.find_last_not_of(" \t\r") + 1);
        fields.push_back(field);
    }
    return fields;
}

} // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write to '" + tmp.string() + "'");
        }
        out << content;
        if (!out.good()) {
            throw DataError("short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move output into place at '" + path +
                        "': " + ec.message());
    }
}

nlohmann::json point_to_json(const ManifoldPoint& p) {
    const ManifoldPoint v = validated(p);
    nlohmann::json j;
    j["manifold"] = v.manifold.tag();
    if (v.manifold.kind == ManifoldKind::spd) {
        j["n"] = v.manifold.param;
        j["entries"] = std::vector<double>(v.coords.data(),
                                           v.coords.data() + v.coords.size());
    } else {
        j["coords"] = std::vector<double>(v.coords.data(),
                                          v.coords.data() + v.coords.size());
    }
    return j;
}

ManifoldPoint point_from_json(const nlohmann::json& j) {
    const std::string tag = j.at("manifold").get<std::string>();
    ManifoldPoint p;
    if (tag == "spd") {
        const int n = j.at("n").get<int>();
        const auto entries = j.at("entries").get<std::vector<double>>();
        p.manifold = ManifoldId::spd(n);
        if (static_cast<int>(entries.size()) != n * n) {
            throw DataError("spd point holds " + std::to_string(entries.size()) +
                            " entries, expected " + std::to_string(n * n));
        }
        p.coords = Eigen::Map<const Eigen::VectorXd>(
            entries.data(), static_cast<Eigen::Index>(entries.size()));
    } else {
        const auto coords = j.at("coords").get<std::vector<double>>();
        p.manifold = ManifoldId::from_tag(tag, static_cast<int>(coords.size()));
        p.coords = Eigen::Map<const Eigen::VectorXd>(
            coords.data(), static_cast<Eigen::Index>(coords.size()));
    }
    return validated(p);
}

nlohmann::json measure_to_json(const QuantizedMeasure& qm) {
    nlohmann::json j;
    j["manifold"] = qm.codebook.manifold.tag();
    j["atoms"] = nlohmann::json::array();
    for (const ManifoldPoint& c : qm.codebook.centers) {
        j["atoms"].push_back(point_to_json(c));
    }
    j["weights"] = qm.weights;
    if (!qm.counts.empty()) {
        j["counts"] = qm.counts;
    }
    return j;
}

QuantizedMeasure measure_from_json(const nlohmann::json& j) {
    QuantizedMeasure qm;
    const auto& atoms = j.at("atoms");
    if (atoms.empty()) {
        throw DataError("measure holds no atoms");
    }
    for (const auto& a : atoms) {
        qm.codebook.centers.push_back(point_from_json(a));
    }
    qm.codebook.manifold = qm.codebook.centers[0].manifold;
    for (const ManifoldPoint& c : qm.codebook.centers) {
        require_same_manifold(qm.codebook.manifold, c.manifold);
    }
    qm.weights = j.at("weights").get<std::vector<double>>();
    if (qm.weights.size() != qm.codebook.size()) {
        throw DataError("measure weights do not match its atom count");
    }
    if (j.contains("counts")) {
        qm.counts = j.at("counts").get<std::vector<std::uint64_t>>();
    }
    return qm;
}

nlohmann::json config_to_json(const ConfigEcho& echo) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : echo) {
        j[key] = value;
    }
    return j;
}

std::vector<std::string> csv_columns(const ManifoldId& id) {
    switch (id.kind) {
    case ManifoldKind::circle:
        return {"circle_theta"};
    case ManifoldKind::sphere2:
        return {"sphere2_x", "sphere2_y", "sphere2_z"};
    case ManifoldKind::hyperbolic2:
        return {"hyperbolic2_x", "hyperbolic2_y"};
    case ManifoldKind::euclidean: {
        std::vector<std::string> cols;
        for (int i = 0; i < id.param; ++i) {
            cols.push_back("euclidean_x" + std::to_string(i));
        }
        return cols;
    }
    case ManifoldKind::spd: {
        std::vector<std::string> cols;
        for (int i = 0; i < id.param; ++i) {
            for (int j = 0; j < id.param; ++j) {
                cols.push_back("spd_e" + std::to_string(i) + std::to_string(j));
            }
        }
        return cols;
    }
    }
    throw UsageError("unknown manifold kind");
}

std::string points_to_csv(const std::vector<ManifoldPoint>& points,
                          const ConfigEcho& echo) {
    if (points.empty()) {
        throw DataError("no points to write");
    }
    std::string out;
    for (const auto& [key, value] : echo) {
        out += "# " + key + "=" + value + "\n";
    }
    const std::vector<std::string> cols = csv_columns(points[0].manifold);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out += (c ? "," : "") + cols[c];
    }
    out += "\n";
    for (const ManifoldPoint& p : points) {
        const ManifoldPoint v = validated(p);
        require_same_manifold(points[0].manifold, v.manifold);
        for (Eigen::Index c = 0; c < v.coords.size(); ++c) {
            if (c) {
                out += ",";
            }
            out += format_double(v.coords[c]);
        }
        out += "\n";
    }
    return out;
}

std::vector<ManifoldPoint> points_from_csv(const std::string& content) {
    std::stringstream in(content);
    std::string line;
    long line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) {
        throw DataError("point file has no header row");
    }
    // Recognize the manifold from its first column name.
    const std::string& first = header[0];
    const std::size_t us = first.find('_');
    if (us == std::string::npos) {
        throw DataError("unrecognized point header '" + first + "'");
    }
    const std::string prefix = first.substr(0, us);
    ManifoldId id;
    if (prefix == "spd") {
        int n = 2;
        while (n * n < static_cast<int>(header.size())) {
            ++n;
        }
        id = ManifoldId::spd(n);
    } else {
        ManifoldId parsed;
        try {
            parsed = ManifoldId::from_tag(prefix, static_cast<int>(header.size()));
        } catch (const UsageError&) {
            throw DataError("unrecognized point header '" + first + "'");
        }
        id = parsed;
    }
    if (static_cast<int>(header.size()) != id.coord_size()) {
        throw DataError("point header has " + std::to_string(header.size()) +
                        " columns, expected " + std::to_string(id.coord_size()) +
                        " for " + id.tag());
    }

    std::vector<ManifoldPoint> points;
    std::vector<std::string> bad_rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        try {
            if (static_cast<int>(fields.size()) != id.coord_size()) {
                throw DataError("wrong column count");
            }
            ManifoldPoint p;
            p.manifold = id;
            p.coords.resize(id.coord_size());
            for (std::size_t c = 0; c < fields.size(); ++c) {
                p.coords[static_cast<Eigen::Index>(c)] = parse_double(fields[c]);
            }
            points.push_back(validated(p));
        } catch (const std::exception& e) {
            bad_rows.push_back("line " + std::to_string(line_no) + ": " +
                               e.what());
        }
    }
    if (!bad_rows.empty()) {
        std::string msg = "invalid rows:";
        for (const std::string& r : bad_rows) {
            msg += "\n  " + r;
        }
        throw DataError(msg);
    }
    if (points.empty()) {
        throw DataError("point file holds no data rows");
    }
    return points;
}

std::vector<ManifoldPoint> read_points_file(const std::string& path) {
    return points_from_csv(read_file(path));
}

std::string labels_to_csv(const std::vector<TrafficSample>& samples,
                          const std::vector<int>& labels, const ConfigEcho& echo) {
    std::string out;
    for (const auto& [key, value] : echo) {
        out += "# " + key + "=" + value + "\n";
    }
    out += "x,y,label\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += format_double(samples[i].z[0]) + "," +
               format_double(samples[i].z[1]) + "," + std::to_string(labels[i]) +
               "\n";
    }
    return out;
}

std::string labels_to_svg(const std::vector<TrafficSample>& samples,
                          const std::vector<int>& labels, std::size_t n_classes) {
    // Class colors, low to high complexity.
    static const std::array<const char*, 6> palette = {
        "#2e8b57", "#1e62a8", "#c0392b", "#8e44ad", "#d68910", "#17a2b8"};
    double min_x = samples[0].z[0], max_x = min_x;
    double min_y = samples[0].z[1], max_y = min_y;
    for (const TrafficSample& s : samples) {
        min_x = std::min(min_x, s.z[0]);
        max_x = std::max(max_x, s.z[0]);
        min_y = std::min(min_y, s.z[1]);
        max_y = std::max(max_y, s.z[1]);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = 640.0 / span;
    const double radius = 2.5;
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" "
        "height=\"700\" viewBox=\"0 0 700 700\">\n"
        "<rect width=\"700\" height=\"700\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double px = 30.0 + (samples[i].z[0] - min_x) * scale;
        // SVG y grows downward; flip so north stays up.
        const double py = 670.0 - (samples[i].z[1] - min_y) * scale;
        const std::size_t cls =
            static_cast<std::size_t>(std::max(labels[i] - 1, 0)) %
            std::max<std::size_t>(n_classes, 1);
        svg += "<circle cx=\"" + format_double(px) + "\" cy=\"" +
               format_double(py) + "\" r=\"" + format_double(radius) +
               "\" fill=\"" + palette[cls % palette.size()] +
               "\" fill-opacity=\"0.7\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace rquant::io
