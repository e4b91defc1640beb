#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotgeo/curve.hpp"
#include "knotgeo/energy.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

using json = nlohmann::json;

// Knot file format: a header line "closed" or "open", one vertex per line as
// "x,y,z" with '.' decimal separator, terminated by a blank line or EOF.

inline PolyCurve load_knot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open knot file '" + path + "'", 0);
    std::string line;
    int lineno = 0;
    bool closed = false;
    bool header_seen = false;
    std::vector<Vec3> verts;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing carriage return
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (header_seen) break;  // blank-line terminated
            continue;
        }
        if (!header_seen) {
            if (line == "closed") {
                closed = true;
            } else if (line == "open") {
                closed = false;
            } else {
                throw parse_error("expected header 'closed' or 'open', got '" + line + "'",
                                  lineno);
            }
            header_seen = true;
            continue;
        }
        double x, y, z;
        char c1, c2;
        std::istringstream ss(line);
        if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
            throw parse_error("malformed vertex line '" + line + "'", lineno);
        std::string rest;
        if (ss >> rest) throw parse_error("trailing characters on vertex line", lineno);
        verts.emplace_back(x, y, z);
    }
    if (!header_seen) throw parse_error("missing header line in '" + path + "'", lineno);
    if (verts.size() < 2) throw parse_error("knot file needs at least 2 vertices", lineno);
    try {
        return PolyCurve(std::move(verts), closed);
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("invalid curve: ") + e.what(), lineno);
    }
}

inline void save_knot(const std::string& path, const PolyCurve& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write knot file '" + path + "'");
    out << (c.closed() ? "closed" : "open") << "\n";
    for (int i = 0; i < c.size(); ++i) {
        const Vec3& v = c.vertex(i);
        out << format_double(v.x()) << "," << format_double(v.y()) << "," << format_double(v.z())
            << "\n";
    }
    out << "\n";
}

/// Link manifest: JSON document {"components": ["path1", "path2", ...]};
/// component paths are resolved relative to the manifest location.
inline LinkSet load_link_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open link manifest '" + path + "'", 0);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad link manifest: ") + e.what(), 0);
    }
    if (!doc.contains("components") || !doc["components"].is_array())
        throw parse_error("link manifest must contain a 'components' array", 0);
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<PolyCurve> comps;
    for (const auto& entry : doc["components"]) {
        const std::filesystem::path p(entry.get<std::string>());
        comps.push_back(load_knot(p.is_absolute() ? p.string() : (base / p).string()));
    }
    return LinkSet(std::move(comps));
}

inline json report_to_json(const EnergyReport& r) {
    json diag{{"max_integrand", r.diagnostics.max_integrand},
              {"min_pair_distance", r.diagnostics.min_pair_distance}};
    if (r.formula == "open")
        diag["end_collinearity_defect"] = r.diagnostics.end_collinearity_defect;
    return json{{"value", r.value},
                {"alpha", r.alpha},
                {"n", r.n},
                {"formula", r.formula},
                {"diagnostics", diag}};
}

/// Provenance record written alongside every command output.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    json parameters = json::object();
    std::string version = "0.1.0";
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;
    bool deterministic = false;

    json to_json() const {
        return json{{"command", command},
                    {"inputs", inputs},
                    {"parameters", parameters},
                    {"version", version},
                    {"wall_time_s", deterministic ? 0.0 : wall_time_s},
                    {"outputs", outputs}};
    }
};

inline void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

/// CSV writer: ',' separators, '.' decimals, mandatory header row, values
/// at 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write CSV '" + path + "'");
        for (size_t i = 0; i < header.size(); ++i)
            out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
    }
    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i)
            out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }
    void row_prefixed(long a, long b, const std::vector<double>& values) {
        out_ << a << "," << b;
        for (double v : values) out_ << "," << format_double(v);
        out_ << "\n";
    }
    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

private:
    std::ofstream out_;
};

}  // namespace knotgeo
