#pragma once

// JSON (de)serialization of lattices, representations and covers; CSV output
// with a comment header and %.17g floats.

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flatdbar/cech.hpp"
#include "flatdbar/flat_bundle.hpp"
#include "flatdbar/lattice.hpp"

namespace flatdbar {

using Json = nlohmann::json;

/// {"d": d, "generators": [[re_1, im_1, ..., re_d, im_d], ...]}. On input a
/// generator may also be a list of d [re, im] pairs.
Json lattice_to_json(const Lattice& lat);
Lattice lattice_from_json(const Json& j);

/// square, hex (d = 1); square2, hex2 (d = 2); square3 (d = 3).
Lattice lattice_preset(const std::string& name);
std::vector<std::string> lattice_preset_names();

/// Preset name, inline JSON object, or path to a JSON file.
Lattice parse_lattice_spec(const std::string& spec);

/// {"d": d, "angles": [theta_1, ..., theta_2d]}.
Json representation_to_json(const Representation& rep);
Representation representation_from_json(const Json& j);

/// {"rects": [[t1_lo, t1_hi, t2_lo, t2_hi], ...], "overlap_min": w, "taper": "cosine" | "smooth"}.
Json cover_to_json(const OpenCover& cover);
OpenCover cover_from_json(const Json& j);

/// %.17g.
std::string format_double(double x);

/// Comma-separated list of doubles ("0.3,0.2").
std::vector<double> parse_double_list(const std::string& text);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(&os) {}

    /// "# key: value" lines.
    void comment(const std::string& key, const std::string& value);
    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);

    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(const std::string& text);
    void end_row();

private:
    std::ostream* os_;
    bool row_open_ = false;
};

/// Rows t1, t2, re, im for an N x N grid with point index i1 + N i2.
void write_grid_csv(CsvWriter& csv, const VectorXcd& u, int n);

}  // namespace flatdbar
