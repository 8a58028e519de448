#include "flatdbar/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace flatdbar {

namespace {

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
    return j.get<double>();
}

Lattice product_lattice(const std::vector<Complex>& factors) {
    const int d = static_cast<int>(factors.size());
    MatrixXcd g = MatrixXcd::Zero(d, 2 * d);
    for (int j = 0; j < d; ++j) {
        g(j, j) = 1.0;
        g(j, d + j) = factors[j];
    }
    return Lattice(g);
}

}  // namespace

Json lattice_to_json(const Lattice& lat) {
    Json gens = Json::array();
    for (int k = 0; k < lat.rank(); ++k) {
        Json g = Json::array();
        for (int j = 0; j < lat.dim(); ++j) {
            g.push_back(lat.generators()(j, k).real());
            g.push_back(lat.generators()(j, k).imag());
        }
        gens.push_back(std::move(g));
    }
    return Json{{"d", lat.dim()}, {"generators", gens}};
}

Lattice lattice_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("generators"))
        throw ValidationError("lattice JSON needs \"d\" and \"generators\"");
    if (!j["d"].is_number_integer()) throw ValidationError("lattice \"d\" must be an integer");
    const int d = j["d"].get<int>();
    if (d < 1) throw ValidationError("lattice \"d\" must be positive");
    const Json& gens = j["generators"];
    if (!gens.is_array() || static_cast<int>(gens.size()) != 2 * d)
        throw ValidationError("lattice needs exactly 2d generators");
    MatrixXcd g(d, 2 * d);
    for (int k = 0; k < 2 * d; ++k) {
        const Json& col = gens[static_cast<std::size_t>(k)];
        if (!col.is_array()) throw ValidationError("generator must be an array");
        if (static_cast<int>(col.size()) == 2 * d && !col[0].is_array()) {
            for (int r = 0; r < d; ++r)
                g(r, k) = Complex(number(col[2 * r], "generator entry"), number(col[2 * r + 1], "generator entry"));
        } else if (static_cast<int>(col.size()) == d) {
            for (int r = 0; r < d; ++r) {
                const Json& e = col[static_cast<std::size_t>(r)];
                if (!e.is_array() || e.size() != 2) throw ValidationError("generator entry must be [re, im]");
                g(r, k) = Complex(number(e[0], "generator entry"), number(e[1], "generator entry"));
            }
        } else {
            throw ValidationError("generator has the wrong number of entries");
        }
    }
    return Lattice(g);
}

Lattice lattice_preset(const std::string& name) {
    const Complex i(0.0, 1.0);
    const Complex hex = std::polar(1.0, kPi / 3.0);
    if (name == "square") return product_lattice({i});
    if (name == "hex") return product_lattice({hex});
    if (name == "square2") return product_lattice({i, i});
    if (name == "hex2") return product_lattice({hex, hex});
    if (name == "square3") return product_lattice({i, i, i});
    throw ValidationError("unknown lattice preset '" + name + "'");
}

std::vector<std::string> lattice_preset_names() { return {"square", "hex", "square2", "hex2", "square3"}; }

Lattice parse_lattice_spec(const std::string& spec) {
    for (const std::string& p : lattice_preset_names())
        if (spec == p) return lattice_preset(spec);
    if (!spec.empty() && spec.front() == '{') {
        try {
            return lattice_from_json(Json::parse(spec));
        } catch (const Json::exception& e) {
            throw ValidationError(std::string("lattice JSON: ") + e.what());
        }
    }
    std::ifstream in(spec);
    if (!in) throw ValidationError("lattice '" + spec + "' is neither a preset nor a readable file");
    try {
        return lattice_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("lattice JSON: ") + e.what());
    }
}

Json representation_to_json(const Representation& rep) {
    Json a = Json::array();
    for (Eigen::Index k = 0; k < rep.angles().size(); ++k) a.push_back(rep.angles()(k));
    return Json{{"d", rep.dim()}, {"angles", a}};
}

Representation representation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("angles"))
        throw ValidationError("representation JSON needs \"d\" and \"angles\"");
    const int d = j["d"].get<int>();
    const Json& a = j["angles"];
    if (!a.is_array() || static_cast<int>(a.size()) != 2 * d)
        throw ValidationError("representation needs 2d angles");
    VectorXd angles(2 * d);
    for (int k = 0; k < 2 * d; ++k) angles(k) = number(a[static_cast<std::size_t>(k)], "angle");
    return Representation(angles);
}

Json cover_to_json(const OpenCover& cover) {
    Json rects = Json::array();
    for (const Rect& r : cover.rects) rects.push_back({r.lo1, r.hi1, r.lo2, r.hi2});
    return Json{{"rects", rects},
                {"overlap_min", cover.overlap_min},
                {"taper", cover.taper == Taper::Cosine ? "cosine" : "smooth"}};
}

OpenCover cover_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rects")) throw ValidationError("cover JSON needs \"rects\"");
    OpenCover cover;
    for (const Json& r : j["rects"]) {
        if (!r.is_array() || r.size() != 4) throw ValidationError("cover rect must be [t1_lo, t1_hi, t2_lo, t2_hi]");
        cover.rects.push_back({number(r[0], "rect"), number(r[1], "rect"), number(r[2], "rect"), number(r[3], "rect")});
    }
    if (j.contains("overlap_min")) cover.overlap_min = number(j["overlap_min"], "overlap_min");
    if (j.contains("taper")) {
        const std::string t = j["taper"].get<std::string>();
        if (t == "cosine") cover.taper = Taper::Cosine;
        else if (t == "smooth") cover.taper = Taper::Smooth;
        else throw ValidationError("taper must be \"cosine\" or \"smooth\"");
    }
    cover.validate();
    return cover;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("'" + text + "' is not a comma-separated list of numbers");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v))
            throw ValidationError("'" + text + "' is not a comma-separated list of numbers");
        out.push_back(v);
    }
    return out;
}

void CsvWriter::comment(const std::string& key, const std::string& value) { *os_ << "# " << key << ": " << value << '\n'; }

void CsvWriter::comment(const std::string& line) { *os_ << "# " << line << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) *os_ << (i ? "," : "") << columns[i];
    *os_ << '\n';
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& text) {
    if (row_open_) *os_ << ',';
    *os_ << text;
    row_open_ = true;
    return *this;
}

void CsvWriter::end_row() {
    *os_ << '\n';
    row_open_ = false;
}

void write_grid_csv(CsvWriter& csv, const VectorXcd& u, int n) {
    csv.header({"t1", "t2", "re", "im"});
    for (Eigen::Index L = 0; L < u.size(); ++L) {
        csv.cell(static_cast<double>(L % n) / n).cell(static_cast<double>(L / n) / n);
        csv.cell(u(L).real()).cell(u(L).imag());
        csv.end_row();
    }
}

}  // namespace flatdbar
