#include "flatdbar/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "flatdbar/io.hpp"

namespace flatdbar {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Removes a trailing `#` comment outside double quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

bool known_key(const std::string& key) {
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

long long parse_integer(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ValidationError(key + " must be an integer, got '" + text + "'");
    }
    if (used != text.size()) throw ValidationError(key + " must be an integer, got '" + text + "'");
    return v;
}

std::uint64_t parse_seed(const std::string& text) {
    std::size_t used = 0;
    unsigned long long v = 0;
    if (text.empty() || text.front() == '-') throw ValidationError("seed must be a non-negative integer");
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw ValidationError("seed must be a non-negative integer, got '" + text + "'");
    }
    if (used != text.size()) throw ValidationError("seed must be a non-negative integer, got '" + text + "'");
    return v;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out;
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::LatticeCheck: return "lattice-check";
        case Command::Sweep: return "sweep";
        case Command::Solve: return "solve";
        case Command::Weierstrass: return "weierstrass";
        case Command::Cech: return "cech";
        case Command::Verify: return "verify";
    }
    return "verify";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::LatticeCheck, Command::Sweep, Command::Solve, Command::Weierstrass, Command::Cech,
                      Command::Verify})
        if (command_name(c) == name) return c;
    throw ValidationError("unknown command '" + name + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"command", "lattice", "tau",  "pq",   "c",     "n",
                                                  "cutoff",  "grid",    "out",  "seed", "cover", "solver"};
    return keys;
}

int RunConfig::resolution() const {
    if (n > 0) return n;
    switch (command) {
        case Command::Solve: return 128;
        case Command::Cech: return 64;
        default: return 32;
    }
}

Settings parse_toml(const std::string& text) {
    Settings out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') throw ValidationError("TOML tables are not supported (line " + std::to_string(line_no) + ")");
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("TOML line " + std::to_string(line_no) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("TOML line " + std::to_string(line_no) + " has an empty key");
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') throw ValidationError("TOML array on line " + std::to_string(line_no) + " is not closed");
            std::string items = value.substr(1, value.size() - 2);
            std::stringstream ss(items);
            std::string item;
            std::string joined;
            bool first = true;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                joined += (first ? "" : ",") + unquote(item);
                first = false;
            }
            value = joined;
        } else {
            value = unquote(value);
        }
        out[key] = value;
    }
    return out;
}

Settings parse_json_settings(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config JSON must be an object");
    Settings out;
    for (const auto& [key, v] : j.items()) {
        if (v.is_string()) {
            out[key] = v.get<std::string>();
        } else if (v.is_number_integer()) {
            out[key] = std::to_string(v.get<long long>());
        } else if (v.is_number()) {
            out[key] = format_double(v.get<double>());
        } else if (v.is_boolean()) {
            out[key] = v.get<bool>() ? "true" : "false";
        } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); })) {
            std::vector<double> nums;
            for (const Json& e : v) nums.push_back(e.get<double>());
            out[key] = join(nums);
        } else {
            out[key] = v.dump();
        }
    }
    return out;
}

Settings load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto ends_with = [&](const std::string& suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".json")) return parse_json_settings(text);
    if (ends_with(".toml")) return parse_toml(text);
    return trim(text).rfind('{', 0) == 0 ? parse_json_settings(text) : parse_toml(text);
}

RunConfig build_config(const std::vector<Settings>& layers) {
    Settings merged;
    for (const Settings& layer : layers)
        for (const auto& [k, v] : layer) {
            if (!known_key(k)) throw ValidationError("unknown config key '" + k + "'");
            merged[k] = v;
        }

    RunConfig cfg;
    for (const auto& [key, value] : merged) {
        if (key == "command") {
            cfg.command = parse_command(value);
        } else if (key == "lattice") {
            cfg.lattice = value;
        } else if (key == "tau") {
            const std::vector<double> t = parse_double_list(value);
            if (t.size() != 2) throw ValidationError("tau must be re,im");
            cfg.tau = Complex(t[0], t[1]);
        } else if (key == "pq") {
            const std::vector<double> t = parse_double_list(value);
            if (t.size() != 2) throw ValidationError("pq must be p,q");
            cfg.pq = std::pair{t[0], t[1]};
        } else if (key == "c") {
            const std::vector<double> t = parse_double_list(value);
            if (t.empty() || t.size() % 2 != 0) throw ValidationError("c must be re1,im1,...,red,imd");
            cfg.c.clear();
            for (std::size_t i = 0; i < t.size(); i += 2) cfg.c.emplace_back(t[i], t[i + 1]);
        } else if (key == "n") {
            const long long v = parse_integer("n", value);
            if (v < 4 || v > 1024) throw ValidationError("n must be in [4, 1024]");
            cfg.n = static_cast<int>(v);
        } else if (key == "cutoff") {
            const long long v = parse_integer("cutoff", value);
            if (v < 1 || v > 64) throw ValidationError("cutoff must be in [1, 64]");
            cfg.cutoff = static_cast<int>(v);
        } else if (key == "grid") {
            const long long v = parse_integer("grid", value);
            if (v < 1 || v > 2000) throw ValidationError("grid must be in [1, 2000]");
            cfg.grid = static_cast<int>(v);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "seed") {
            cfg.seed = parse_seed(value);
        } else if (key == "cover") {
            cfg.cover = value;
        } else if (key == "solver") {
            cfg.solver = value;
        }
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (!std::isfinite(cfg.tau.real()) || !std::isfinite(cfg.tau.imag()) || cfg.tau.imag() < 0.1)
        throw ValidationError("tau must be finite with Im tau >= 0.1");
    if (cfg.pq) {
        const auto [p, q] = *cfg.pq;
        if (!(p >= 0.0 && p < 1.0 && q >= 0.0 && q < 1.0)) throw ValidationError("pq must lie in [0, 1)^2");
        if (p == 0.0 && q == 0.0)
            throw TrivialTwist("(p, q) = (0, 0) is the trivial bundle, which is excluded: "
                               "dbar_rho has a kernel there and the kernel solver is undefined");
    }
    if (cfg.n != 0 && (cfg.n < 4 || cfg.n > 1024)) throw ValidationError("n must be in [4, 1024]");
    if ((cfg.command == Command::Solve || cfg.command == Command::Cech) && cfg.resolution() % 2 != 0)
        throw ValidationError("n must be even for the solver grids");
    if (cfg.solver != "kernel" && cfg.solver != "fourier") throw ValidationError("solver must be kernel or fourier");
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("command", command_name(cfg.command));
    out.emplace_back("seed", std::to_string(cfg.seed));
    switch (cfg.command) {
        case Command::LatticeCheck:
        case Command::Sweep:
            out.emplace_back("lattice", cfg.lattice);
            out.emplace_back("cutoff", std::to_string(cfg.cutoff));
            if (cfg.command == Command::Sweep) out.emplace_back("grid", std::to_string(cfg.grid));
            break;
        case Command::Solve:
        case Command::Cech:
            out.emplace_back("tau", format_double(cfg.tau.real()) + "," + format_double(cfg.tau.imag()));
            if (cfg.pq) out.emplace_back("pq", format_double(cfg.pq->first) + "," + format_double(cfg.pq->second));
            out.emplace_back("n", std::to_string(cfg.resolution()));
            out.emplace_back("solver", cfg.solver);
            if (cfg.command == Command::Cech) out.emplace_back("cover", cfg.cover.empty() ? "default" : cfg.cover);
            break;
        case Command::Weierstrass:
            out.emplace_back("tau", format_double(cfg.tau.real()) + "," + format_double(cfg.tau.imag()));
            break;
        case Command::Verify:
            break;
    }
    if (!cfg.c.empty()) {
        std::vector<double> flat;
        for (Complex z : cfg.c) {
            flat.push_back(z.real());
            flat.push_back(z.imag());
        }
        out.emplace_back("c", join(flat));
    }
    return out;
}

}  // namespace flatdbar
