#pragma once

// Run configuration. Sources are layered as defaults < config file < flags;
// every source goes through the same string-keyed parser.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatdbar/types.hpp"

namespace flatdbar {

enum class Command { LatticeCheck, Sweep, Solve, Weierstrass, Cech, Verify };

std::string command_name(Command c);
Command parse_command(const std::string& name);

using Settings = std::map<std::string, std::string>;

/// Keys accepted in config files and flags.
const std::vector<std::string>& config_keys();

struct RunConfig {
    Command command = Command::Verify;
    std::string lattice = "square";
    Complex tau{0.0, 1.0};
    std::optional<std::pair<double, double>> pq;
    std::vector<Complex> c;
    int n = 0;  // 0 selects the per-command default
    int cutoff = 2;
    int grid = 50;
    std::string out;  // empty writes to stdout
    std::uint64_t seed = 42;
    std::string cover;  // cover JSON (inline or path); empty selects the 2 x 2 default
    std::string solver = "kernel";

    /// n, or the command's default resolution.
    int resolution() const;
};

/// Flat `key = value` TOML subset: strings, numbers, booleans, arrays of
/// scalars, `#` comments. Tables are rejected.
Settings parse_toml(const std::string& text);

/// Top-level JSON object; arrays become comma lists, objects stay JSON text.
Settings parse_json_settings(const std::string& text);

/// By extension (.toml or .json), falling back to content sniffing.
Settings load_config_file(const std::string& path);

/// Builds and validates a RunConfig from layered settings (later wins).
RunConfig build_config(const std::vector<Settings>& layers);

/// Range checks; throws ValidationError.
void validate(const RunConfig& cfg);

/// (key, value) pairs echoed into output headers.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg);

}  // namespace flatdbar
