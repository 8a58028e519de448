#pragma once

// Reduced-size invariant suites behind `flatdbar verify`. Results depend only
// on the seed.

#include <cstdint>
#include <string>
#include <vector>

namespace flatdbar {

struct SuiteResult {
    std::string suite;
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool upper = true;  // pass when value < tolerance, else value > tolerance
    bool pass = false;
};

std::vector<SuiteResult> run_verify_suites(std::uint64_t seed);

}  // namespace flatdbar
