#pragma once

#include <ostream>

#include "flatdbar/config.hpp"

namespace flatdbar {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Parses flags (precedence flags > --config file > defaults) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes a validated config, writing artifacts to cfg.out or `out`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace flatdbar
