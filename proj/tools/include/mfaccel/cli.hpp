#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include "mfaccel/experiments.hpp"

namespace mfaccel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Defaults for one subcommand before any config file or flag is applied.
/// `rate` differs from the rest: its basis size follows Q, its greedy
/// tolerance is 1e-24 and it extrapolates with the nominal weight.
ExperimentConfig defaults_for(const std::string& command);

/// Overlays the keys of a JSON config object onto `config` and returns the
/// keys it saw. Unknown keys and ill-typed values throw InvalidArgument.
std::set<std::string> apply_json(ExperimentConfig& config, const std::string& json_text);

/// Entry point behind the `mfaccel` executable. Result tables go to `out`
/// (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfaccel::cli
