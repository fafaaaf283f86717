#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace odpca {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `odpca` command line tool. Subcommands: synth, lowrank,
/// kmeans, bench. `args` excludes the program name. Returns 0 on success, 1 on
/// argument errors (usage on `err`) and 2 on runtime failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace odpca
