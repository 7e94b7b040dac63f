#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace folkswarm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitBadInput = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kSeedEnvVar = "FOLKSWARM_SEED";

/// Parses argv, runs one subcommand and maps errors to exit codes. Data goes
/// to files under --out; `out` gets a one-line summary, `err` diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FOLKSWARM_SEED when set and valid. Throws InputError for a set but
/// malformed value.
std::optional<std::uint64_t> env_seed();

}  // namespace folkswarm::cli
