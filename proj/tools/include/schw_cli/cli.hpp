#pragma once

// The schw command-line front end, as a library so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace schw::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

/// Runs one invocation. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, '.' decimal; reads back to the same double.
std::string format_number(double x);

struct SurfaceSpec {
    enum class Kind { plane, rotated_plane, cone } kind = Kind::plane;
    std::uint64_t seed = 0;  ///< rotated_plane
    double theta0 = 0.0;     ///< cone colatitude, radians
};

/// `plane`, `plane:rotated:<seed>`, `cone:<theta0>`; nullopt on anything else.
std::optional<SurfaceSpec> parse_surface(const std::string& text);

/// Number of worker threads from SCHW_THREADS (unset or 0: hardware concurrency).
unsigned thread_budget();

}  // namespace schw::cli
