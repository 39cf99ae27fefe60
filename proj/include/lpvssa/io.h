#pragma once

#include <iosfwd>
#include <string>

#include "lpvssa/lpv_system.h"
#include "lpvssa/reduction.h"
#include "lpvssa/signal.h"

namespace lpvssa::io {

inline constexpr const char* kSchemaVersion = "1.0";

/// Malformed document. `path()` is a JSON pointer to the offending node
/// ("" for the whole document).
class DocumentError : public InputError {
 public:
  DocumentError(std::string path, const std::string& message);
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/**
 * System document:
 *
 *   {
 *     "schema_version": "1.0",
 *     "domain": "dt" | "ct",
 *     "region": {"lower": [...], "upper": [...]},
 *     "A": [M_0, ..., M_np], "B": [...], "C": [...], "D": [...]
 *   }
 *
 * where every matrix is {"rows": r, "cols": c, "data": [row-major r*c]}.
 * Unknown fields, wrong shapes and non-finite numbers are rejected.
 */
LpvSsa parse_system(const std::string& text);
std::string serialize_system(const LpvSsa& sys);

/**
 * Signal document:
 *   {"kind": "dt", "values": [[...], ...]}                     (time x dim)
 *   {"kind": "ct", "times": [...], "values": [[...], ...],
 *    "interpolation": "piecewise-constant" | "piecewise-linear"}
 */
Signal parse_signal(const std::string& text);
std::string serialize_signal(const Signal& s);

/// CSV with header t,x1..xn,y1..ym and 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
std::string trajectory_json(const Trajectory& traj);

/// Transform sidecar written next to a minimized system: order o, T, Pi and
/// the minimality claim.
std::string serialize_sidecar(const Minimization& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace lpvssa::io
