#pragma once

#include <span>
#include <string>
#include <vector>

#include "drivewave/solver.hpp"
#include "drivewave/wave.hpp"

namespace drivewave {

/// Shortest text that parses back to the same double.
std::string format_double(double v);

inline const char* format_bool(bool b) { return b ? "true" : "false"; }

/// Header `t,x,u1,u2`; u2 is left blank for single-field states.
std::string snapshots_csv(std::span<const FieldState> snapshots, const Grid1D& grid);

/// Header `s,r,speed,fit_r2,class,p_monotone,n_monotone,plateau_n`.
std::string report_csv(const WaveReport& report, double s, double r);

/// Header `V,h`.
std::string h_table_csv(const HTable& table);

/// Splits one CSV line on commas (no quoting is ever emitted).
std::vector<std::string> split_csv_line(const std::string& line);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace drivewave
