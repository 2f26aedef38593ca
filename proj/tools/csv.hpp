#pragma once

// Trace CSV: one comment line carrying the schema version, a header row and
// one row per step. Numbers use the shortest round-trip form, '.' decimal,
// independent of the locale.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dvrsim/trace.hpp"

namespace dvrsim::cli {

std::string format_double(double x);

void write_csv(std::ostream& os, const trace::TraceRecord& tr, std::string_view scenario_name);

// Accepts any CSV written by write_csv. Lines starting with '#' are skipped.
// Throws std::runtime_error with the line number on malformed input.
trace::TraceRecord read_csv(std::istream& is);

}  // namespace dvrsim::cli
