#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "proxlab/grid.hpp"

namespace proxlab {

enum class Format { csv, json };

/// CSV: header "x,value" (1-D) or "x,y,value" (2-D), one node per row in
/// flat order, +inf written as "inf". JSON: {"grid": [[lo, hi, n], ...],
/// "values": [...], "flags": [...], "label": "..."}, "inf" as a string.
/// Numbers use the shortest round-trip form, so output is deterministic.
std::string emit_grid(const GridFunction& f, Format format);

/// Inverse of emit_grid. CSV input recovers the axes from the distinct
/// coordinates and needs every node present. Throws ParseError.
GridFunction read_grid(std::string_view text, Format format);

struct SweepEntry {
  double param;
  GridFunction value;
};

/// Long format. CSV "param,x,value" ("param,x,y,value" in 2-D);
/// JSON array of {"param": p, "grid": ..., "values": ...}.
std::string sweep_emit(const std::vector<SweepEntry>& rows, Format format);

}  // namespace proxlab
