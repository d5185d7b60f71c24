#pragma once

#include <map>
#include <string>

#include "hlr/grid.hpp"
#include "hlr/solver.hpp"

namespace hlr::io {

/// Format a double with 17 significant digits (round-trips exactly).
std::string format_double(double v);

// Node CSV: header "i,j[,k],value". Staggered CSV: "axis,i,j[,k],value"
// with axis in {x,y,z}. Indices are the unshifted integer keys.
void write_node_csv(const std::string& path, const NodeField& f);
void write_staggered_csv(const std::string& path, const StaggeredField& E,
                         int axis);
NodeField read_node_csv(const std::string& path, const GridSpec& spec);
StaggeredField read_staggered_csv(const std::string& path,
                                  const GridSpec& spec,
                                  StaggeredField existing = {});

/// Flat report record, field names fixed: passes, energy_history,
/// gauss_residual, curl_residual, avg_field, wall_time_ms, error_inf.
std::string report_to_json(const SolveReport& rep);
void write_report_json(const std::string& path, const SolveReport& rep);

/// One nested key-value config file: "dotted.key = value" lines, '#'
/// comments. Parse errors and unknown keys carry the line number.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin);

}  // namespace hlr::io
