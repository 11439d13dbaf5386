#pragma once

// Snapshot and diagnostics files.
//
// Snapshot: `# horoflow-grid v1, mode=<axisym|full2d>, n=<n>, t=<t>` followed
// by one `theta[,phi],r` row per node. Diagnostics: CSV with the columns of
// DiagnosticsRecord (Z_max left empty when absent). Numbers use %.17g so that
// files round-trip exactly.

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "horoflow/grid.hpp"
#include "horoflow/monitors.hpp"

namespace horoflow {

std::string format_double(double value);

void write_snapshot(std::ostream& out, const GraphState& state);
void write_snapshot(const std::string& path, const GraphState& state);

/// Rebuilds the grid from the header and the coordinate columns; throws
/// DomainError when the coordinates do not match a supported grid.
GraphState read_snapshot(std::istream& in);
GraphState read_snapshot(const std::string& path);

extern const char* const kDiagnosticsHeader;

std::string diagnostics_row(const DiagnosticsRecord& rec);

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path);
  void append(const DiagnosticsRecord& rec);

 private:
  std::ofstream out_;
};

/// h_convex is reconstructed from lambda_tilde_min; pinched is not stored.
std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path);

}  // namespace horoflow
