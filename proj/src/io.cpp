#include "horoflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <regex>
#include <sstream>

#include "horoflow/errors.hpp"

namespace horoflow {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_snapshot(std::ostream& out, const GraphState& state) {
  const GridSpec& grid = *state.grid;
  out << "# horoflow-grid v1, mode=" << to_string(grid.mode()) << ", n=" << grid.n()
      << ", t=" << format_double(state.t) << "\n";
  const bool full = grid.mode() == GridMode::full2d;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    out << format_double(grid.theta(i));
    if (full) out << ',' << format_double(grid.phi(i));
    out << ',' << format_double(state.r[i]) << '\n';
  }
}

void write_snapshot(const std::string& path, const GraphState& state) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write snapshot '" + path + "'");
  write_snapshot(out, state);
}

namespace {

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::size_t used = 0;
    try {
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw DomainError("cannot parse number '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw DomainError("cannot parse number '" + cell + "'");
    }
  }
  if (!line.empty() && line.back() == ',') out.push_back(std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace

GraphState read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DomainError("empty snapshot");
  static const std::regex pattern(
      R"(#\s*horoflow-grid v1,\s*mode=(axisym|full2d),\s*n=(\d+),\s*t=([^,\s]+)\s*)");
  std::smatch match;
  if (!std::regex_match(header, match, pattern)) {
    throw DomainError("unrecognised snapshot header: " + header);
  }
  const GridMode mode = grid_mode_from_string(match[1]);
  const int n = std::stoi(match[2]);
  const double t = std::stod(match[3]);

  std::vector<std::vector<double>> rows;
  std::string line;
  const std::size_t width = mode == GridMode::full2d ? 3 : 2;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto v = split_numbers(line);
    if (v.size() != width) throw DomainError("snapshot row has wrong column count: " + line);
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw DomainError("snapshot has no rows");

  std::shared_ptr<const GridSpec> grid;
  if (mode == GridMode::axisymmetric) {
    grid = GridSpec::axisymmetric(n, static_cast<int>(rows.size()) - 1);
  } else {
    std::size_t n_phi = 1;
    while (n_phi < rows.size() && rows[n_phi][0] == rows[0][0]) ++n_phi;
    if (rows.size() % n_phi != 0) throw DomainError("snapshot rows do not form a grid");
    grid = GridSpec::full2d(static_cast<int>(rows.size() / n_phi), static_cast<int>(n_phi));
  }
  if (grid->node_count() != rows.size()) throw DomainError("snapshot size mismatch");

  GraphState state;
  state.t = t;
  state.grid = grid;
  state.r.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool ok = std::abs(rows[i][0] - grid->theta(i)) <= 1e-12;
    if (mode == GridMode::full2d) ok = ok && std::abs(rows[i][1] - grid->phi(i)) <= 1e-12;
    if (!ok) throw DomainError("snapshot coordinates do not match a uniform grid");
    state.r[i] = rows[i].back();
  }
  return state;
}

GraphState read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open snapshot '" + path + "'");
  return read_snapshot(in);
}

const char* const kDiagnosticsHeader =
    "t,V,Fbar,Fmin,Fmax,Qtilde_min,f_max,Htilde_min,lambda_tilde_min,Phi_min,Z_max,dt";

std::string diagnostics_row(const DiagnosticsRecord& rec) {
  std::string out;
  for (double v : {rec.t, rec.V, rec.Fbar, rec.Fmin, rec.Fmax, rec.Qtilde_min, rec.f_max,
                   rec.Htilde_min, rec.lambda_tilde_min, rec.Phi_min}) {
    out += format_double(v);
    out += ',';
  }
  if (rec.Z_max) out += format_double(*rec.Z_max);
  out += ',';
  out += format_double(rec.dt);
  return out;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(path) {
  if (!out_) throw DomainError("cannot write diagnostics '" + path + "'");
  out_ << kDiagnosticsHeader << '\n';
}

void DiagnosticsWriter::append(const DiagnosticsRecord& rec) {
  out_ << diagnostics_row(rec) << '\n';
  out_.flush();
}

std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty diagnostics file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDiagnosticsHeader) throw DomainError("unexpected diagnostics header: " + line);
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = split_numbers(line);
    if (v.size() != 12) throw DomainError("diagnostics row has wrong column count: " + line);
    DiagnosticsRecord rec;
    rec.t = v[0];
    rec.V = v[1];
    rec.Fbar = v[2];
    rec.Fmin = v[3];
    rec.Fmax = v[4];
    rec.Qtilde_min = v[5];
    rec.f_max = v[6];
    rec.Htilde_min = v[7];
    rec.lambda_tilde_min = v[8];
    rec.Phi_min = v[9];
    if (!std::isnan(v[10])) rec.Z_max = v[10];
    rec.dt = v[11];
    rec.h_convex = rec.lambda_tilde_min > 0.0;
    out.push_back(rec);
  }
  return out;
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open diagnostics '" + path + "'");
  return read_diagnostics(in);
}

}  // namespace horoflow
