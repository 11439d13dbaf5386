#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "horoflow/curvalg.hpp"

namespace horoflow::cli {

enum ExitCode : int { ok = 0, invariant_failure = 1, numerical_abort = 2, usage = 64 };

struct ParamOptions {
  int n = 2;
  int m = 1;
  double beta = 1.0;
  double kappa = -1.0;

  FlowParams params() const;
};

int run_command(const std::string& config_path, bool quiet);

int oracle_sphere_command(double r0, double t_end, const ParamOptions& opts, int samples,
                          std::ostream& out);

int constants_command(const ParamOptions& opts, int samples, std::uint64_t seed,
                      const std::string& format, std::ostream& out);

int analyze_command(const std::string& csv_path, const ParamOptions& opts,
                    const std::optional<std::string>& config_path, std::ostream& out);

int check_command(std::ostream& out);

}  // namespace horoflow::cli
