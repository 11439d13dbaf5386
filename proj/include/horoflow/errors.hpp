#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace horoflow {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a genuine singularity (e.g. co_κ at 0, Q̃ with H̃ = 0).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// H_m ≤ 0 somewhere: the flow is no longer parabolic and must stop.
class ParabolicityLost : public std::runtime_error {
 public:
  ParabolicityLost(const std::string& what, std::size_t node, double theta,
                   double phi)
      : std::runtime_error(what), node_(node), theta_(theta), phi_(phi) {}
  ParabolicityLost(const std::string& what)
      : std::runtime_error(what), node_(0), theta_(0.0), phi_(0.0) {}

  std::size_t node() const noexcept { return node_; }
  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

 private:
  std::size_t node_;
  double theta_;
  double phi_;
};

/// Time integration cannot continue (NaN/Inf, stiffness, Newton failure).
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration failed validation; carries every offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out = "invalid configuration:";
    for (const auto& s : p) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace horoflow
