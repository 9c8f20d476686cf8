#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pairflow {

// Exit-code contract: 0 ok, 1 validation, 2 numerics, 3 insufficient data.
enum class ExitCode : int {
  ok = 0,
  validation = 1,
  numerics = 2,
  insufficient_data = 3,
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::string what) : std::runtime_error(std::move(what)) {}
  ConfigError(std::string what, std::vector<std::string> issues)
      : std::runtime_error(std::move(what)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trajectory produced NaN/Inf; carries the diagnostic the spec of the run
// needs (time of failure, largest coefficient, last checkpoint if any).
class BlowUpError : public NumericsError {
 public:
  BlowUpError(std::string what, double t, double max_coeff,
              std::string last_checkpoint = {})
      : NumericsError(std::move(what)),
        t_(t),
        max_coeff_(max_coeff),
        last_checkpoint_(std::move(last_checkpoint)) {}
  double time() const { return t_; }
  double max_coefficient() const { return max_coeff_; }
  const std::string& last_checkpoint() const { return last_checkpoint_; }

 private:
  double t_;
  double max_coeff_;
  std::string last_checkpoint_;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairflow
