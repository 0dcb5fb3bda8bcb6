#pragma once

#include <stdexcept>
#include <string>

namespace hypocal {

/// Invalid parameter value or function argument outside its mathematical domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// State outside the admissible region (tr(T) >= 0 or e outside [e_d, e_i]).
class AdmissibilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The triaxial constraint quadratic has zero or more than one positive root;
/// the parameter set must be excluded.
class NonUniqueRootError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class RejectReason {
  None,
  PositiveTrace,
  VoidRatioBelowMin,
  VoidRatioAboveMax,
  NoPositiveRoot,
  MultiplePositiveRoots,
  NonFinite,
};

const char* to_string(RejectReason reason);

/// Step index and cause recorded when an integration is abandoned.
struct StepFailure {
  int step = -1;
  RejectReason reason = RejectReason::None;
};

/// Thrown by simulate() when a trajectory leaves the admissible region; the
/// calling optimizer is expected to discard the parameter set.
class SimulationRejected : public std::runtime_error {
public:
  SimulationRejected(int step, RejectReason reason)
      : std::runtime_error("simulation rejected at step " + std::to_string(step) +
                           ": " + to_string(reason)),
        failure_{step, reason} {}

  int step() const { return failure_.step; }
  RejectReason reason() const { return failure_.reason; }
  const StepFailure& failure() const { return failure_; }

private:
  StepFailure failure_;
};

/// A curve normalizer evaluates to zero; the data cannot constrain the model.
class DegenerateNormalizer : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A statistic requires nonzero variance in a column that is constant.
class ZeroVarianceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& file, int line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
        file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

private:
  std::string file_;
  int line_;
};

/// Well-formed but semantically invalid input (non-monotone strain, positive
/// stress trace, too many points, ...).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypocal
