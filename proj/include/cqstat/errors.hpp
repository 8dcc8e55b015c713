#pragma once

#include <stdexcept>
#include <string>

namespace cqstat {

/// Statistics that divide by the mean photon number are undefined for the
/// vacuum (or any state with a vanishing mean).
class UndefinedStatisticsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The constrained Liouvillian could not be factorized, so the steady state
/// is not unique (or the solve broke down numerically).
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the time integrator when the trace drifts.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pmf with entries too negative to be truncation noise.
class InvalidDistributionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters that sit exactly on the Poisson point, where the negative
/// binomial parameters diverge.
class PoissonLimitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqstat
