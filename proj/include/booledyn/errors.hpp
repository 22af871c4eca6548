#ifndef BOOLEDYN_ERRORS_HPP
#define BOOLEDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace booledyn {

// Root finder exceeded its iteration cap. Signals a bracketing/tolerance
// bug rather than a mathematical condition.
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// An orbit entered a pole guard and had to be truncated.
struct OrbitTruncated : std::runtime_error {
  explicit OrbitTruncated(const std::string& what) : std::runtime_error(what) {}
};

// A tail/histogram bin ended up with too few events to report.
struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

// Periodic-point search ran past its period bound without a covering word.
struct SearchExhausted : std::runtime_error {
  explicit SearchExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Expansion constants for the general period bound could not be certified.
struct ConstantsUnavailable : std::runtime_error {
  explicit ConstantsUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// A grid-based certificate failed; the message names the offending point.
struct GridFailure : std::runtime_error {
  explicit GridFailure(const std::string& what) : std::runtime_error(what) {}
};

// Cylinder enumeration would exceed its hard cap.
struct CylinderOverflow : std::runtime_error {
  explicit CylinderOverflow(const std::string& what) : std::runtime_error(what) {}
};

// An algebraic identity check failed at a grid point.
struct IdentityViolation : std::runtime_error {
  explicit IdentityViolation(const std::string& what) : std::runtime_error(what) {}
};

// Complex Newton failed to converge (seed too close to a critical value).
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace booledyn

#endif
