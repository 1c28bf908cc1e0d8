#pragma once

#include <stdexcept>
#include <string>

namespace vls {

// config / schema problems; CLI maps these to exit code 2
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// numerical failures (non-convergence, invalid regime); exit code 3
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// probe frequency too close to a line center for the far-detuned sums
struct NearResonanceError : NumericalError {
  explicit NearResonanceError(const std::string& what) : NumericalError(what) {}
};

// dipole potential cannot hold the atoms against gravity
struct NoBoundMinimumError : NumericalError {
  explicit NoBoundMinimumError(const std::string& what) : NumericalError(what) {}
};

// ellipse reduction failed or the phase is indeterminate; exit code 4
struct DegenerateFitError : std::runtime_error {
  explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vls
