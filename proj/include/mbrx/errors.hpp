#ifndef MBRX_ERRORS_HPP
#define MBRX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mbrx {

// Configuration / input validation problems. CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Failures of the numerics at run time. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PreconditionError : NumericalError {
    using NumericalError::NumericalError;
};

// A descent curve left the configured bounding box.
struct PathEscape : NumericalError {
    using NumericalError::NumericalError;
};

// Adaptive descent step fell below the minimum step size.
struct StepUnderflow : NumericalError {
    using NumericalError::NumericalError;
};

// A descent segment did not land on the expected minimum.
struct TopologyMismatch : NumericalError {
    using NumericalError::NumericalError;
};

// Initial wave packet too close to a grid edge.
struct PacketTooWide : ConfigError {
    using ConfigError::ConfigError;
};

// Density reaching the grid edge exceeded the hard threshold.
struct BoundaryLeak : NumericalError {
    using NumericalError::NumericalError;
};

// A Bohmian particle left the wavefunction grid.
struct OutOfGrid : NumericalError {
    using NumericalError::NumericalError;
};

struct TimeAxisMismatch : NumericalError {
    using NumericalError::NumericalError;
};

struct InitialConditionMismatch : NumericalError {
    using NumericalError::NumericalError;
};

struct SeriesTooShort : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace mbrx

#endif
