#ifndef STIGMA_ERRORS_HPP
#define STIGMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stigma {

// Precondition violations (out-of-range parameters, malformed grids) throw
// std::invalid_argument. The types below signal structural outcomes of the
// model itself that callers are expected to branch on.

// pi = 1: every player is honest, so the threshold best-response problem has
// no strategic content.
struct VacuousError : std::runtime_error {
  explicit VacuousError(const std::string& what) : std::runtime_error(what) {}
};

// b*pi*(1-alpha) = 1: the fixed-point condition degenerates and the interior
// closed form divides by zero.
struct SingularError : std::runtime_error {
  explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

// Operation asked to run outside the regime it is defined for (non-uniform
// cost distribution in a closed-form routine, alpha > 0 in the dominance
// analysis).
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// Bisection bracket does not straddle a root.
struct NoSignChangeError : std::runtime_error {
  explicit NoSignChangeError(const std::string& what) : std::runtime_error(what) {}
};

// Every point of the bracket (or of [0,1]) satisfies the fixed-point
// condition: a continuum of equilibria rather than an isolated root.
struct ContinuumError : std::runtime_error {
  explicit ContinuumError(const std::string& what) : std::runtime_error(what) {}
};

// Monotonicity grid contains no point with an interior equilibrium.
struct EmptyInteriorRegionError : std::runtime_error {
  explicit EmptyInteriorRegionError(const std::string& what) : std::runtime_error(what) {}
};

// Every stratum of a theory comparison is below the minimum sample count.
struct InsufficientSamplesError : std::runtime_error {
  explicit InsufficientSamplesError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stigma

#endif  // STIGMA_ERRORS_HPP
