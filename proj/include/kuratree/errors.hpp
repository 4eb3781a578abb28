#pragma once

#include <stdexcept>
#include <string>

namespace kuratree {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- graph construction -------------------------------------------------

/// An edge connects a node to itself.
class SelfLoop : public Error {
 public:
  using Error::Error;
};

/// The same node pair appears twice (ignoring orientation).
class DuplicateEdge : public Error {
 public:
  using Error::Error;
};

/// An edge closes a cycle, so the graph is not a tree.
class CycleDetected : public Error {
 public:
  using Error::Error;
};

/// The edge set does not connect all nodes.
class Disconnected : public Error {
 public:
  using Error::Error;
};

// -- numeric preconditions ----------------------------------------------

/// Vector/matrix sizes do not match the graph.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A frequency assignment violates the strict positivity requirement.
class NonPositiveFrequency : public Error {
 public:
  using Error::Error;
};

/// Matrix handed to the symmetric eigensolver is not symmetric.
class NotSymmetric : public Error {
 public:
  using Error::Error;
};

/// Eigensolver sweep cap exceeded; the input is malformed or badly scaled.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Margin epsilon outside the range where the formula is meaningful.
class DegenerateEpsilon : public Error {
 public:
  using Error::Error;
};

// -- runtime failures ----------------------------------------------------

/// Integration produced a non-finite or diverging state.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Operation requires a star graph (one node adjacent to all others).
class NotAStar : public Error {
 public:
  using Error::Error;
};

/// Event log violates per-leaf E1/E2 alternation; indicates a controller bug.
class AlternationViolation : public Error {
 public:
  using Error::Error;
};

/// Computed eigenvalue bounds bracket failed; indicates a solver/formula bug.
class SandwichViolation : public Error {
 public:
  using Error::Error;
};

/// Configuration file is malformed or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kuratree
