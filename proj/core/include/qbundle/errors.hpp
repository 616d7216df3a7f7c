#pragma once

#include <stdexcept>
#include <string>

namespace qbundle {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeError : Error { using Error::Error; };           // mismatched sizes of permutations or vectors
struct CapacityError : Error { using Error::Error; };       // box too small for the particle count
struct InvalidConfigError : Error { using Error::Error; };  // colliding or out-of-range configuration
struct LiftError : Error { using Error::Error; };           // path lift with a bad starting point
struct NotALoopError : Error { using Error::Error; };       // open path where a closed loop is required
struct ShapeError : Error { using Error::Error; };          // graph, rank, or dimension mismatch
struct DimensionError : Error { using Error::Error; };      // operation unavailable in this dimension
struct InvalidRepresentationError : Error { using Error::Error; };
struct FrameError : Error { using Error::Error; };          // frame not parallel for the given bundle
struct SymmetryError : Error { using Error::Error; };       // potential or state lacks required symmetry
struct DomainError : Error { using Error::Error; };         // bad parameter value
struct NodeError : Error { using Error::Error; };           // wave function vanishes at the queried point

}
