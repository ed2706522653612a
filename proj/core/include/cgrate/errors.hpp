#pragma once

#include <stdexcept>
#include <string>

namespace cgrate {

/// A bond evaluated at a non-positive length (atoms crossed or collapsed).
struct BondLengthError : std::domain_error {
  explicit BondLengthError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative solver failed to reach its tolerance, or a drag/scan found
/// no bracket to refine.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix does not have the eigenvalue signature the operation requires
/// (e.g. a first-order saddle needs exactly one negative eigenvalue).
struct SaddleSignatureError : std::runtime_error {
  explicit SaddleSignatureError(const std::string& what) : std::runtime_error(what) {}
};

/// The constrained block C failed its positive-definite factorization.
/// This is the symptom of a repatom region that does not contain the
/// essential transition behavior.
struct RepatomRegionError : std::runtime_error {
  explicit RepatomRegionError(const std::string& what) : std::runtime_error(what) {}
};

/// The coarse unstable mode is numerically orthogonal to the repatom part of
/// the atomistic unstable mode. The overlap is provably nonzero, so this
/// signals numerical breakdown rather than a valid state.
struct DegenerateOverlapError : std::runtime_error {
  explicit DegenerateOverlapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cgrate
