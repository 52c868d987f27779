#pragma once

#include <stdexcept>
#include <string>

namespace fijord {

/// Arithmetic between values living in Z/nZ for different n.
struct ModulusMismatch : std::runtime_error {
  explicit ModulusMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Series or maps built over structurally different incidence contexts.
struct ContextMismatch : std::runtime_error {
  explicit ContextMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// An element or class label that is not part of the order.
struct BadLabel : std::runtime_error {
  explicit BadLabel(const std::string& what) : std::runtime_error(what) {}
};

/// A scalar, matrix, or map that has no two-sided inverse.
struct NotInvertible : std::runtime_error {
  explicit NotInvertible(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration whose cardinality exceeds the configured cap.
struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// A constructor contract that does not hold; the message names the
/// violated clause and a witness.
struct PreconditionFailed : std::runtime_error {
  explicit PreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

/// The class-size hypothesis required by a decomposition is not met.
struct HypothesisViolated : std::runtime_error {
  explicit HypothesisViolated(const std::string& what) : std::runtime_error(what) {}
};

/// An operation whose precondition is a verified Jordan homomorphism was
/// given a map that is not one.
struct JordanCheckFailed : std::runtime_error {
  explicit JordanCheckFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration input.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fijord
