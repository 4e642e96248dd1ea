// Error types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace spdmean {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operands have incompatible dimensions.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// Matrix failed the positive-definiteness check at construction.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

/// Eigensolver failed to converge within its sweep cap.
class IllConditioned : public Error {
 public:
  explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

/// Congruence transform is numerically singular.
class SingularTransform : public Error {
 public:
  explicit SingularTransform(const std::string& msg) : Error(msg) {}
};

/// A scalar parameter is outside its admissible range.
class ParameterOutOfRange : public Error {
 public:
  explicit ParameterOutOfRange(const std::string& msg) : Error(msg) {}
};

/// A documented precondition on the inputs does not hold.
class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

/// Finite-difference step pushed the argument outside the SPD cone.
class StepTooLarge : public Error {
 public:
  explicit StepTooLarge(const std::string& msg) : Error(msg) {}
};

/// Trace argument of the Bures-Wasserstein distance went negative
/// beyond round-off; indicates a numerics bug upstream.
class NegativeTrace : public Error {
 public:
  explicit NegativeTrace(const std::string& msg) : Error(msg) {}
};

/// A quantity violated a bound that only round-off may violate.
class NumericsError : public Error {
 public:
  explicit NumericsError(const std::string& msg) : Error(msg) {}
};

/// Linear map has deficient rank.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

/// Problem or result file could not be parsed.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace spdmean
