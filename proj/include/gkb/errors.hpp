#ifndef GKB_ERRORS_HPP
#define GKB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gkb {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible operand dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// A matrix required to be symmetric positive definite is not.
struct SpdError : Error {
  using Error::Error;
};

/// Iterative process produced a non-finite value or a zero pivot
/// where the theory requires a positive one.
struct BreakdownError : Error {
  using Error::Error;
};

/// A dense or fill-producing operation exceeded its configured size cap.
struct CapacityError : Error {
  using Error::Error;
};

/// Malformed input file; message carries the offending line number.
struct ParseError : Error {
  using Error::Error;
};

/// Missing or unreadable file, bad directory layout.
struct IoError : Error {
  using Error::Error;
};

/// A spectral quantity required to be positive is not.
struct RankError : Error {
  using Error::Error;
};

/// Invalid configuration value or combination.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace gkb

#endif
