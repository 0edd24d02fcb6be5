#ifndef G2STROM_ERRORS_HPP
#define G2STROM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace g2strom {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degree mismatch or degree overflow in exterior algebra operations.
class DegreeError : public Error {
public:
  explicit DegreeError(const std::string& msg) : Error(msg) {}
};

/// Metric is not positive definite, or a 3-form is not positive.
class MetricError : public Error {
public:
  explicit MetricError(const std::string& msg) : Error(msg) {}
};

/// Invalid Lie algebra data (Jacobi, invariance, or degenerate pairing).
class LieAlgebraError : public Error {
public:
  explicit LieAlgebraError(const std::string& msg) : Error(msg) {}
};

/// Incompatible Fourier fields (cutoff or shape mismatch, bad wavevector).
class FieldError : public Error {
public:
  explicit FieldError(const std::string& msg) : Error(msg) {}
};

/// Malformed input file; carries a JSON-pointer-style location when known.
class IoError : public Error {
public:
  IoError(const std::string& msg, std::string location = "")
      : Error(location.empty() ? msg : msg + " at " + location),
        m_location(std::move(location)) {}
  const std::string& location() const { return m_location; }

private:
  std::string m_location;
};

} // namespace g2strom

#endif
