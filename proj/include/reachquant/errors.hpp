#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace reachquant {

/// Problem in a configuration file or in cross-field validation. Carries the
/// source name and line when the problem is tied to a specific input line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string source = {}, int line = 0)
      : std::runtime_error(format(what, source, line)), source_(std::move(source)), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& source, int line) {
    if (source.empty()) return what;
    if (line <= 0) return source + ": " + what;
    return source + ":" + std::to_string(line) + ": " + what;
  }

  std::string source_;
  int line_;
};

/// The supplied quadratic certificate failed verification.
class CertificateError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The requested scheme cannot guarantee bounded errors at the given (T, N).
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The value handed to the encoder lies outside the quantization region
/// beyond numerical slack. Carries the offending axis and bounds so tests
/// and operators can pinpoint the violation.
class QuantizerOverflow : public std::runtime_error {
 public:
  QuantizerOverflow(std::size_t axis, double value, double lo, double hi, std::uint32_t step)
      : std::runtime_error("quantizer overflow at step " + std::to_string(step) + ", axis " +
                           std::to_string(axis) + ": value " + std::to_string(value) +
                           " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        axis_(axis),
        value_(value),
        lo_(lo),
        hi_(hi),
        step_(step) {}

  std::size_t axis() const noexcept { return axis_; }
  double value() const noexcept { return value_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::uint32_t step() const noexcept { return step_; }

 private:
  std::size_t axis_;
  double value_, lo_, hi_;
  std::uint32_t step_;
};

}  // namespace reachquant
