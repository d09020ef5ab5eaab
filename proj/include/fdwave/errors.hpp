#ifndef FDWAVE_ERRORS_HPP
#define FDWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdwave {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI's error line.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define FDWAVE_DEFINE_ERROR(Name, tag)                                        \
  class Name : public Error {                                                 \
  public:                                                                     \
    explicit Name(const std::string& what) : Error(tag, what) {}              \
  };

FDWAVE_DEFINE_ERROR(DomainError, "domain")
FDWAVE_DEFINE_ERROR(CapacityError, "capacity")
FDWAVE_DEFINE_ERROR(DimensionError, "dimension")
FDWAVE_DEFINE_ERROR(OutOfRangeError, "out_of_range")
FDWAVE_DEFINE_ERROR(DegenerateWeightsError, "degenerate_weights")
FDWAVE_DEFINE_ERROR(StateError, "state")
FDWAVE_DEFINE_ERROR(SpecificationError, "specification")
FDWAVE_DEFINE_ERROR(ConfigError, "config")
FDWAVE_DEFINE_ERROR(UnsupportedStudyError, "unsupported_study")
FDWAVE_DEFINE_ERROR(IoError, "io")
FDWAVE_DEFINE_ERROR(ParseError, "parse")

#undef FDWAVE_DEFINE_ERROR

/// Non-finite values produced while advancing the solution. Carries the
/// time level at which they first appeared.
class NumericError : public Error {
public:
  NumericError(const std::string& what, long level = -1)
      : Error("numeric", what), level_(level) {}
  long level() const noexcept { return level_; }

private:
  long level_;
};

} // namespace fdwave

#endif // FDWAVE_ERRORS_HPP
