#ifndef CHLAB_ERRORS_HPP
#define CHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace chlab {

// Error taxonomy shared by the whole library. The C API maps these onto
// status codes; internal callers catch by kind where a failure is expected
// (NoInflection, blow-up) rather than exceptional.
enum class ErrorKind {
  InvalidArgument,   // bad parameters, non-finite inputs
  Validation,        // config validation (message lists every failing field)
  Precondition,      // analytic precondition violated (e.g. s0 >= -sqrt(2M))
  CflViolation,      // time step too large for the advective bound
  Numerical,         // NaN/overflow outside of declared blow-up semantics
  NoSpectrum,        // weight function is numerically zero
  TrackingLost,      // inflection bracket jumped too far between strides
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

// Collects named validation failures so configs report everything at once.
class ValidationCollector {
 public:
  void fail(const std::string& field, const std::string& why) {
    issues_.push_back(field + ": " + why);
  }
  bool ok() const { return issues_.empty(); }
  const std::vector<std::string>& issues() const { return issues_; }
  [[noreturn]] void raise() const {
    std::string msg = "config validation failed:";
    for (const auto& s : issues_) msg += "\n  - " + s;
    throw Error(ErrorKind::Validation, msg);
  }
  void raise_if_failed() const {
    if (!ok()) raise();
  }

 private:
  std::vector<std::string> issues_;
};

}  // namespace chlab

#endif
