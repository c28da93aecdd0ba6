#ifndef JOHNBOX_ERROR_HPP
#define JOHNBOX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace johnbox {

enum class ErrorKind {
  Dimension,
  Asymmetric,
  Singular,
  Unbounded,
  Infeasible,
  NotOnBoundary,
  NotContained,
  NotConverged,
  Precondition,
  Parse,
};

/// Exception thrown by every johnbox operation; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace johnbox

#endif  // JOHNBOX_ERROR_HPP
