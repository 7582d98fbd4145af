#ifndef TLPOT_ERROR_HPP
#define TLPOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tlpot {

/// Broad classes of failure; the CLI maps them onto exit codes.
enum class ErrorKind {
  invalid_argument,  // caller violated a precondition
  data,              // input data cannot support the request
  degenerate,        // numeric breakdown (underflow, empty feasible set)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace tlpot

#endif  // TLPOT_ERROR_HPP
