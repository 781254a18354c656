#pragma once

#include <stdexcept>
#include <string>

namespace auctok {

// Precondition / domain violations (bad arguments, invalid model objects).
// We reuse std::invalid_argument so callers can catch the standard type.
[[noreturn]] inline void fail_domain(const std::string& msg) {
  throw std::invalid_argument(msg);
}

// Numerical failures: non-bracketed roots, quadrature not converging,
// infeasible programs. Distinct from domain errors so the CLI can map them
// to a different exit code.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail_numeric(const std::string& msg) {
  throw NumericError(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail_domain(msg);
}

}  // namespace auctok
