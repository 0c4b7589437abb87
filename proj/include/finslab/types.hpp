#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace finslab {

/// Coordinates of a Lie algebra element in the algebra basis.
using LieVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Hypothesis,  // a theorem's hypothesis does not hold for the given data
  Domain,      // outside the regular cone of a norm
  NotFound,
  Numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace finslab
