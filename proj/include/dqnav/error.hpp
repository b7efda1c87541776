#pragma once

#include <stdexcept>
#include <string>

namespace dqnav {

enum class ErrorKind {
  invalid_argument,  // bad config values, bad CLI input
  shape_mismatch,    // tensor/layer shape disagreement
  io,                // file open/read/write failure
  bad_format,        // corrupt or foreign file contents
  bad_state,         // operation called out of order
  diverged,          // non-finite loss during training
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dqnav
