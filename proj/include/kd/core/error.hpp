#pragma once

#include <stdexcept>
#include <string>

namespace kd {

// Error categories map 1:1 onto CLI exit codes and the machine-parseable
// prefix printed on stderr (`error[<category>]: message`).
enum class ErrorCategory {
  config,     // bad configuration or parameter value
  dimension,  // shape/length mismatch between operands
  parse,      // malformed input file
  io,         // filesystem failure, refusing to overwrite, lock held
  stage,      // training-stage failure (divergence, missing records)
  registry,   // unknown backbone or unbuildable spec
};

const char* to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(std::string("error[") + to_string(category) +
                           "]: " + message),
        category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& msg) {
  throw Error(c, msg);
}

}  // namespace kd
