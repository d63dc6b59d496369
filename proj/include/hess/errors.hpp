#pragma once

#include <stdexcept>
#include <string>

namespace hess {

// Invalid configuration value. `key()` is the dotted config key (e.g.
// "bess.tau"); `line()` is the 1-based source line, or 0 when the value did
// not come from a file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what, int line = 0)
      : std::runtime_error(format(key, what, line)),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& key, const std::string& what,
                            int line) {
    std::string msg;
    if (line > 0) msg = "line " + std::to_string(line) + ": ";
    return msg + key + ": " + what;
  }

  std::string key_;
  int line_;
};

// Bad runtime input to an operation (non-finite sample, empty window, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hess
