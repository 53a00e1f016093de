#pragma once

#include <stdexcept>
#include <string>

namespace eonsurv {

// Malformed topology text or an invalid network (duplicate ids, disconnected).
class TopologyError : public std::runtime_error {
 public:
  TopologyError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Path longer than the reach of every modulation format.
class NoFeasibleModulation : public std::runtime_error {
 public:
  explicit NoFeasibleModulation(double km)
      : std::runtime_error("no modulation format reaches " + std::to_string(km) + " km") {}
};

// Window is not free on every link of the path.
class NotACandidate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Allocation would touch a busy slot or an exhausted resource.
class Overlap : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Handle already released or never issued.
class DoubleRelease : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Waiting migrations can never be admitted.
class EvacuationDeadlock : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eonsurv
