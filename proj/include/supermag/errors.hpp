#ifndef SUPERMAG_ERRORS_HPP
#define SUPERMAG_ERRORS_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace supermag {

// Input outside a chart, a parameter regime, or a system's safe domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite value produced while evaluating an observable or field.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, int component)
      : std::runtime_error(what), component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

// Invalid user configuration; `key` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Integration entered the guard region around a singular surface.
class SingularApproach : public std::runtime_error {
 public:
  SingularApproach(const std::string& what, double time, std::array<double, 6> last_state)
      : std::runtime_error(what), time_(time), last_state_(last_state) {}
  double time() const noexcept { return time_; }
  const std::array<double, 6>& last_state() const noexcept { return last_state_; }

 private:
  double time_;
  std::array<double, 6> last_state_;
};

}  // namespace supermag

#endif  // SUPERMAG_ERRORS_HPP
