#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eon {

/// Malformed or inconsistent input. `field` names the offending location
/// in the source document (e.g. "links[3].length_km").
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// No strictly feasible point exists (or could be found). `binding` lists
/// the labels of the most violated constraints, worst first.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> binding)
      : std::runtime_error(what), binding_(std::move(binding)) {}

  const std::vector<std::string>& binding() const noexcept { return binding_; }

 private:
  std::vector<std::string> binding_;
};

/// Enumeration refused because its size exceeds the configured cap.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(double estimate, double cap)
      : std::runtime_error("enumeration size " + std::to_string(estimate) +
                           " exceeds cap " + std::to_string(cap)),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace eon
