#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yieldnet {

enum class ErrorKind {
  invalid_argument,
  index_out_of_range,
  duplicate_link,
  missing_link,
  insufficient_retailers,
  insufficient_suppliers,
  size_limit,
  boundary_optimum,
  shape_mismatch,
  infeasible_moments,
  validation_failed,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace yieldnet
