#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace packdim {

enum class ErrorCode {
  invalid_argument = 1,
  not_positive_semidefinite,
  geometry_infeasible,
  scale_unrepresentable,
  out_of_range,
  insufficient_scales,
  resolution,
  depth_exhausted,
  insufficient_depth,
  regime,
  degenerate_regime,
  invalid_map,
  io,
  config,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NotPositiveSemidefinite : public Error {
 public:
  explicit NotPositiveSemidefinite(std::size_t pivot);
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::invalid_argument, what);
}

}  // namespace packdim
