#include "packdim/error.hpp"

namespace packdim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::not_positive_semidefinite: return "not-positive-semidefinite";
    case ErrorCode::geometry_infeasible: return "geometry-infeasible";
    case ErrorCode::scale_unrepresentable: return "scale-unrepresentable";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::insufficient_scales: return "insufficient-scales";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::depth_exhausted: return "depth-exhausted";
    case ErrorCode::insufficient_depth: return "insufficient-depth";
    case ErrorCode::regime: return "regime";
    case ErrorCode::degenerate_regime: return "degenerate-regime";
    case ErrorCode::invalid_map: return "invalid-map";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

NotPositiveSemidefinite::NotPositiveSemidefinite(std::size_t pivot)
    : Error(ErrorCode::not_positive_semidefinite,
            "matrix is not positive semidefinite within the jitter budget (pivot " +
                std::to_string(pivot) + ")"),
      pivot_(pivot) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace packdim
