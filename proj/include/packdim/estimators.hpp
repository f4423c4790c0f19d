#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "packdim/kernels.hpp"
#include "packdim/measures.hpp"

namespace packdim {

// Radii r_j = base^{-j}, j = j_min..j_max.
struct ScaleGrid {
  int j_min = 1;
  int j_max = 4;
  double base = 2.0;

  void validate() const;
  std::vector<double> radii() const;  // strictly decreasing
};

enum class ExponentMethod { tail_max, regression };
const char* to_string(ExponentMethod m) noexcept;
ExponentMethod exponent_method_from_string(const std::string& s);

struct ScaleRow {
  double r;
  double value;
  double ratio;  // log V / log r
  bool used;     // false for V = 0
};

struct ExponentEstimate {
  double value = 0.0;
  ExponentMethod method = ExponentMethod::regression;
  std::vector<ScaleRow> per_scale;
  std::vector<std::size_t> window;  // indices into per_scale
  bool dropped_zero = false;
};

ExponentEstimate scaling_exponent(std::span<const double> radii, std::span<const double> values,
                                  ExponentMethod method);

struct EstimatorOptions {
  ExponentMethod method = ExponentMethod::regression;
  // Take the minimum only over atoms at least the coarsest radius away from
  // the bounding box of the support (falls back to all atoms if none are).
  bool interior_only = true;
};

// Minimum over atoms of the per-atom exponent, with the per-atom tables.
struct DimensionEstimate {
  double value = 0.0;
  ExponentMethod method = ExponentMethod::regression;
  ScaleGrid grid;
  std::vector<double> radii;
  std::size_t argmin_atom = 0;
  ExponentEstimate at_argmin;
  std::vector<std::size_t> atoms;      // atoms evaluated
  std::vector<double> atom_values;     // exponent per evaluated atom
  std::vector<double> tables;          // V, atoms.size() x radii.size()
  std::string guard_status;            // "ok" or "boundary-fallback"
};

DimensionEstimate dim_measure_ballmass(const DiscreteMeasure& mu, const ScaleGrid& grid,
                                       const EstimatorOptions& opt = {}, Norm norm = Norm::euclidean);
DimensionEstimate dim_profile_beta(const DiscreteMeasure& mu, double beta, const ScaleGrid& grid,
                                   const EstimatorOptions& opt = {});
DimensionEstimate dim_measure_Gd(const DiscreteMeasure& mu, std::size_t n, std::size_t d,
                                 const ScaleGrid& grid, const EstimatorOptions& opt = {});
DimensionEstimate dim_Z_mu(const KernelContext& ctx, const ScaleGrid& grid,
                           const EstimatorOptions& opt = {});

// Variant of the graph/image expected mass with Euclidean balls, for d = 1.
std::vector<double> expected_ball_mass_euclidean(const KernelContext& ctx, std::span<const double> t,
                                                 std::span<const double> radii);
DimensionEstimate dim_Z_mu_euclidean(const KernelContext& ctx, const ScaleGrid& grid,
                                     const EstimatorOptions& opt = {});

// Number of cells eps*[k, k+1)^m hit by the points (flat, m per point).
std::size_t box_count(std::span<const double> points, std::size_t m, double eps);

struct BoxEstimate {
  ExponentEstimate exponent;
  std::vector<std::size_t> counts;  // per grid radius
};

// Box-counting exponent of a point cloud. Requires the finest radius to be
// at least 4x the median nearest-neighbour spacing.
BoxEstimate minkowski_regression(std::span<const double> points, std::size_t m, const ScaleGrid& grid,
                                 ExponentMethod method = ExponentMethod::regression);

// Inserts points on the segments between consecutive points so no step
// exceeds max_step.
std::vector<double> densify_polyline(std::span<const double> points, std::size_t m, double max_step);

}  // namespace packdim
