#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "packdim/fields.hpp"
#include "packdim/fractals.hpp"
#include "packdim/measures.hpp"

namespace packdim {

struct CheckReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  nlohmann::json witness;  // null when there is nothing to show
  nlohmann::json details = nlohmann::json::object();

  bool passed() const { return violations == 0; }
  nlohmann::json to_json() const;
};

// Folds b into a (same name): sums trials and violations, keeps the worse ratio.
void merge(CheckReport& a, const CheckReport& b);

// nu{x : nu(D(x, lambda r)) >= M nu(D(x, r))} <= 4^d M^{-1} prod lambda,
// comparing LHS * M against 4^d prod lambda.
CheckReport check_doubling(const DiscreteMeasure& nu, double r, std::span<const double> lambdas, double M);

// Scans r = 2^{-k/2} below each r0 and h_i = r^a 2^{q/2} for violations of
// nu(D(x,h)) <= nu(D(x,r)) prod (4 h_i / r)^{1+eps}; records the mass of
// atoms with a violation below r0. A violation of the check is an increase
// of that mass as r0 shrinks.
CheckReport check_scale_doubling(const DiscreteMeasure& nu, double a, double eps,
                                 std::vector<double> r0s = {0.5, 0.25, 0.125});

enum class PartsFunction { exp_sum, exp_sum_squares };
const char* to_string(PartsFunction f) noexcept;

// int f dmu against (-1)^d int g df with g(x) = mu(prod [0, x_i)).
CheckReport check_parts(const DiscreteMeasure& mu, PartsFunction f);

struct EqArGrid {
  std::size_t per_decade = 8;
};

// P(rho N in B(a,r)) / (r^beta (a + rho^beta)^{-1}) over a log grid, with
// the per-case maxima and the refinement comparison.
CheckReport check_eq_ar(double beta, EqArGrid grid = {});

// Graph-mode expected ball mass at radius eta^theta against eta^gamma on
// every level n >= 2 of the subsystem whose intervals hold at least 4
// atoms of the base resolution, at that resolution and (when the base is
// deep enough) one level finer.
CheckReport check_graph_expectation_bound(const EGammaSystem& sys, const FieldSpec& spec,
                                          std::size_t resolution, double bound = 8.0);

// ball_mass (euclidean) <= F_d <= G_d (n = 0) on random measures.
CheckReport check_kernel_chain(std::size_t trials, std::uint64_t seed);

// Random-measure sweeps used by the CLI and the acceptance suite.
CheckReport sweep_doubling(std::size_t trials, std::uint64_t seed);
CheckReport sweep_parts(std::size_t trials, std::uint64_t seed);
CheckReport sweep_scale_doubling(std::size_t trials, std::uint64_t seed);

}  // namespace packdim
