#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packdim/measures.hpp"
#include "packdim/numerics.hpp"

namespace packdim {

// One level of a nested interval system. Every parent at level k-1 holds
// the same child pattern: children start at parent_left + offsets[j].
struct IntervalLevel {
  double length = 0.0;              // delta_k
  std::size_t branches = 1;         // m_k
  std::vector<double> offsets;      // size m_k, increasing
  double gap = 0.0;                 // smallest distance between consecutive children
};

struct CantorParams {
  unsigned branches;
  double ratio;
};

class NestedIntervalSystem {
 public:
  // levels[0] is the root: one interval [origin, origin + length].
  NestedIntervalSystem(double origin, std::vector<IntervalLevel> levels,
                       std::optional<CantorParams> cantor = {});

  std::size_t depth() const noexcept { return levels_.size() - 1; }
  const IntervalLevel& level(std::size_t k) const { return levels_.at(k); }
  double origin() const noexcept { return origin_; }
  const std::optional<CantorParams>& cantor() const noexcept { return cantor_; }
  std::optional<double> similarity_dimension() const;

  // Number of level-k intervals (saturates at UINT64_MAX).
  std::uint64_t count(std::size_t k) const;
  // Left endpoints of all level-k intervals, in order. Throws
  // scale-unrepresentable above 10^6 intervals.
  std::vector<double> left_endpoints(std::size_t k) const;

  // Containment, disjointness and the child-fit inequality
  // m*delta + (m-1)*gap <= delta_{k-1}; throws geometry-infeasible.
  void validate() const;
  // The stricter packing m_k(eta_k + delta_k) <= delta_{k-1} and delta_k < eta_k.
  bool satisfies_strict_packing() const;

 private:
  double origin_;
  std::vector<IntervalLevel> levels_;
  std::optional<CantorParams> cantor_;
};

NestedIntervalSystem build_uniform_cantor(unsigned branches, double ratio, std::size_t levels);

// Log-domain scale sequences. Index k runs 0..depth; eta and m entries at
// index 0 are unused (zero).
struct SymbolicScaleSystem {
  double beta = 0.0;
  double delta0 = 1.0;
  std::vector<LogValue> log_inv_delta;  // L_k
  std::vector<LogValue> log_inv_eta;    // H_k
  std::vector<LogValue> log_m;          // log m_k
  std::vector<std::uint64_t> m;         // exact m_k when <= 2^53, else 0

  std::size_t depth() const noexcept { return log_inv_delta.size() - 1; }
};

SymbolicScaleSystem build_tx_system(double beta, double delta0, std::size_t levels);
SymbolicScaleSystem symbolic_uniform_cantor(unsigned branches, double ratio, std::size_t levels);
// Reads delta_k, eta_k (the level gap) and m_k off an explicit system.
SymbolicScaleSystem to_symbolic(const NestedIntervalSystem& sys);

NestedIntervalSystem realize_explicit(const SymbolicScaleSystem& sys, std::size_t maxlevel);

DiscreteMeasure natural_measure(const NestedIntervalSystem& sys, std::size_t level);

// log N(A, eps) for eps = exp(-log_inv_eps).
LogValue covering_count(const SymbolicScaleSystem& sys, LogValue log_inv_eps);
LogValue covering_count(const NestedIntervalSystem& sys, LogValue log_inv_eps);

struct CoveringRow {
  LogValue log_inv_eps;
  LogValue log_count;
  double ratio;
};

struct MinkowskiBounds {
  double limsup;
  double liminf;
  std::vector<CoveringRow> table;
};

// grid: log(1/eps) values, increasing (coarse to fine).
MinkowskiBounds minkowski_bounds(const SymbolicScaleSystem& sys, const std::vector<LogValue>& grid);

// Subsystem of a uniform Cantor system satisfying the nested-subset
// conditions: level n of the result is level source_level[n] of the base.
struct EGammaSystem {
  NestedIntervalSystem system;
  NestedIntervalSystem base;
  std::vector<std::size_t> source_level;
  double gamma;
  double theta;

  // Equal mass on the selected intervals, realized by atoms at the left
  // endpoints of the base level `resolution` inside them.
  DiscreteMeasure measure(std::size_t resolution) const;
  // eta of a level-n node: gap between its children at level n+1.
  double eta(std::size_t n) const { return system.level(n + 1).gap; }
  // Disjoint nesting, eta_n^theta < eta_{n-1}, and mu(I) <= eta^gamma for
  // the parent's eta, at every available level.
  bool conditions_hold(std::string* why = nullptr) const;
};

EGammaSystem extract_E_gamma(const NestedIntervalSystem& sys, double gamma, double theta);

}  // namespace packdim
