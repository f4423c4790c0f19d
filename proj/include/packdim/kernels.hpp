#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "packdim/fields.hpp"
#include "packdim/measures.hpp"

namespace packdim {

enum class FieldMode { image, graph };

const char* to_string(FieldMode m) noexcept;
FieldMode field_mode_from_string(const std::string& s);

// prod_i min{1, |x_i|^{-1}}, with min{1, 1/0} = 1.
double kernel_Id(std::span<const double> x);
double kernel_Ifd(std::span<const double> fx, std::span<const double> fy, double r);

// Euclidean distance inside; the y = x term counts 1.
double kernel_F_beta(const DiscreteMeasure& mu, double beta, std::span<const double> x, double r);
// x = (u, v) with u in R^n, v in R^d, n + d = mu.dim().
double kernel_G_d(const DiscreteMeasure& mu, std::size_t n, std::size_t d, std::span<const double> x,
                  double r);

// Same functionals on a decreasing-or-increasing list of radii at once.
std::vector<double> kernel_F_beta(const DiscreteMeasure& mu, double beta, std::span<const double> x,
                                  std::span<const double> radii);
std::vector<double> kernel_G_d(const DiscreteMeasure& mu, std::size_t n, std::size_t d,
                               std::span<const double> x, std::span<const double> radii);

class KernelContext {
 public:
  KernelContext(FieldSpec spec, DriftSpec drift, DiscreteMeasure measure, FieldMode mode);

  const FieldSpec& spec() const noexcept { return spec_; }
  const DriftSpec& drift() const noexcept { return drift_; }
  const DiscreteMeasure& measure() const noexcept { return measure_; }
  FieldMode mode() const noexcept { return mode_; }
  // f at atom i (d values).
  std::span<const double> drift_at_atom(std::size_t i) const {
    return {drift_values_.data() + i * spec_.d, spec_.d};
  }

 private:
  FieldSpec spec_;
  DriftSpec drift_;
  DiscreteMeasure measure_;
  FieldMode mode_;
  std::vector<double> drift_values_;
};

// P(||(X+f)(t) - (X+f)(s)||_max <= r).
double H_fX(const KernelContext& ctx, std::span<const double> t, std::span<const double> s, double r);

// E mu_Z(D(Z(t), r)) in the context's mode, max norm.
double expected_ball_mass(const KernelContext& ctx, std::span<const double> t, double r);
std::vector<double> expected_ball_mass(const KernelContext& ctx, std::span<const double> t,
                                       std::span<const double> radii);

}  // namespace packdim
