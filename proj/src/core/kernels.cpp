#include "packdim/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "packdim/error.hpp"

namespace packdim {

const char* to_string(FieldMode m) noexcept { return m == FieldMode::image ? "image" : "graph"; }

FieldMode field_mode_from_string(const std::string& s) {
  if (s == "image") return FieldMode::image;
  if (s == "graph") return FieldMode::graph;
  fail(ErrorCode::invalid_argument, "unknown mode '" + s + "' (expected image or graph)");
}

double kernel_Id(std::span<const double> x) {
  double v = 1.0;
  for (double xi : x) {
    const double a = std::fabs(xi);
    if (a > 1.0) v /= a;
  }
  return v;
}

double kernel_Ifd(std::span<const double> fx, std::span<const double> fy, double r) {
  require(r > 0.0, "kernel_Ifd: r must be positive");
  require(fx.size() == fy.size(), "kernel_Ifd: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double a = std::fabs(fy[i] - fx[i]) / r;
    if (a > 1.0) v /= a;
  }
  return v;
}

namespace {

void check_radii(std::span<const double> radii) {
  for (double r : radii) require(r > 0.0, "kernel: radii must be positive");
}

}  // namespace

std::vector<double> kernel_F_beta(const DiscreteMeasure& mu, double beta, std::span<const double> x,
                                  std::span<const double> radii) {
  require(x.size() == mu.dim(), "kernel_F_beta: dimension mismatch");
  require(beta > 0.0, "kernel_F_beta: beta must be positive");
  check_radii(radii);
  std::vector<double> out(radii.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double dist = distance(mu.atom(i), x, Norm::euclidean);
    const double w = mu.weight(i);
    for (std::size_t j = 0; j < radii.size(); ++j)
      out[j] += dist <= radii[j] ? w : w * std::pow(radii[j] / dist, beta);
  }
  for (double& v : out) v = std::min(v, 1.0);
  return out;
}

double kernel_F_beta(const DiscreteMeasure& mu, double beta, std::span<const double> x, double r) {
  return kernel_F_beta(mu, beta, x, std::span<const double>(&r, 1))[0];
}

std::vector<double> kernel_G_d(const DiscreteMeasure& mu, std::size_t n, std::size_t d,
                               std::span<const double> x, std::span<const double> radii) {
  require(d >= 1 && n + d == mu.dim() && x.size() == mu.dim(), "kernel_G_d: dimension mismatch");
  check_radii(radii);
  std::vector<double> out(radii.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto y = mu.atom(i);
    double slice_dist = 0.0;
    for (std::size_t k = 0; k < n; ++k) slice_dist = std::max(slice_dist, std::fabs(y[k] - x[k]));
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double r = radii[j];
      if (slice_dist > r) continue;
      double v = mu.weight(i);
      for (std::size_t k = n; k < n + d; ++k) {
        const double a = std::fabs(y[k] - x[k]) / r;
        if (a > 1.0) v /= a;
      }
      out[j] += v;
    }
  }
  for (double& v : out) v = std::min(v, 1.0);
  return out;
}

double kernel_G_d(const DiscreteMeasure& mu, std::size_t n, std::size_t d, std::span<const double> x,
                  double r) {
  return kernel_G_d(mu, n, d, x, std::span<const double>(&r, 1))[0];
}

// ====================================================================

KernelContext::KernelContext(FieldSpec spec, DriftSpec drift, DiscreteMeasure measure, FieldMode mode)
    : spec_(spec), drift_(std::move(drift)), measure_(std::move(measure)), mode_(mode) {
  spec_.validate();
  require(measure_.dim() == spec_.n, "KernelContext: measure dimension must equal the domain dimension");
  drift_.validate(spec_);
  drift_values_.assign(measure_.size() * spec_.d, 0.0);
  for (std::size_t i = 0; i < measure_.size(); ++i)
    drift_.evaluate(measure_.atom(i), std::span<double>(drift_values_.data() + i * spec_.d, spec_.d));
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  if (a.size() == 1) return std::fabs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double maxdist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::fabs(a[k] - b[k]));
  return s;
}

double product_prob(double rho, std::span<const double> ft, std::span<const double> fs, double r) {
  double p = 1.0;
  for (std::size_t i = 0; i < ft.size() && p > 0.0; ++i)
    p *= gaussian_interval_prob(rho, ft[i] - fs[i], r);
  return p;
}

}  // namespace

double H_fX(const KernelContext& ctx, std::span<const double> t, std::span<const double> s, double r) {
  const FieldSpec& sp = ctx.spec();
  require(t.size() == sp.n && s.size() == sp.n, "H_fX: point dimension mismatch");
  require(r >= 0.0, "H_fX: negative radius");
  std::vector<double> ft(sp.d), fs(sp.d);
  ctx.drift().evaluate(t, ft);
  ctx.drift().evaluate(s, fs);
  const double rho = std::pow(euclid(t, s), sp.hurst);
  return product_prob(rho, ft, fs, r);
}

std::vector<double> expected_ball_mass(const KernelContext& ctx, std::span<const double> t,
                                       std::span<const double> radii) {
  const FieldSpec& sp = ctx.spec();
  require(t.size() == sp.n, "expected_ball_mass: point dimension mismatch");
  check_radii(radii);
  std::vector<double> ft(sp.d);
  ctx.drift().evaluate(t, ft);
  const DiscreteMeasure& mu = ctx.measure();
  const bool graph = ctx.mode() == FieldMode::graph;
  std::vector<double> out(radii.size(), 0.0);
  const double rmax = *std::max_element(radii.begin(), radii.end());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto s = mu.atom(i);
    const double gap = graph ? maxdist(s, t) : 0.0;
    if (gap > rmax) continue;
    const double rho = std::pow(euclid(t, s), sp.hurst);
    auto fs = ctx.drift_at_atom(i);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      if (gap > radii[j]) continue;
      out[j] += mu.weight(i) * product_prob(rho, ft, fs, radii[j]);
    }
  }
  for (double& v : out) v = std::min(v, 1.0);
  return out;
}

double expected_ball_mass(const KernelContext& ctx, std::span<const double> t, double r) {
  return expected_ball_mass(ctx, t, std::span<const double>(&r, 1))[0];
}

}  // namespace packdim
