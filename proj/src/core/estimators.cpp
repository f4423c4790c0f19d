#include "packdim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "packdim/error.hpp"
#include "packdim/parallel.hpp"

namespace packdim {

void ScaleGrid::validate() const {
  require(j_min >= 1, "ScaleGrid: j_min must be at least 1");
  require(j_max - j_min >= 3, "ScaleGrid: need at least 4 scales");
  require(base > 1.0, "ScaleGrid: base must exceed 1");
}

std::vector<double> ScaleGrid::radii() const {
  validate();
  std::vector<double> r;
  for (int j = j_min; j <= j_max; ++j) r.push_back(std::pow(base, -static_cast<double>(j)));
  return r;
}

const char* to_string(ExponentMethod m) noexcept {
  return m == ExponentMethod::tail_max ? "tail-max" : "regression";
}

ExponentMethod exponent_method_from_string(const std::string& s) {
  if (s == "tail-max" || s == "tail_max") return ExponentMethod::tail_max;
  if (s == "regression") return ExponentMethod::regression;
  fail(ErrorCode::invalid_argument, "unknown method '" + s + "' (expected tail-max or regression)");
}

// ====================================================================
// Scaling exponents

ExponentEstimate scaling_exponent(std::span<const double> radii, std::span<const double> values,
                                  ExponentMethod method) {
  require(radii.size() == values.size(), "scaling_exponent: radii and values differ in length");
  ExponentEstimate e;
  e.method = method;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    double v = values[i];
    require(r > 0.0 && r < 1.0, "scaling_exponent: radii must lie in (0,1)");
    require(v >= 0.0 && v <= 1.0 + 1e-12, "scaling_exponent: values must lie in [0,1]");
    v = std::min(v, 1.0);
    const bool used = v > 0.0;
    if (!used) e.dropped_zero = true;
    e.per_scale.push_back({r, v, used ? std::log(v) / std::log(r) : std::numeric_limits<double>::quiet_NaN(), used});
    if (used) usable.push_back(i);
  }
  if (usable.size() < 4)
    fail(ErrorCode::insufficient_scales, "scaling_exponent: fewer than 4 usable scales");

  if (method == ExponentMethod::tail_max) {
    std::vector<std::size_t> by_r = usable;
    std::stable_sort(by_r.begin(), by_r.end(),
                     [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
    const std::size_t tail = (by_r.size() + 2) / 3;
    e.window.assign(by_r.begin(), by_r.begin() + static_cast<std::ptrdiff_t>(tail));
    std::sort(e.window.begin(), e.window.end());
    e.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i : e.window) e.value = std::max(e.value, e.per_scale[i].ratio);
  } else {
    e.window = usable;
    double mx = 0.0, my = 0.0;
    for (std::size_t i : usable) {
      mx += std::log(radii[i]);
      my += std::log(e.per_scale[i].value);
    }
    mx /= static_cast<double>(usable.size());
    my /= static_cast<double>(usable.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i : usable) {
      const double dx = std::log(radii[i]) - mx;
      sxy += dx * (std::log(e.per_scale[i].value) - my);
      sxx += dx * dx;
    }
    require(sxx > 0.0, "scaling_exponent: radii must not all coincide");
    e.value = sxy / sxx;
  }
  return e;
}

// ====================================================================
// Per-atom estimators

namespace {

using AtomProfile = std::function<std::vector<double>(std::size_t atom)>;

void resolution_guard(double min_gap, const std::vector<double>& radii) {
  const double finest = radii.back();
  if (std::isfinite(min_gap) && finest < 4.0 * min_gap)
    fail(ErrorCode::resolution,
         "finest scale r = " + std::to_string(finest) + " is below 4x the minimal atom gap " +
             std::to_string(min_gap));
}

DimensionEstimate over_atoms(const DiscreteMeasure& mu, const ScaleGrid& grid,
                             const EstimatorOptions& opt, double min_gap, const AtomProfile& profile) {
  DimensionEstimate out;
  out.grid = grid;
  out.method = opt.method;
  out.radii = grid.radii();
  resolution_guard(min_gap, out.radii);

  const std::size_t m = mu.dim();
  out.guard_status = "ok";
  if (opt.interior_only) {
    std::vector<double> lo(m, std::numeric_limits<double>::infinity()), hi(m, -lo[0]);
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t k = 0; k < m; ++k) {
        lo[k] = std::min(lo[k], mu.atom(i)[k]);
        hi[k] = std::max(hi[k], mu.atom(i)[k]);
      }
    const double margin = out.radii.front();
    for (std::size_t i = 0; i < mu.size(); ++i) {
      bool inside = true;
      // flat axes (no extent) carry no boundary
      for (std::size_t k = 0; k < m && inside; ++k)
        inside = hi[k] == lo[k] || (mu.atom(i)[k] - lo[k] >= margin && hi[k] - mu.atom(i)[k] >= margin);
      if (inside) out.atoms.push_back(i);
    }
    if (out.atoms.empty()) out.guard_status = "boundary-fallback";
  }
  if (out.atoms.empty()) {
    out.atoms.resize(mu.size());
    std::iota(out.atoms.begin(), out.atoms.end(), 0);
  }

  const std::size_t ns = out.radii.size();
  out.tables.assign(out.atoms.size() * ns, 0.0);
  out.atom_values.assign(out.atoms.size(), 0.0);
  parallel_for(out.atoms.size(), [&](std::size_t a) {
    const std::vector<double> v = profile(out.atoms[a]);
    std::copy(v.begin(), v.end(), out.tables.begin() + static_cast<std::ptrdiff_t>(a * ns));
    out.atom_values[a] = scaling_exponent(out.radii, v, opt.method).value;
  });
  std::size_t best = 0;
  for (std::size_t a = 1; a < out.atoms.size(); ++a)
    if (out.atom_values[a] < out.atom_values[best]) best = a;
  out.argmin_atom = out.atoms[best];
  out.value = out.atom_values[best];
  out.at_argmin = scaling_exponent(
      out.radii, std::span<const double>(out.tables.data() + best * ns, ns), opt.method);
  return out;
}

}  // namespace

DimensionEstimate dim_measure_ballmass(const DiscreteMeasure& mu, const ScaleGrid& grid,
                                       const EstimatorOptions& opt, Norm norm) {
  const auto radii = grid.radii();
  if (mu.dim() == 1) {
    // sorted atoms + prefix sums give each ball mass by two binary searches
    std::vector<std::size_t> order(mu.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return mu.atom(a)[0] < mu.atom(b)[0]; });
    std::vector<double> xs(mu.size()), prefix(mu.size() + 1, 0.0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      xs[k] = mu.atom(order[k])[0];
      prefix[k + 1] = prefix[k] + mu.weight(order[k]);
    }
    return over_atoms(mu, grid, opt, mu.min_atom_gap(norm), [&](std::size_t i) {
      std::vector<double> v;
      const double x = mu.atom(i)[0];
      for (double r : radii) {
        const auto lo = std::lower_bound(xs.begin(), xs.end(), x - r) - xs.begin();
        const auto hi = std::upper_bound(xs.begin(), xs.end(), x + r) - xs.begin();
        v.push_back(std::min(1.0, prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]));
      }
      return v;
    });
  }
  return over_atoms(mu, grid, opt, mu.min_atom_gap(norm), [&](std::size_t i) {
    std::vector<double> v;
    for (double r : radii) v.push_back(ball_mass(mu, mu.atom(i), r, norm));
    return v;
  });
}

DimensionEstimate dim_profile_beta(const DiscreteMeasure& mu, double beta, const ScaleGrid& grid,
                                   const EstimatorOptions& opt) {
  require(beta > 0.0, "dim_profile_beta: beta must be positive");
  const auto radii = grid.radii();
  return over_atoms(mu, grid, opt, mu.min_atom_gap(Norm::euclidean),
                    [&](std::size_t i) { return kernel_F_beta(mu, beta, mu.atom(i), radii); });
}

DimensionEstimate dim_measure_Gd(const DiscreteMeasure& mu, std::size_t n, std::size_t d,
                                 const ScaleGrid& grid, const EstimatorOptions& opt) {
  require(d >= 1 && n + d == mu.dim(), "dim_measure_Gd: n + d must equal the measure dimension");
  const auto radii = grid.radii();
  return over_atoms(mu, grid, opt, mu.min_atom_gap(Norm::max),
                    [&](std::size_t i) { return kernel_G_d(mu, n, d, mu.atom(i), radii); });
}

DimensionEstimate dim_Z_mu(const KernelContext& ctx, const ScaleGrid& grid, const EstimatorOptions& opt) {
  const auto radii = grid.radii();
  const DiscreteMeasure& mu = ctx.measure();
  return over_atoms(mu, grid, opt, mu.min_atom_gap(Norm::max),
                    [&](std::size_t i) { return expected_ball_mass(ctx, mu.atom(i), radii); });
}

std::vector<double> expected_ball_mass_euclidean(const KernelContext& ctx, std::span<const double> t,
                                                 std::span<const double> radii) {
  const FieldSpec& sp = ctx.spec();
  require(sp.d == 1, "Euclidean expected ball mass is implemented for d = 1");
  require(t.size() == sp.n, "expected_ball_mass_euclidean: point dimension mismatch");
  std::vector<double> ft(1);
  ctx.drift().evaluate(t, ft);
  const DiscreteMeasure& mu = ctx.measure();
  const bool graph = ctx.mode() == FieldMode::graph;
  std::vector<double> out(radii.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double dist = distance(mu.atom(i), t, Norm::euclidean);
    const double rho = std::pow(dist, sp.hurst);
    const double a = ft[0] - ctx.drift_at_atom(i)[0];
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double r = radii[j];
      if (graph && dist > r) continue;
      const double reach = graph ? std::sqrt(std::max(0.0, r * r - dist * dist)) : r;
      out[j] += mu.weight(i) * gaussian_interval_prob(rho, a, reach);
    }
  }
  for (double& v : out) v = std::min(v, 1.0);
  return out;
}

DimensionEstimate dim_Z_mu_euclidean(const KernelContext& ctx, const ScaleGrid& grid,
                                     const EstimatorOptions& opt) {
  const auto radii = grid.radii();
  const DiscreteMeasure& mu = ctx.measure();
  return over_atoms(mu, grid, opt, mu.min_atom_gap(Norm::euclidean), [&](std::size_t i) {
    return expected_ball_mass_euclidean(ctx, mu.atom(i), radii);
  });
}

// ====================================================================
// Box counting

namespace {

struct CellHash {
  std::size_t operator()(const std::vector<long long>& c) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (long long v : c) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

std::vector<long long> cell_of(std::span<const double> p, double eps) {
  std::vector<long long> c(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) c[k] = static_cast<long long>(std::floor(p[k] / eps));
  return c;
}

// Fraction of points with another point within h in max norm.
double fraction_with_close_neighbour(std::span<const double> pts, std::size_t m, double h) {
  const std::size_t np = pts.size() / m;
  if (np < 2) return 1.0;
  std::unordered_map<std::vector<long long>, std::vector<std::size_t>, CellHash> cells;
  for (std::size_t i = 0; i < np; ++i) cells[cell_of(pts.subspan(i * m, m), h)].push_back(i);
  std::size_t close = 0;
  std::size_t combos = 1;
  for (std::size_t k = 0; k < m; ++k) combos *= 3;
  for (std::size_t i = 0; i < np; ++i) {
    auto p = pts.subspan(i * m, m);
    const auto base = cell_of(p, h);
    bool found = false;
    for (std::size_t c = 0; c < combos && !found; ++c) {
      auto key = base;
      std::size_t code = c;
      for (std::size_t k = 0; k < m; ++k, code /= 3) key[k] += static_cast<long long>(code % 3) - 1;
      auto it = cells.find(key);
      if (it == cells.end()) continue;
      for (std::size_t j : it->second) {
        if (j == i) continue;
        double dmax = 0.0;
        for (std::size_t k = 0; k < m; ++k) dmax = std::max(dmax, std::fabs(pts[j * m + k] - p[k]));
        if (dmax <= h) {
          found = true;
          break;
        }
      }
    }
    if (found) ++close;
  }
  return static_cast<double>(close) / static_cast<double>(np);
}

}  // namespace

std::size_t box_count(std::span<const double> points, std::size_t m, double eps) {
  require(m > 0 && !points.empty() && points.size() % m == 0, "box_count: bad point array");
  require(eps > 0.0, "box_count: eps must be positive");
  const std::size_t np = points.size() / m;
  std::vector<long long> cells(np * m);
  for (std::size_t i = 0; i < np * m; ++i) cells[i] = static_cast<long long>(std::floor(points[i] / eps));
  std::vector<std::size_t> idx(np);
  std::iota(idx.begin(), idx.end(), 0);
  auto row = [&](std::size_t i) { return cells.begin() + static_cast<std::ptrdiff_t>(i * m); };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(m), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(m));
  });
  std::size_t count = 1;
  for (std::size_t k = 1; k < np; ++k)
    if (!std::equal(row(idx[k]), row(idx[k]) + static_cast<std::ptrdiff_t>(m), row(idx[k - 1]))) ++count;
  return count;
}

BoxEstimate minkowski_regression(std::span<const double> points, std::size_t m, const ScaleGrid& grid,
                                 ExponentMethod method) {
  require(m > 0 && !points.empty() && points.size() % m == 0, "minkowski_regression: bad point array");
  const auto radii = grid.radii();
  const double h = radii.back() / 4.0;
  if (fraction_with_close_neighbour(points, m, h) < 0.5)
    fail(ErrorCode::resolution, "finest scale eps = " + std::to_string(radii.back()) +
                                    " is below 4x the median nearest-neighbour spacing");
  BoxEstimate out;
  std::vector<double> inv;
  for (double r : radii) {
    out.counts.push_back(box_count(points, m, r));
    inv.push_back(1.0 / static_cast<double>(out.counts.back()));
  }
  out.exponent = scaling_exponent(radii, inv, method);
  return out;
}

std::vector<double> densify_polyline(std::span<const double> points, std::size_t m, double max_step) {
  require(m > 0 && !points.empty() && points.size() % m == 0, "densify_polyline: bad point array");
  require(max_step > 0.0, "densify_polyline: step must be positive");
  const std::size_t np = points.size() / m;
  std::vector<double> out(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 1; i < np; ++i) {
    auto a = points.subspan((i - 1) * m, m);
    auto b = points.subspan(i * m, m);
    double len = 0.0;
    for (std::size_t k = 0; k < m; ++k) len = std::max(len, std::fabs(b[k] - a[k]));
    const auto pieces = static_cast<std::size_t>(std::ceil(len / max_step));
    for (std::size_t s = 1; s < pieces; ++s) {
      const double u = static_cast<double>(s) / static_cast<double>(pieces);
      for (std::size_t k = 0; k < m; ++k) out.push_back(a[k] + u * (b[k] - a[k]));
    }
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace packdim
