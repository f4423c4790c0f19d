#include "packdim/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "packdim/error.hpp"
#include "packdim/kernels.hpp"
#include "packdim/numerics.hpp"

namespace packdim {

nlohmann::json CheckReport::to_json() const {
  return {{"name", name},         {"trials", trials},   {"violations", violations},
          {"worst_ratio", worst_ratio}, {"witness", witness}, {"details", details},
          {"passed", passed()}};
}

void merge(CheckReport& a, const CheckReport& b) {
  a.trials += b.trials;
  a.violations += b.violations;
  if (b.worst_ratio > a.worst_ratio) {
    a.worst_ratio = b.worst_ratio;
    if (!b.witness.is_null()) a.witness = b.witness;
  }
}

namespace {

nlohmann::json measure_json(const DiscreteMeasure& m) {
  return {{"dim", m.dim()}, {"coords", m.coords()}, {"weights", m.weights()}};
}

}  // namespace

// ====================================================================
// Doubling

CheckReport check_doubling(const DiscreteMeasure& nu, double r, std::span<const double> lambdas, double M) {
  const std::size_t d = nu.dim();
  require(r > 0.0, "check_doubling: r must be positive");
  require(lambdas.size() == d, "check_doubling: need one lambda per coordinate");
  require(M >= 1.0, "check_doubling: M must be at least 1");
  for (double l : lambdas) require(l >= 1.0, "check_doubling: lambdas must be at least 1");
  std::vector<double> small(d, r), big(d);
  double prod = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    big[i] = lambdas[i] * r;
    prod *= lambdas[i];
  }
  double lhs = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double inner = rect_mass(nu, nu.atom(i), small);
    const double outer = rect_mass(nu, nu.atom(i), big);
    if (outer >= M * inner) lhs += nu.weight(i);
  }
  const double bound = std::pow(4.0, static_cast<double>(d)) * prod;
  CheckReport rep;
  rep.name = "doubling";
  rep.trials = 1;
  rep.worst_ratio = lhs * M / bound;
  rep.details = {{"lhs", lhs}, {"bound", bound / M}};
  if (lhs * M > bound) {
    rep.violations = 1;
    rep.witness = {{"measure", measure_json(nu)}, {"r", r},
                   {"lambdas", std::vector<double>(lambdas.begin(), lambdas.end())}, {"M", M}};
  }
  return rep;
}

// ====================================================================
// Scale doubling

CheckReport check_scale_doubling(const DiscreteMeasure& nu, double a, double eps, std::vector<double> r0s) {
  require(a > 0.0 && a < 1.0, "check_scale_doubling: a must lie in (0,1)");
  require(eps > 0.0, "check_scale_doubling: eps must be positive");
  require(!r0s.empty(), "check_scale_doubling: need at least one r0");
  for (double r0 : r0s) require(r0 > 0.0 && r0 <= 0.5, "check_scale_doubling: r0 must lie in (0, 1/2]");
  std::sort(r0s.begin(), r0s.end(), std::greater<>());
  const std::size_t d = nu.dim();
  // support diameter bounds the useful h range
  double span = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      lo = std::min(lo, nu.atom(i)[k]);
      hi = std::max(hi, nu.atom(i)[k]);
    }
    span = std::max(span, hi - lo);
  }
  const double gap = nu.min_atom_gap(Norm::max);
  const double r_floor = std::isfinite(gap) ? std::max(gap / 4.0, 1e-6) : 1e-3;
  std::vector<double> rs;
  for (int k = 2;; ++k) {
    const double r = std::pow(2.0, -0.5 * k);
    if (r < r_floor) break;
    rs.push_back(r);
  }
  // largest r at which each atom violates, 0 if never
  std::vector<double> worst_r(nu.size(), 0.0);
  double worst = 0.0;
  nlohmann::json witness;
  std::vector<double> h(d);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    auto x = nu.atom(i);
    for (double r : rs) {
      const double inner = ball_mass(nu, x, r, Norm::max);
      const double h0 = std::pow(r, a);
      std::size_t qmax = 0;
      while (h0 * std::pow(2.0, 0.5 * static_cast<double>(qmax)) <= 2.0 * span + 1.0) ++qmax;
      std::size_t combos = 1;
      for (std::size_t k = 0; k < d; ++k) combos *= qmax + 1;
      for (std::size_t c = 0; c < combos; ++c) {
        std::size_t code = c;
        double factor = 1.0;
        for (std::size_t k = 0; k < d; ++k, code /= qmax + 1) {
          h[k] = h0 * std::pow(2.0, 0.5 * static_cast<double>(code % (qmax + 1)));
          factor *= std::pow(4.0 * h[k] / r, 1.0 + eps);
        }
        const double outer = rect_mass(nu, x, h);
        const double ratio = outer / (inner * factor);
        if (ratio > worst) {
          worst = ratio;
          if (ratio > 1.0) witness = {{"atom", i}, {"r", r}, {"h", h}};
        }
        if (ratio > 1.0) worst_r[i] = std::max(worst_r[i], r);
      }
    }
  }
  CheckReport rep;
  rep.name = "scale-doubling";
  rep.trials = 1;
  rep.worst_ratio = worst;
  rep.witness = witness;
  nlohmann::json per = nlohmann::json::array();
  double prev = std::numeric_limits<double>::infinity();
  for (double r0 : r0s) {
    double mass = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (worst_r[i] > 0.0 && worst_r[i] < r0) mass += nu.weight(i);
    per.push_back({{"r0", r0}, {"exceptional_mass", mass}});
    if (mass > prev + 1e-15) ++rep.violations;
    prev = mass;
  }
  rep.details = {{"a", a}, {"eps", eps}, {"per_r0", per}};
  return rep;
}

// ====================================================================
// Integration by parts

const char* to_string(PartsFunction f) noexcept {
  return f == PartsFunction::exp_sum ? "exp(-sum x)" : "exp(-sum x^2)";
}

namespace {

struct GaussLegendre {
  std::vector<double> x, w;  // on [-1, 1]
  explicit GaussLegendre(int n) {
    for (int i = 1; i <= n; ++i) {
      double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      x.push_back(z);
      w.push_back(2.0 / ((1.0 - z * z) * dp * dp));
    }
  }
};

const GaussLegendre& gl() {
  static const GaussLegendre rule(24);
  return rule;
}

double f_value(PartsFunction f, std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += f == PartsFunction::exp_sum ? v : v * v;
  return std::exp(-s);
}

// d^d f / dx_1 ... dx_d
double f_mixed(PartsFunction f, std::span<const double> x) {
  double v = f_value(f, x);
  for (double xi : x) v *= f == PartsFunction::exp_sum ? -1.0 : -2.0 * xi;
  return v;
}

// Integration breakpoints along one axis: 0, atom coordinates, then unit
// panels out to where f is negligible.
std::vector<double> axis_breaks(std::vector<double> coords, PartsFunction f) {
  coords.push_back(0.0);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  const double reach = f == PartsFunction::exp_sum ? 45.0 : 7.0;
  const double end = coords.back() + reach;
  for (double t = coords.back() + 1.0; t < end; t += 1.0) coords.push_back(t);
  coords.push_back(end);
  return coords;
}

// integral over the cell of f_mixed, tensor Gauss-Legendre
double cell_integral(PartsFunction f, const std::vector<double>& lo, const std::vector<double>& hi) {
  const auto& rule = gl();
  const std::size_t d = lo.size(), q = rule.x.size();
  std::size_t combos = 1;
  for (std::size_t k = 0; k < d; ++k) combos *= q;
  std::vector<double> pt(d);
  double acc = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k, code /= q) {
      const std::size_t j = code % q;
      const double half = 0.5 * (hi[k] - lo[k]);
      pt[k] = lo[k] + half * (rule.x[j] + 1.0);
      w *= half * rule.w[j];
    }
    acc += w * f_mixed(f, pt);
  }
  return acc;
}

}  // namespace

CheckReport check_parts(const DiscreteMeasure& mu, PartsFunction f) {
  const std::size_t d = mu.dim();
  require(d == 1 || d == 2, "check_parts: d must be 1 or 2");
  require(mu.size() <= 32, "check_parts: at most 32 atoms");
  for (double c : mu.coords()) require(c >= 0.0, "check_parts: atoms must lie in [0, inf)^d");

  double lhs = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) lhs += mu.weight(i) * f_value(f, mu.atom(i));

  std::vector<std::vector<double>> breaks(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> c;
    for (std::size_t i = 0; i < mu.size(); ++i) c.push_back(mu.atom(i)[k]);
    breaks[k] = axis_breaks(c, f);
  }
  // g is constant on each open cell: mass of atoms with every coordinate
  // strictly below the cell's lower corner, or equal to it (half-open box,
  // evaluated at interior points of the cell).
  std::vector<std::size_t> ncell(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    ncell[k] = breaks[k].size() - 1;
    total *= ncell[k];
  }
  double rhs = 0.0;
  std::vector<double> lo(d), hi(d);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t code = c;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t j = code % ncell[k];
      code /= ncell[k];
      lo[k] = breaks[k][j];
      hi[k] = breaks[k][j + 1];
    }
    double g = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      bool in = true;
      for (std::size_t k = 0; k < d && in; ++k) in = mu.atom(i)[k] <= lo[k];
      if (in) g += mu.weight(i);
    }
    if (g == 0.0) continue;
    rhs += g * cell_integral(f, lo, hi);
  }
  if (d % 2 == 1) rhs = -rhs;

  const double rel = std::fabs(lhs - rhs) / std::max(std::fabs(lhs), 1e-300);
  const double tol = d == 1 ? 1e-6 : 1e-4;
  CheckReport rep;
  rep.name = "integration-by-parts";
  rep.trials = 1;
  rep.worst_ratio = rel / tol;
  rep.details = {{"lhs", lhs}, {"rhs", rhs}, {"relative_error", rel}, {"tolerance", tol},
                 {"function", to_string(f)}};
  if (rel > tol) {
    rep.violations = 1;
    rep.witness = {{"measure", measure_json(mu)}, {"function", to_string(f)}};
  }
  return rep;
}

// ====================================================================
// Gaussian interval bound

namespace {

std::vector<double> logspace(double lo, double hi, std::size_t per_decade) {
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
  std::vector<double> v;
  for (std::size_t i = 0; i <= n; ++i)
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n)));
  return v;
}

struct EqArScan {
  double sup = 0.0;
  std::array<double, 5> case_max{};  // rho = 0, I, II, III, IV
  std::array<std::size_t, 5> case_count{};
  nlohmann::json witness;
  std::size_t points = 0;
};

EqArScan scan_eq_ar(double beta, std::size_t per_decade) {
  const double c = std::pow(2.0, -1.0 / (1.0 - beta));
  std::vector<double> rho = logspace(1e-6, 10.0, per_decade);
  rho.insert(rho.begin(), 0.0);
  const std::vector<double> as = rho;
  const std::vector<double> rs = logspace(1e-6, c * (1.0 - 1e-9), per_decade);
  EqArScan s;
  for (double p : rho)
    for (double a : as)
      for (double r : rs) {
        const double prob = gaussian_interval_prob(p, a, r);
        const double pb = std::pow(p, beta), rb = std::pow(r, beta);
        const double ratio = prob * (a + pb) / rb;
        std::size_t cs;
        if (p == 0.0) cs = 0;
        else if (pb <= a && a <= rb) cs = 1;
        else if (a <= pb && p <= r) cs = 2;
        else if (a <= pb && r <= p) cs = 3;
        else cs = 4;
        ++s.points;
        ++s.case_count[cs];
        s.case_max[cs] = std::max(s.case_max[cs], ratio);
        if (ratio > s.sup) {
          s.sup = ratio;
          s.witness = {{"rho", p}, {"a", a}, {"r", r}, {"ratio", ratio}};
        }
      }
  return s;
}

}  // namespace

CheckReport check_eq_ar(double beta, EqArGrid grid) {
  require(beta > 0.0 && beta < 1.0, "check_eq_ar: beta must lie in (0,1)");
  require(grid.per_decade >= 1, "check_eq_ar: need at least one point per decade");
  const EqArScan coarse = scan_eq_ar(beta, grid.per_decade);
  const EqArScan fine = scan_eq_ar(beta, 2 * grid.per_decade);
  static const char* names[5] = {"rho=0", "I", "II", "III", "IV"};
  static const double limits[5] = {1.0, 2.0, 2.0, 4.0, 8.0};
  CheckReport rep;
  rep.name = "gaussian-interval-bound";
  rep.trials = coarse.points + fine.points;
  rep.worst_ratio = std::max(coarse.sup, fine.sup);
  nlohmann::json cases = nlohmann::json::object();
  for (std::size_t k = 0; k < 5; ++k) {
    const double m = std::max(coarse.case_max[k], fine.case_max[k]);
    cases[names[k]] = {{"max_ratio", m}, {"limit", limits[k]}, {"points", fine.case_count[k]}};
    if (m > limits[k]) ++rep.violations;
  }
  if (rep.worst_ratio > 8.0) ++rep.violations;
  const double drift = std::fabs(fine.sup - coarse.sup) / coarse.sup;
  if (drift > 0.1) ++rep.violations;
  rep.details = {{"beta", beta},         {"c", std::pow(2.0, -1.0 / (1.0 - beta))},
                 {"sup_coarse", coarse.sup}, {"sup_fine", fine.sup},
                 {"refinement_change", drift}, {"cases", cases}};
  if (rep.violations) rep.witness = fine.witness;
  return rep;
}

// ====================================================================
// Expected graph mass on nested subsets

namespace {

// Deepest level whose intervals each hold at least 4 atoms of the base
// level `resolution` (the same factor as the estimators' resolution guard).
std::size_t usable_depth(const EGammaSystem& sys, std::size_t resolution) {
  std::size_t n = 0;
  while (n + 1 < sys.source_level.size() && sys.source_level[n + 1] <= resolution &&
         sys.base.count(resolution) / sys.base.count(sys.source_level[n + 1]) >= 4)
    ++n;
  return n;
}

std::vector<double> level_max_ratios(const EGammaSystem& sys, const FieldSpec& spec, std::size_t resolution,
                                     std::size_t depth, nlohmann::json& witness) {
  const DiscreteMeasure mu = sys.measure(resolution);
  const KernelContext ctx(spec, DriftSpec{}, mu, FieldMode::graph);
  std::vector<double> out;
  for (std::size_t n = 2; n <= depth; ++n) {
    const double eta = sys.system.level(n).gap;
    const double r = std::pow(eta, sys.theta);
    const double scale = std::pow(eta, sys.gamma);
    double worst = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double ratio = expected_ball_mass(ctx, mu.atom(i), r) / scale;
      if (ratio > worst) {
        worst = ratio;
        witness = {{"level", n}, {"atom", mu.atom(i)[0]}, {"radius", r}, {"eta", eta}, {"ratio", ratio}};
      }
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace

CheckReport check_graph_expectation_bound(const EGammaSystem& sys, const FieldSpec& spec,
                                          std::size_t resolution, double bound) {
  spec.validate();
  require(spec.n == 1, "check_graph_expectation_bound: the parameter set lies in R");
  if (spec.hurst * spec.d >= 1.0) fail(ErrorCode::regime, "check_graph_expectation_bound: needs alpha*d < 1");
  std::string why;
  require(sys.conditions_hold(&why), "check_graph_expectation_bound: subsystem conditions fail: " + why);
  require(resolution <= sys.base.depth(), "check_graph_expectation_bound: resolution exceeds the base depth");
  const std::size_t depth = usable_depth(sys, resolution);
  if (depth < 2)
    fail(ErrorCode::insufficient_depth,
         "check_graph_expectation_bound: fewer than two levels resolved at base level " + std::to_string(resolution));
  CheckReport rep;
  rep.name = "graph-expectation-bound";
  nlohmann::json witness;
  const std::vector<double> base = level_max_ratios(sys, spec, resolution, depth, witness);
  rep.trials = base.size() * sys.measure(resolution).size();
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t k = 0; k < base.size(); ++k) {
    levels.push_back({{"level", k + 2}, {"eta", sys.system.level(k + 2).gap}, {"max_ratio", base[k]}});
    rep.worst_ratio = std::max(rep.worst_ratio, base[k]);
    if (base[k] > bound) ++rep.violations;
  }
  const bool nonincreasing = std::is_sorted(base.rbegin(), base.rend());
  rep.details = {{"resolution", resolution}, {"bound", bound}, {"levels", levels}, {"usable_levels", depth - 1},
                 {"nonincreasing", nonincreasing},
                 {"gamma", sys.gamma}, {"theta", sys.theta}};
  if (resolution + 1 <= sys.base.depth()) {
    nlohmann::json w2;
    const std::vector<double> fine = level_max_ratios(sys, spec, resolution + 1, depth, w2);
    double change = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k)
      change = std::max(change, std::fabs(fine[k] - base[k]) / base[k]);
    rep.details["refined_levels"] = fine;
    rep.details["refinement_change"] = change;
    if (change > 0.1) ++rep.violations;
  } else {
    rep.details["refinement_change"] = nullptr;
  }
  if (rep.violations) rep.witness = witness;
  return rep;
}

// ====================================================================
// Random sweeps

namespace {

std::size_t uniform_index(RandomStream& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.next_u64() % n);
}

// Atoms on the grid k/64 in [0,1]^d, weights c_i / 2^k.
DiscreteMeasure random_dyadic_measure(RandomStream& rng, std::size_t d) {
  const std::size_t n = 1 + uniform_index(rng, 64);
  std::vector<std::vector<double>> pts;
  while (pts.size() < n) {
    std::vector<double> p(d);
    for (double& v : p) v = static_cast<double>(uniform_index(rng, 65)) / 64.0;
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  std::size_t total = 64;
  while (total < n) total *= 2;
  total *= 2;
  std::vector<std::size_t> c(n, 1);
  for (std::size_t u = n; u < total; ++u) ++c[uniform_index(rng, n)];
  std::vector<double> coords, weights;
  for (std::size_t i = 0; i < n; ++i) {
    coords.insert(coords.end(), pts[i].begin(), pts[i].end());
    weights.push_back(static_cast<double>(c[i]) / static_cast<double>(total));
  }
  return DiscreteMeasure(d, coords, weights);
}

DiscreteMeasure random_measure(RandomStream& rng, std::size_t d, std::size_t max_atoms, double lo, double hi) {
  const std::size_t n = 1 + uniform_index(rng, max_atoms);
  std::vector<double> coords(n * d), weights(n);
  for (double& v : coords) v = lo + (hi - lo) * rng.uniform();
  double total = 0.0;
  for (double& w : weights) total += (w = 0.05 + rng.uniform());
  for (double& w : weights) w /= total;
  double s = std::accumulate(weights.begin(), weights.end(), 0.0);
  weights[0] += 1.0 - s;
  return DiscreteMeasure(d, coords, weights);
}

}  // namespace

CheckReport sweep_doubling(std::size_t trials, std::uint64_t seed) {
  CheckReport total;
  total.name = "doubling";
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::replica(Seed{seed}, t);
    const std::size_t d = 1 + t % 2;
    const DiscreteMeasure nu = random_dyadic_measure(rng, d);
    const double r = static_cast<double>(1 + uniform_index(rng, 16)) / 64.0;
    std::vector<double> lambdas(d);
    for (double& l : lambdas) l = 1.0 + static_cast<double>(uniform_index(rng, 13)) / 4.0;
    const double M = 1.0 + static_cast<double>(uniform_index(rng, 25)) / 8.0;
    merge(total, check_doubling(nu, r, lambdas, M));
  }
  total.details = {{"seed", seed}};
  return total;
}

CheckReport sweep_parts(std::size_t trials, std::uint64_t seed) {
  CheckReport total;
  total.name = "integration-by-parts";
  double worst_rel[2] = {0.0, 0.0};
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::replica(Seed{seed}, t);
    for (std::size_t d = 1; d <= 2; ++d) {
      const DiscreteMeasure mu = random_measure(rng, d, 32, 0.01, 3.0);
      for (PartsFunction f : {PartsFunction::exp_sum, PartsFunction::exp_sum_squares}) {
        const CheckReport one = check_parts(mu, f);
        worst_rel[d - 1] = std::max(worst_rel[d - 1], one.details["relative_error"].get<double>());
        merge(total, one);
      }
    }
  }
  total.details = {{"seed", seed}, {"worst_relative_error_d1", worst_rel[0]},
                   {"worst_relative_error_d2", worst_rel[1]}};
  return total;
}

CheckReport sweep_scale_doubling(std::size_t trials, std::uint64_t seed) {
  CheckReport total;
  total.name = "scale-doubling";
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::replica(Seed{seed}, t);
    const unsigned branches = 2 + static_cast<unsigned>(uniform_index(rng, 2));
    const double ratio = (0.2 + 0.7 * rng.uniform()) / branches;
    const std::size_t level = branches == 2 ? 7 : 4;
    const DiscreteMeasure nu = natural_measure(build_uniform_cantor(branches, ratio, level), level);
    const CheckReport one = check_scale_doubling(nu, 0.5, 0.5);
    per.push_back(one.details["per_r0"]);
    merge(total, one);
  }
  total.details = {{"seed", seed}, {"per_trial", per}};
  return total;
}

CheckReport check_kernel_chain(std::size_t trials, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "kernel-chain";
  rep.trials = trials;
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng = RandomStream::replica(Seed{seed}, t);
    const std::size_t d = 1 + t % 3;
    const DiscreteMeasure mu = random_measure(rng, d, 32, -1.0, 1.0);
    std::vector<double> x(d);
    if (rng.uniform() < 0.5) {
      auto a = mu.atom(uniform_index(rng, mu.size()));
      x.assign(a.begin(), a.end());
    } else {
      for (double& v : x) v = -1.5 + 3.0 * rng.uniform();
    }
    const double r = std::pow(10.0, -3.0 + 4.0 * rng.uniform());
    const double b = ball_mass(mu, x, r, Norm::euclidean);
    const double f = kernel_F_beta(mu, static_cast<double>(d), x, r);
    const double g = kernel_G_d(mu, 0, d, x, r);
    const double slack = std::min(f - b, g - f);
    if (slack < min_slack) {
      min_slack = slack;
      rep.witness = {{"trial", t}, {"d", d}, {"r", r}, {"ball", b}, {"F", f}, {"G", g}};
    }
    if (slack < -1e-12) ++rep.violations;
  }
  rep.worst_ratio = -min_slack;
  rep.details = {{"seed", seed}, {"min_slack", min_slack}};
  if (rep.violations == 0) rep.witness = nullptr;
  return rep;
}

}  // namespace packdim
