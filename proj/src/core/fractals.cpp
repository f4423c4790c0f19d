#include "packdim/fractals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "packdim/error.hpp"

namespace packdim {

namespace {

constexpr std::uint64_t kMaxIntervals = 1000000;
constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

// floor(x), except that values within relative 1e-9 below an integer are
// taken as that integer (absorbs exp/log roundoff such as 64^(1/2)).
long double snapped_floor(long double x) {
  const long double r = std::round(x);
  if (std::fabs(x - r) <= 1e-9L * std::max(1.0L, r)) return r;
  return std::floor(x);
}

long double snapped_ceil(long double x) {
  const long double r = std::round(x);
  if (std::fabs(x - r) <= 1e-9L * std::max(1.0L, r)) return r;
  return std::ceil(x);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

// ====================================================================
// NestedIntervalSystem

NestedIntervalSystem::NestedIntervalSystem(double origin, std::vector<IntervalLevel> levels,
                                           std::optional<CantorParams> cantor)
    : origin_(origin), levels_(std::move(levels)), cantor_(cantor) {
  require(!levels_.empty(), "NestedIntervalSystem: missing root level");
  require(std::isfinite(origin_), "NestedIntervalSystem: non-finite origin");
  IntervalLevel& root = levels_[0];
  root.branches = 1;
  root.offsets = {0.0};
  root.gap = 0.0;
  validate();
}

std::optional<double> NestedIntervalSystem::similarity_dimension() const {
  if (!cantor_) return std::nullopt;
  return std::log(static_cast<double>(cantor_->branches)) / std::log(1.0 / cantor_->ratio);
}

std::uint64_t NestedIntervalSystem::count(std::size_t k) const {
  require(k <= depth(), "NestedIntervalSystem: level beyond depth");
  std::uint64_t c = 1;
  for (std::size_t j = 1; j <= k; ++j) c = sat_mul(c, levels_[j].branches);
  return c;
}

std::vector<double> NestedIntervalSystem::left_endpoints(std::size_t k) const {
  const std::uint64_t c = count(k);
  if (c > kMaxIntervals)
    fail(ErrorCode::scale_unrepresentable,
         "level " + std::to_string(k) + " has more than 10^6 intervals");
  std::vector<double> left{origin_};
  for (std::size_t j = 1; j <= k; ++j) {
    std::vector<double> next;
    next.reserve(left.size() * levels_[j].branches);
    for (double p : left)
      for (double o : levels_[j].offsets) next.push_back(p + o);
    left.swap(next);
  }
  return left;
}

void NestedIntervalSystem::validate() const {
  const auto bad = [](std::size_t k, const std::string& what) {
    fail(ErrorCode::geometry_infeasible, "level " + std::to_string(k) + ": " + what);
  };
  if (!(levels_[0].length > 0.0)) bad(0, "root length must be positive");
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    const IntervalLevel& lv = levels_[k];
    const double parent = levels_[k - 1].length;
    if (!(lv.length > 0.0) || !std::isfinite(lv.length)) bad(k, "length must be positive");
    if (lv.branches == 0 || lv.offsets.size() != lv.branches) bad(k, "offset count must equal m_k");
    const double tol = 1e-12 * parent;
    if (lv.offsets.front() < -tol) bad(k, "child starts left of its parent");
    if (lv.offsets.back() + lv.length > parent + tol) bad(k, "child ends right of its parent");
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < lv.branches; ++j) {
      const double g = lv.offsets[j] - lv.offsets[j - 1] - lv.length;
      if (!(g > 0.0)) bad(k, "children overlap");
      min_gap = std::min(min_gap, g);
    }
    if (lv.branches > 1 && std::fabs(min_gap - lv.gap) > 1e-9 * lv.gap)
      bad(k, "recorded gap differs from the child spacing");
    const double fit = static_cast<double>(lv.branches) * lv.length +
                       static_cast<double>(lv.branches - 1) * lv.gap;
    if (fit > parent * (1.0 + 1e-12)) bad(k, "children do not fit in the parent");
  }
}

bool NestedIntervalSystem::satisfies_strict_packing() const {
  for (std::size_t k = 1; k < levels_.size(); ++k) {
    const IntervalLevel& lv = levels_[k];
    if (lv.branches < 2) continue;
    if (!(lv.length < lv.gap)) return false;
    if (static_cast<double>(lv.branches) * (lv.gap + lv.length) > levels_[k - 1].length)
      return false;
  }
  return true;
}

NestedIntervalSystem build_uniform_cantor(unsigned branches, double ratio, std::size_t levels) {
  require(branches >= 2, "build_uniform_cantor: need at least 2 branches");
  require(ratio > 0.0 && ratio < 1.0, "build_uniform_cantor: ratio must lie in (0,1)");
  require(levels <= 40, "build_uniform_cantor: at most 40 levels");
  if (static_cast<double>(branches) * ratio >= 1.0)
    fail(ErrorCode::geometry_infeasible, "build_uniform_cantor: branches * ratio must be < 1");
  std::vector<IntervalLevel> lv(1);
  lv[0].length = 1.0;
  for (std::size_t k = 1; k <= levels; ++k) {
    const double parent = lv[k - 1].length;
    IntervalLevel l;
    l.length = std::pow(ratio, static_cast<double>(k));
    l.branches = branches;
    l.gap = (parent - branches * l.length) / (branches - 1);
    for (unsigned j = 0; j < branches; ++j) l.offsets.push_back(j * (l.length + l.gap));
    // pin the last child flush with the parent's right end
    l.offsets.back() = parent - l.length;
    lv.push_back(std::move(l));
  }
  return NestedIntervalSystem(0.0, std::move(lv), CantorParams{branches, ratio});
}

// ====================================================================
// Symbolic systems

SymbolicScaleSystem build_tx_system(double beta, double delta0, std::size_t levels) {
  require(beta > 0.0 && beta < 1.0, "build_tx_system: beta must lie in (0,1)");
  require(delta0 > 0.0 && delta0 < 0.5, "build_tx_system: delta0 must lie in (0,1/2)");
  require(levels <= 60, "build_tx_system: at most 60 levels");
  SymbolicScaleSystem s;
  s.beta = beta;
  s.delta0 = delta0;
  const long double b = beta;
  s.log_inv_delta.push_back(LogValue::from_log(-std::log(static_cast<long double>(delta0))));
  s.log_inv_eta.push_back({});
  s.log_m.push_back({});
  s.m.push_back(1);
  long double sum_logm = 0.0L;
  for (std::size_t k = 1; k <= levels; ++k) {
    const long double L_prev = s.log_inv_delta.back().logv;
    const long double H = (L_prev + kLn2) / (1.0L - b);
    long double logm;
    std::uint64_t m = 0;
    const long double bh = b * H;
    if (bh <= 53.0L * kLn2) {
      const long double mf = snapped_floor(std::exp(bh));
      m = static_cast<std::uint64_t>(mf);
      logm = std::log(mf);
    } else {
      logm = bh;
    }
    sum_logm += logm;
    const long double L = std::max(H + kLn2, std::ldexp(sum_logm, static_cast<int>(k + 1)));
    if (!std::isfinite(L))
      fail(ErrorCode::scale_unrepresentable,
           "build_tx_system: log(1/delta) overflows at level " + std::to_string(k));
    s.log_inv_eta.push_back(LogValue::from_log(H));
    s.log_m.push_back(LogValue::from_log(logm));
    s.m.push_back(m);
    s.log_inv_delta.push_back(LogValue::from_log(L));
  }
  return s;
}

SymbolicScaleSystem symbolic_uniform_cantor(unsigned branches, double ratio, std::size_t levels) {
  require(branches >= 2 && ratio > 0.0 && ratio < 1.0, "symbolic_uniform_cantor: bad parameters");
  if (static_cast<double>(branches) * ratio >= 1.0)
    fail(ErrorCode::geometry_infeasible, "symbolic_uniform_cantor: branches * ratio must be < 1");
  SymbolicScaleSystem s;
  s.beta = std::log(static_cast<double>(branches)) / std::log(1.0 / ratio);
  s.delta0 = 1.0;
  const long double lr = -std::log(static_cast<long double>(ratio));
  const long double gap_factor =
      (1.0L - static_cast<long double>(branches) * ratio) / (branches - 1);
  s.log_inv_delta.push_back({});
  s.log_inv_eta.push_back({});
  s.log_m.push_back({});
  s.m.push_back(1);
  for (std::size_t k = 1; k <= levels; ++k) {
    s.log_inv_delta.push_back(LogValue::from_log(static_cast<long double>(k) * lr));
    s.log_inv_eta.push_back(
        LogValue::from_log(static_cast<long double>(k - 1) * lr - std::log(gap_factor)));
    s.log_m.push_back(LogValue::from_log(std::log(static_cast<long double>(branches))));
    s.m.push_back(branches);
  }
  return s;
}

SymbolicScaleSystem to_symbolic(const NestedIntervalSystem& sys) {
  SymbolicScaleSystem s;
  s.delta0 = sys.level(0).length;
  if (auto dim = sys.similarity_dimension()) s.beta = *dim;
  s.log_inv_delta.push_back(LogValue::from_log(-std::log(static_cast<long double>(s.delta0))));
  s.log_inv_eta.push_back({});
  s.log_m.push_back({});
  s.m.push_back(1);
  for (std::size_t k = 1; k <= sys.depth(); ++k) {
    const IntervalLevel& lv = sys.level(k);
    s.log_inv_delta.push_back(LogValue::from_log(-std::log(static_cast<long double>(lv.length))));
    s.log_inv_eta.push_back(lv.branches > 1
                                ? LogValue::from_log(-std::log(static_cast<long double>(lv.gap)))
                                : s.log_inv_delta.back());
    s.log_m.push_back(LogValue::from_log(std::log(static_cast<long double>(lv.branches))));
    s.m.push_back(lv.branches);
  }
  return s;
}

NestedIntervalSystem realize_explicit(const SymbolicScaleSystem& sys, std::size_t maxlevel) {
  require(maxlevel <= sys.depth(), "realize_explicit: level beyond depth");
  std::vector<IntervalLevel> lv(1);
  lv[0].length = sys.delta0;
  std::uint64_t total = 1;
  for (std::size_t k = 1; k <= maxlevel; ++k) {
    const std::string where = "realize_explicit: level " + std::to_string(k);
    if (sys.log_inv_delta[k].logv > 700.0L)
      fail(ErrorCode::scale_unrepresentable, where + " has delta below the double range");
    if (sys.m[k] == 0)
      fail(ErrorCode::scale_unrepresentable, where + " has more than 2^53 branches");
    total = sat_mul(total, sys.m[k]);
    if (total > kMaxIntervals)
      fail(ErrorCode::scale_unrepresentable, where + " needs more than 10^6 intervals");
    IntervalLevel l;
    l.length = static_cast<double>(std::exp(-sys.log_inv_delta[k].logv));
    l.gap = static_cast<double>(std::exp(-sys.log_inv_eta[k].logv));
    l.branches = sys.m[k];
    for (std::size_t j = 0; j < l.branches; ++j)
      l.offsets.push_back(static_cast<double>(j) * (l.length + l.gap));
    lv.push_back(std::move(l));
  }
  return NestedIntervalSystem(0.0, std::move(lv));
}

DiscreteMeasure natural_measure(const NestedIntervalSystem& sys, std::size_t level) {
  require(level <= sys.depth(), "natural_measure: level beyond depth");
  return DiscreteMeasure::uniform(1, sys.left_endpoints(level));
}

// ====================================================================
// Covering numbers

LogValue covering_count(const SymbolicScaleSystem& sys, LogValue log_inv_eps) {
  const long double x = log_inv_eps.logv;
  const auto& L = sys.log_inv_delta;
  const auto near = [](long double a, long double b) {
    return std::fabs(a - b) <= 1e-12L * std::max(1.0L, std::fabs(b));
  };
  if (x < L[0].logv && !near(x, L[0].logv))
    fail(ErrorCode::out_of_range, "covering_count: eps exceeds delta_0");
  if (near(x, L[0].logv) || x <= L[0].logv) return LogValue{};
  // k with L_{k-1} < x <= L_k
  std::size_t k = 1;
  while (k <= sys.depth() && x > L[k].logv && !near(x, L[k].logv)) ++k;
  if (k > sys.depth())
    fail(ErrorCode::out_of_range, "covering_count: eps is finer than the deepest level");
  long double acc = 0.0L;
  for (std::size_t j = 1; j < k; ++j) acc += sys.log_m[j].logv;
  long double last = sys.log_m[k].logv;
  const long double ratio_log = near(x, L[k].logv) ? L[k].logv - L[k - 1].logv : x - L[k - 1].logv;
  if (ratio_log < 53.0L * kLn2) {
    last = std::min(last, std::log(snapped_ceil(std::exp(ratio_log))));
  } else {
    last = std::min(last, ratio_log);
  }
  return LogValue::from_log(acc + last);
}

LogValue covering_count(const NestedIntervalSystem& sys, LogValue log_inv_eps) {
  return covering_count(to_symbolic(sys), log_inv_eps);
}

MinkowskiBounds minkowski_bounds(const SymbolicScaleSystem& sys, const std::vector<LogValue>& grid) {
  require(!grid.empty(), "minkowski_bounds: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i - 1] <= grid[i], "minkowski_bounds: grid must be sorted from coarse to fine");
  MinkowskiBounds out;
  for (const LogValue& g : grid) {
    require(g.logv > 0.0L, "minkowski_bounds: scales must be below 1");
    const LogValue n = covering_count(sys, g);
    out.table.push_back({g, n, static_cast<double>(n.logv / g.logv)});
  }
  const std::size_t tail = (out.table.size() + 2) / 3;
  out.limsup = -std::numeric_limits<double>::infinity();
  out.liminf = std::numeric_limits<double>::infinity();
  for (std::size_t i = out.table.size() - tail; i < out.table.size(); ++i) {
    out.limsup = std::max(out.limsup, out.table[i].ratio);
    out.liminf = std::min(out.liminf, out.table[i].ratio);
  }
  return out;
}

// ====================================================================
// Nested subsets with controlled gaps and masses

DiscreteMeasure EGammaSystem::measure(std::size_t resolution) const {
  require(resolution <= base.depth(), "EGammaSystem::measure: resolution exceeds the base depth");
  // Full branching is kept at every selected level, so the selected set at
  // any base level is all of it and equal mass per interval is the natural measure.
  return natural_measure(base, resolution);
}

bool EGammaSystem::conditions_hold(std::string* why) const {
  const auto no = [why](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  try {
    system.validate();
  } catch (const Error& e) {
    return no(e.what());
  }
  const std::size_t depth = system.depth();
  for (std::size_t n = 1; n <= depth; ++n) {
    const IntervalLevel& lv = system.level(n);
    if (lv.branches < 2) continue;
    const double mass = 1.0 / static_cast<double>(system.count(n));
    if (mass > std::pow(lv.gap, gamma))
      return no("mass bound fails at level " + std::to_string(n));
    if (n + 1 <= depth && system.level(n + 1).branches >= 2 &&
        !(std::pow(system.level(n + 1).gap, theta) < lv.gap))
      return no("separation bound fails at level " + std::to_string(n + 1));
  }
  return true;
}

EGammaSystem extract_E_gamma(const NestedIntervalSystem& sys, double gamma, double theta) {
  const auto dim = sys.similarity_dimension();
  require(dim.has_value(), "extract_E_gamma: needs a uniform Cantor system");
  require(gamma > 0.0 && gamma < *dim, "extract_E_gamma: gamma must lie in (0, dimension)");
  require(theta > 0.0, "extract_E_gamma: theta must be positive");
  const double n_branch = static_cast<double>(sys.cantor()->branches);

  std::vector<std::size_t> chosen{0};
  std::size_t k = 1;
  while (k <= sys.depth()) {
    const double gap = sys.level(k).gap;
    // Mass splits equally over all descendants: the largest admissible
    // branch count is the full one whenever any count is admissible.
    const double mass = std::pow(n_branch, -static_cast<double>(k));
    const bool sep = chosen.size() < 2 || std::pow(gap, theta) < sys.level(chosen.back()).gap;
    const bool light = mass <= std::pow(gap, gamma);
    if (sep && light) chosen.push_back(k);
    ++k;
  }
  if (chosen.size() < 2)
    fail(ErrorCode::depth_exhausted, "extract_E_gamma: no admissible level within the available depth");

  std::vector<IntervalLevel> lv(1);
  lv[0].length = sys.level(0).length;
  for (std::size_t n = 1; n < chosen.size(); ++n) {
    std::vector<double> offsets{0.0};
    for (std::size_t j = chosen[n - 1] + 1; j <= chosen[n]; ++j) {
      std::vector<double> next;
      for (double p : offsets)
        for (double o : sys.level(j).offsets) next.push_back(p + o);
      offsets.swap(next);
      if (offsets.size() > kMaxIntervals)
        fail(ErrorCode::scale_unrepresentable, "extract_E_gamma: level skip is too wide");
    }
    IntervalLevel l;
    l.length = sys.level(chosen[n]).length;
    l.branches = offsets.size();
    l.offsets = std::move(offsets);
    l.gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < l.branches; ++j)
      l.gap = std::min(l.gap, l.offsets[j] - l.offsets[j - 1] - l.length);
    if (l.branches == 1) l.gap = 0.0;
    lv.push_back(std::move(l));
  }
  return EGammaSystem{NestedIntervalSystem(sys.origin(), std::move(lv)), sys, std::move(chosen),
                      gamma, theta};
}

}  // namespace packdim
