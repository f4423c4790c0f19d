// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "packdim/error.hpp"
#include "packdim/estimators.hpp"
#include "packdim/experiment.hpp"
#include "packdim/fields.hpp"
#include "packdim/fractals.hpp"
#include "packdim/kernels.hpp"
#include "packdim/theory.hpp"
#include "packdim/verify.hpp"

using namespace packdim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

fs::path source_dir() {
#ifdef PACKDIM_SOURCE_DIR
  return PACKDIM_SOURCE_DIR;
#else
  return fs::current_path();
#endif
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream is(source_dir() / "configs" / "acceptance" / file);
  if (!is) fail(ErrorCode::io, "missing acceptance config " + file);
  return config_from_json(nlohmann::json::parse(is));
}

DiscreteMeasure uniform_grid(std::size_t n) {
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = static_cast<double>(j + 1) / static_cast<double>(n);
  return DiscreteMeasure::uniform(1, c);
}

// Regimes with alpha*d < 1 shared by the g/h identity and the sharpness gap.
std::vector<Regime> random_regimes() {
  RandomStream rs = RandomStream::replica(Seed{1009}, 0);
  std::vector<Regime> out;
  while (out.size() < 100) {
    const unsigned d = 1 + static_cast<unsigned>(rs.next_u64() % 3);
    const double alpha = 0.02 + 0.97 * rs.uniform() / d;
    const double beta = 0.01 + 0.98 * rs.uniform();
    if (alpha * d < 0.99) out.push_back({alpha, d, beta});
  }
  return out;
}

Outcome kernel_chain() {
  const CheckReport r = check_kernel_chain(10000, 1);
  const double slack = r.details.at("min_slack").get<double>();
  return {r.passed() && slack >= -1e-12,
          std::to_string(r.trials) + " trials, " + std::to_string(r.violations) + " violations, " +
              fmt("min slack %.3g", slack)};
}

Outcome doubling() {
  const CheckReport r = sweep_doubling(1000, 2);
  return {r.passed(), std::to_string(r.trials) + " measures, " + std::to_string(r.violations) + " violations"};
}

Outcome parts() {
  const CheckReport r = sweep_parts(20, 3);
  return {r.passed(), std::to_string(r.trials) + " checks, " +
                          fmt("worst relative error d=1 %.2e, d=2 %.2e",
                              r.details.at("worst_relative_error_d1").get<double>(),
                              r.details.at("worst_relative_error_d2").get<double>())};
}

Outcome eq_ar() {
  bool ok = true;
  std::string det;
  for (double beta : {0.3, 0.5, 0.7}) {
    const CheckReport r = check_eq_ar(beta);
    ok = ok && r.passed();
    det += fmt("beta %.1f: sup %.3f (refinement %.1f%%) ", beta, r.worst_ratio,
               100.0 * r.details.at("refinement_change").get<double>());
  }
  return {ok, det};
}

Outcome fbm_law() {
  const int reps = 10000;
  bool ok = true;
  double worst_var = 0.0, worst_corr = 0.0;
  std::vector<double> grid(64);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = static_cast<double>(j + 1) / 64.0;
  // (t, s) index pairs into the grid; index -1 is the origin
  const std::vector<std::pair<int, int>> pairs{{63, -1}, {63, 31}, {15, 7}, {40, 39}, {0, -1}};
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (SampleRoute route : {SampleRoute::automatic, SampleRoute::cholesky}) {
      const FieldSpec spec{alpha, 1, 2};
      std::vector<double> sxx(pairs.size(), 0.0), syy(pairs.size(), 0.0), sxy(pairs.size(), 0.0);
      for (int k = 0; k < reps; ++k) {
        const SamplePath p = sample(spec, grid, Seed{77}, static_cast<std::uint64_t>(k), route);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
          const auto [t, s] = pairs[q];
          const double dx = p.values[2 * t] - (s < 0 ? 0.0 : p.values[2 * s]);
          const double dy = p.values[2 * t + 1] - (s < 0 ? 0.0 : p.values[2 * s + 1]);
          sxx[q] += dx * dx;
          syy[q] += dy * dy;
          sxy[q] += dx * dy;
        }
      }
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [t, s] = pairs[q];
        const double gap = grid[t] - (s < 0 ? 0.0 : grid[s]);
        const double expect = std::pow(gap, 2 * alpha);
        const double ex = std::fabs(sxx[q] / reps / expect - 1.0), ey = std::fabs(syy[q] / reps / expect - 1.0);
        const double corr = std::fabs(sxy[q] / std::sqrt(sxx[q] * syy[q]));
        worst_var = std::max({worst_var, ex, ey});
        worst_corr = std::max(worst_corr, corr);
      }
    }
  }
  ok = worst_var <= 0.05 && worst_corr <= 0.05;
  return {ok, fmt("worst variance error %.2f%%, worst |corr| %.4f", 100.0 * worst_var, worst_corr)};
}

Outcome image_dimension() {
  const PredictionReport r = run_experiment(load_config("image_dimension.json"));
  const double est = *r.estimate_box;
  return {r.pass && std::fabs(est - 2.0) <= 0.25, fmt("box %.4f (predicted %.1f)", est, r.predicted)};
}

Outcome graph_dimension() {
  const PredictionReport r = run_experiment(load_config("graph_dimension.json"));
  const double box = *r.estimate_box, ker = *r.estimate_kernel;
  const bool ok = std::fabs(box - 1.5) <= 0.15 && std::fabs(ker - 1.5) <= 0.1;
  return {r.pass && ok, fmt("box %.4f, kernel %.4f (predicted %.1f)", box, ker, r.predicted)};
}

Outcome profile_consistency() {
  const DiscreteMeasure mu = natural_measure(build_uniform_cantor(2, 1.0 / 16.0, 10), 10);
  const ScaleGrid grid{4, 14, 2.0};
  const FieldSpec spec{0.5, 1, 1};
  const double z = dim_Z_mu(KernelContext(spec, {}, mu, FieldMode::image), grid).value;
  const double prof = dim_profile_beta(mu, spec.hurst * spec.d, grid).value;
  const double via = predict_image_profile(spec.hurst, 1, prof);
  const double pred = predict_image({0.5, 1, 0.25});
  const bool ok = std::fabs(z - via) <= 0.1 && std::fabs(z - pred) <= 0.15 && std::fabs(via - pred) <= 0.15;
  return {ok, fmt("dim_Z %.4f, profile form %.4f, predicted %.2f", z, via, pred)};
}

Outcome txset() {
  const SymbolicScaleSystem sys = build_tx_system(0.5, 0.25, 12);
  std::vector<LogValue> eta, delta;
  for (std::size_t k = 1; k <= 12; ++k) {
    eta.push_back(sys.log_inv_eta[k]);
    delta.push_back(sys.log_inv_delta[k]);
  }
  const MinkowskiBounds be = minkowski_bounds(sys, eta), bd = minkowski_bounds(sys, delta);
  const bool ok = std::fabs(be.limsup - 0.5) <= 0.05 && bd.limsup <= 0.05;
  return {ok, fmt("eta-scale ratio %.6f, delta-scale ratio %.2e (tail of 12 levels)", be.limsup, bd.limsup)};
}

Outcome gh_identity() {
  double worst = 0.0;
  bool ok = true;
  for (const Regime& g : random_regimes()) {
    const GhSolution s = gh_solver(g);
    worst = std::max(worst, std::fabs(s.value - graph_lower(g)));
  }
  const GhSolution a = gh_solver({0.5, 1, 0.5}), b = gh_solver({0.4, 2, 0.9});
  const double hand = std::max({std::fabs(a.x_star - 8.0 / 3.0), std::fabs(a.value - 0.75),
                                std::fabs(b.x_star - 125.0 / 11.0), std::fabs(b.value - 1.98)});
  ok = worst <= 1e-9 && hand <= 1e-9;
  return {ok, fmt("max |gh - graph_lower| %.2e, hand points off by %.2e", worst, hand)};
}

Outcome sharpness_gap() {
  double margin = INFINITY;
  for (const Regime& g : random_regimes()) margin = std::min(margin, predict_graph_upper(g) - graph_lower(g));
  return {margin > 0.0, fmt("smallest margin %.4g", margin)};
}

Outcome drift_invariance() {
  const FieldSpec spec{0.5, 1, 2};
  const DiscreteMeasure mu = natural_measure(build_uniform_cantor(2, 0.25, 8), 8);
  DriftSpec c;
  c.kind = DriftKind::constant;
  c.value = {2.75, -0.3};
  DriftSpec z;
  z.kind = DriftKind::zero;
  bool ok = true;
  for (FieldMode mode : {FieldMode::image, FieldMode::graph}) {
    const KernelContext plain(spec, DriftSpec{}, mu, mode), shifted(spec, c, mu, mode), zero(spec, z, mu, mode);
    const ScaleGrid grid{2, 7, 2.0};
    const auto radii = grid.radii();
    for (std::size_t i = 0; i < mu.size(); i += 17)
      for (std::size_t k = 0; k < mu.size(); k += 13)
        for (double r : radii) {
          const double h = H_fX(plain, mu.atom(i), mu.atom(k), r);
          ok = ok && h == H_fX(shifted, mu.atom(i), mu.atom(k), r) && h == H_fX(zero, mu.atom(i), mu.atom(k), r);
        }
    for (std::size_t i = 0; i < mu.size(); i += 11) {
      const auto e = expected_ball_mass(plain, mu.atom(i), radii);
      ok = ok && e == expected_ball_mass(shifted, mu.atom(i), radii) && e == expected_ball_mass(zero, mu.atom(i), radii);
    }
    const DimensionEstimate a = dim_Z_mu(plain, grid), b = dim_Z_mu(shifted, grid), d = dim_Z_mu(zero, grid);
    ok = ok && a.value == b.value && a.value == d.value && a.tables == b.tables && a.tables == d.tables;
  }
  return {ok, ok ? "bitwise identical in both modes" : "outputs differ"};
}

Outcome graph_expectation() {
  const double alpha = 0.5, gamma = 0.3;
  const double theta = 1.0 / (1.0 + 1.0 - alpha);
  const EGammaSystem e = extract_E_gamma(build_uniform_cantor(2, 1.0 / 3.0, 13), gamma, theta);
  const CheckReport r = check_graph_expectation_bound(e, FieldSpec{alpha, 1, 1}, 12);
  const auto usable = r.details.at("usable_levels").get<std::size_t>();
  const auto& change = r.details.at("refinement_change");
  const bool ok = r.passed() && usable >= 3 && !change.is_null();
  return {ok, fmt("%g usable levels, max ratio %.4f, refinement change %.2f%%", static_cast<double>(usable),
                  r.worst_ratio, change.is_null() ? NAN : 100.0 * change.get<double>())};
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {"kernel chain", 10, kernel_chain},
      {"doubling bound", 30, doubling},
      {"integration by parts", 60, parts},
      {"Gaussian interval scan", 30, eq_ar},
      {"fBm law", 60, fbm_law},
      {"image dimension", 120, image_dimension},
      {"graph dimension", 120, graph_dimension},
      {"profile consistency", 60, profile_consistency},
      {"oscillating set combinatorics", 1, txset},
      {"g/h crossing identity", 1, gh_identity},
      {"strict sharpness gap", 1, sharpness_gap},
      {"drift invariance", 10, drift_invariance},
      {"graph expectation bound", 60, graph_expectation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < all[i].limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2zu %-30s %s [%.2fs / %.0fs%s]\n", pass ? "PASS" : "FAIL", i + 1, all[i].name,
                o.detail.c_str(), secs, all[i].limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
