#include "packdim/packdim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "packdim/error.hpp"
#include "packdim/estimators.hpp"
#include "packdim/experiment.hpp"
#include "packdim/fields.hpp"
#include "packdim/fractals.hpp"
#include "packdim/measures.hpp"
#include "packdim/numerics.hpp"
#include "packdim/parallel.hpp"
#include "packdim/theory.hpp"
#include "packdim/verify.hpp"

using nlohmann::json;
namespace pd = packdim;

struct pd_measure {
  pd::DiscreteMeasure mu;
};

namespace {

thread_local std::string last_error;

pd_status record(pd_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
pd_status guarded(F&& f) {
  try {
    f();
    return PD_OK;
  } catch (const pd::Error& e) {
    return record(static_cast<pd_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return record(PD_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return record(PD_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(PD_INTERNAL, e.what());
  } catch (...) {
    return record(PD_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) pd::fail(pd::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

json parse_request(const char* text) {
  if (!text || !*text) return json::object();
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    pd::fail(pd::ErrorCode::config, std::string("request: ") + e.what());
  }
}

pd::ScaleGrid grid_from(const json& j) {
  pd::ScaleGrid g;
  g.j_min = j.at("j_min").get<int>();
  g.j_max = j.at("j_max").get<int>();
  g.base = j.value("base", 2.0);
  return g;
}

std::string table_csv(const pd::DimensionEstimate& de) {
  std::ostringstream os;
  os << "atom,scale,V,ratio\n";
  const std::size_t ns = de.radii.size();
  for (std::size_t a = 0; a < de.atoms.size(); ++a)
    for (std::size_t j = 0; j < ns; ++j) {
      const double v = de.tables[a * ns + j];
      os << de.atoms[a] << ',' << pd::format_double(de.radii[j]) << ',' << pd::format_double(v) << ','
         << pd::format_double(std::log(v) / std::log(de.radii[j])) << '\n';
    }
  return os.str();
}

json estimate_summary(const pd::DimensionEstimate& de) {
  std::vector<double> window;
  for (std::size_t i : de.at_argmin.window) window.push_back(de.radii[i]);
  return {{"estimate", de.value},
          {"method", pd::to_string(de.method)},
          {"grid", {{"j_min", de.grid.j_min}, {"j_max", de.grid.j_max}, {"base", de.grid.base}}},
          {"window", window},
          {"guard_status", de.guard_status},
          {"argmin_atom", de.argmin_atom},
          {"atoms_evaluated", de.atoms.size()}};
}

}  // namespace

extern "C" {

const char* pd_version(void) { return pd::tool_version(); }

const char* pd_status_name(pd_status s) {
  if (s == PD_OK) return "ok";
  if (s < PD_INVALID_ARGUMENT || s > PD_INTERNAL) return "unknown";
  return pd::to_string(static_cast<pd::ErrorCode>(s));
}

const char* pd_last_error(void) { return last_error.c_str(); }

void pd_string_free(char* s) { std::free(s); }

pd_status pd_set_threads(unsigned n) {
  return guarded([&] { pd::set_thread_count(n); });
}

pd_status pd_gaussian_cdf(double z, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pd::gaussian_cdf(z);
  });
}

pd_status pd_gaussian_interval_prob(double rho, double a, double r, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pd::gaussian_interval_prob(rho, a, r);
  });
}

pd_status pd_measure_create(size_t dim, size_t n, const double* coords, const double* weights,
                            pd_measure** out) {
  return guarded([&] {
    need(out, "out");
    need(coords, "coords");
    need(weights, "weights");
    std::vector<double> c(coords, coords + dim * n), w(weights, weights + n);
    *out = new pd_measure{pd::DiscreteMeasure(dim, std::move(c), std::move(w))};
  });
}

pd_status pd_measure_uniform_grid(size_t n, pd_measure** out) {
  return guarded([&] {
    need(out, "out");
    pd::require(n >= 1, "grid size must be positive");
    std::vector<double> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = static_cast<double>(j + 1) / static_cast<double>(n);
    *out = new pd_measure{pd::DiscreteMeasure::uniform(1, std::move(c))};
  });
}

pd_status pd_measure_cantor(unsigned branches, double ratio, size_t level, pd_measure** out) {
  return guarded([&] {
    need(out, "out");
    const auto sys = pd::build_uniform_cantor(branches, ratio, level);
    *out = new pd_measure{pd::natural_measure(sys, level)};
  });
}

pd_status pd_measure_read_csv(const char* path, pd_measure** out) {
  return guarded([&] {
    need(out, "out");
    need(path, "path");
    std::ifstream is(path);
    if (!is) pd::fail(pd::ErrorCode::io, std::string("cannot read ") + path);
    *out = new pd_measure{pd::read_measure_csv(is)};
  });
}

pd_status pd_measure_write_csv(const pd_measure* mu, const char* path) {
  return guarded([&] {
    need(mu, "measure");
    need(path, "path");
    std::ofstream os(path);
    if (!os) pd::fail(pd::ErrorCode::io, std::string("cannot write ") + path);
    pd::write_measure_csv(os, mu->mu);
    if (!os) pd::fail(pd::ErrorCode::io, std::string("write failed for ") + path);
  });
}

void pd_measure_free(pd_measure* mu) { delete mu; }

size_t pd_measure_dim(const pd_measure* mu) { return mu ? mu->mu.dim() : 0; }

size_t pd_measure_size(const pd_measure* mu) { return mu ? mu->mu.size() : 0; }

pd_status pd_measure_ball_mass(const pd_measure* mu, const double* x, double r, pd_norm norm,
                               double* out) {
  return guarded([&] {
    need(mu, "measure");
    need(x, "x");
    need(out, "out");
    pd::require(norm == PD_NORM_EUCLIDEAN || norm == PD_NORM_MAX, "unknown norm");
    *out = pd::ball_mass(mu->mu, {x, mu->mu.dim()}, r,
                         norm == PD_NORM_MAX ? pd::Norm::max : pd::Norm::euclidean);
  });
}

pd_status pd_estimate_json(const pd_measure* mu, const char* request, char** report, char** table) {
  return guarded([&] {
    need(mu, "measure");
    need(report, "report");
    const json req = parse_request(request);
    const std::string which = req.value("estimator", std::string("ballmass"));
    const pd::ScaleGrid grid = grid_from(req.at("grid"));
    pd::EstimatorOptions opt;
    opt.method = pd::exponent_method_from_string(req.value("method", std::string("regression")));
    opt.interior_only = req.value("interior_only", true);
    pd::DimensionEstimate de;
    json extra = json::object();
    if (which == "ballmass") {
      de = pd::dim_measure_ballmass(mu->mu, grid, opt);
    } else if (which == "profile") {
      const double beta = req.at("beta").get<double>();
      de = pd::dim_profile_beta(mu->mu, beta, grid, opt);
      extra["beta"] = beta;
    } else if (which == "Gd") {
      const auto n = req.at("n").get<std::size_t>();
      const auto d = req.at("d").get<std::size_t>();
      de = pd::dim_measure_Gd(mu->mu, n, d, grid, opt);
      extra["n"] = n;
      extra["d"] = d;
    } else if (which == "Z_mu") {
      const pd::FieldSpec spec = pd::field_spec_from_json(req.at("regime"));
      const pd::DriftSpec drift = req.contains("drift") ? pd::drift_from_json(req.at("drift")) : pd::DriftSpec{};
      const auto mode = pd::field_mode_from_string(req.value("mode", std::string("image")));
      const pd::KernelContext ctx(spec, drift, mu->mu, mode);
      de = pd::dim_Z_mu(ctx, grid, opt);
      extra["regime"] = pd::to_json(spec);
      extra["drift"] = pd::to_json(drift);
      extra["mode"] = pd::to_string(mode);
    } else {
      pd::fail(pd::ErrorCode::invalid_argument, "unknown estimator '" + which + "'");
    }
    json out = estimate_summary(de);
    out["estimator"] = which;
    out["tool"] = pd::tool_version();
    out.update(extra);
    std::string t;
    if (table) t = table_csv(de);
    *report = dup(out.dump(2) + "\n");
    if (table) *table = dup(t);
  });
}

pd_status pd_simulate_json(const char* request, char** csv, char** sidecar) {
  return guarded([&] {
    need(csv, "csv");
    const json req = parse_request(request);
    const pd::FieldSpec spec = pd::field_spec_from_json(req.at("regime"));
    const pd::DriftSpec drift = req.contains("drift") ? pd::drift_from_json(req.at("drift")) : pd::DriftSpec{};
    drift.validate(spec);
    std::vector<double> points;
    const json& p = req.at("points");
    if (p.is_object()) {
      pd::require(spec.n == 1, "grid points are available for n = 1 only");
      const auto count = p.at("grid").get<std::size_t>();
      pd::require(count >= 1, "grid size must be positive");
      for (std::size_t j = 1; j <= count; ++j) points.push_back(static_cast<double>(j) / static_cast<double>(count));
    } else {
      points = p.get<std::vector<double>>();
    }
    const std::uint64_t seed = req.value("seed", std::uint64_t{1});
    const std::uint64_t replica = req.value("replica", std::uint64_t{0});
    const std::string route = req.value("route", std::string("auto"));
    pd::require(route == "auto" || route == "cholesky", "route must be auto or cholesky");
    pd::SamplePath path = pd::sample(spec, std::move(points), pd::Seed{seed}, replica,
                                     route == "auto" ? pd::SampleRoute::automatic : pd::SampleRoute::cholesky);
    path = pd::add_drift(std::move(path), drift);

    std::ostringstream os;
    for (std::size_t i = 0; i < spec.n; ++i) os << (i ? "," : "") << 't' << i + 1;
    for (std::size_t i = 0; i < spec.d; ++i) os << ",x" << i + 1;
    os << '\n';
    const std::size_t count = path.points.size() / spec.n;
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < spec.n; ++i) os << (i ? "," : "") << pd::format_double(path.points[k * spec.n + i]);
      for (std::size_t i = 0; i < spec.d; ++i) os << ',' << pd::format_double(path.values[k * spec.d + i]);
      os << '\n';
    }
    const json meta = {{"tool", pd::tool_version()}, {"regime", pd::to_json(spec)},
                       {"drift", pd::to_json(drift)}, {"seed", seed},
                       {"replica", replica},           {"method", path.method},
                       {"points", count}};
    std::string side = meta.dump(2) + "\n";
    *csv = dup(os.str());
    if (sidecar) *sidecar = dup(side);
  });
}

pd_status pd_txset_csv(double beta, double delta0, size_t levels, char** csv) {
  return guarded([&] {
    need(csv, "csv");
    const pd::SymbolicScaleSystem sys = pd::build_tx_system(beta, delta0, levels);
    std::ostringstream os;
    os << "k,log_inv_delta,log_inv_eta,log_m,ratio_at_eta,ratio_at_delta\n";
    for (std::size_t k = 1; k <= sys.depth(); ++k) {
      const pd::LogValue le = sys.log_inv_eta[k], ld = sys.log_inv_delta[k];
      const double at_eta = static_cast<double>(pd::covering_count(sys, le).logv / le.logv);
      const double at_delta = static_cast<double>(pd::covering_count(sys, ld).logv / ld.logv);
      os << k << ',' << pd::format_double(static_cast<double>(ld.logv)) << ','
         << pd::format_double(static_cast<double>(le.logv)) << ','
         << pd::format_double(static_cast<double>(sys.log_m[k].logv)) << ',' << pd::format_double(at_eta) << ','
         << pd::format_double(at_delta) << '\n';
    }
    *csv = dup(os.str());
  });
}

pd_status pd_predict_json(double alpha, unsigned d, double beta, char** report) {
  return guarded([&] {
    need(report, "report");
    json out = pd::predict_all(pd::Regime{alpha, d, beta});
    out["tool"] = pd::tool_version();
    *report = dup(out.dump(2) + "\n");
  });
}

pd_status pd_verify_json(const char* check, const char* options, char** report, int* passed) {
  return guarded([&] {
    need(check, "check");
    need(report, "report");
    const json opt = parse_request(options);
    const std::string name = check;
    const std::uint64_t seed = opt.value("seed", std::uint64_t{1});
    pd::CheckReport r;
    if (name == "kernel-chain") {
      r = pd::check_kernel_chain(opt.value("trials", std::size_t{10000}), seed);
    } else if (name == "doubling") {
      r = pd::sweep_doubling(opt.value("trials", std::size_t{1000}), seed);
    } else if (name == "parts") {
      r = pd::sweep_parts(opt.value("trials", std::size_t{20}), seed);
    } else if (name == "scale-doubling") {
      r = pd::sweep_scale_doubling(opt.value("trials", std::size_t{50}), seed);
    } else if (name == "eq-ar") {
      r = pd::check_eq_ar(opt.value("beta", 0.5), pd::EqArGrid{opt.value("per_decade", std::size_t{8})});
    } else if (name == "graph-expectation") {
      const double alpha = opt.value("alpha", 0.5);
      const std::size_t d = opt.value("d", std::size_t{1});
      const double theta = 1.0 / (static_cast<double>(d) + 1.0 - alpha * static_cast<double>(d));
      const auto base = pd::build_uniform_cantor(opt.value("branches", 2u), opt.value("ratio", 1.0 / 3.0),
                                                 opt.value("levels", std::size_t{13}));
      const auto sys = pd::extract_E_gamma(base, opt.value("gamma", 0.3), theta);
      r = pd::check_graph_expectation_bound(sys, pd::FieldSpec{alpha, 1, d}, opt.value("resolution", std::size_t{11}),
                                            opt.value("bound", 8.0));
    } else {
      pd::fail(pd::ErrorCode::invalid_argument, "unknown check '" + name + "'");
    }
    json out = r.to_json();
    out["tool"] = pd::tool_version();
    out["seed"] = seed;
    *report = dup(out.dump(2) + "\n");
    if (passed) *passed = r.passed() ? 1 : 0;
  });
}

pd_status pd_experiment_run(const char* config_path, const char* out_dir, char** report, int* passed) {
  return guarded([&] {
    need(config_path, "config_path");
    std::ifstream is(config_path);
    if (!is) pd::fail(pd::ErrorCode::io, std::string("cannot read ") + config_path);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      pd::fail(pd::ErrorCode::config, std::string(config_path) + ": " + e.what());
    }
    const pd::ExperimentConfig cfg = pd::config_from_json(j);
    const pd::PredictionReport rep = pd::run_experiment(cfg);
    if (out_dir && *out_dir) pd::write_report(rep, out_dir);
    if (report) *report = dup(rep.json.dump(2) + "\n");
    if (passed) *passed = rep.pass ? 1 : 0;
  });
}

pd_status pd_experiment_suite(const char* dir, const char* out_dir, char** summary_csv, int* all_pass) {
  return guarded([&] {
    need(dir, "dir");
    const pd::SuiteResult res = pd::run_suite(dir, out_dir ? out_dir : "");
    if (summary_csv) *summary_csv = dup(res.summary_csv);
    if (all_pass) *all_pass = res.all_pass ? 1 : 0;
  });
}

}  // extern "C"
