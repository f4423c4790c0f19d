#include "packdim/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "packdim/error.hpp"
#include "packdim/fractals.hpp"
#include "packdim/theory.hpp"

namespace packdim {

const char* tool_version() noexcept { return "packdim " PACKDIM_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ====================================================================
// Config

namespace {

const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::interval: return "interval";
    case SetKind::cantor: return "cantor";
    case SetKind::txset: return "txset";
  }
  return "";
}

nlohmann::json grid_json(const ScaleGrid& g) {
  return {{"j_min", g.j_min}, {"j_max", g.j_max}, {"base", g.base}};
}

ScaleGrid grid_from_json(const nlohmann::json& j) {
  ScaleGrid g;
  g.j_min = j.at("j_min").get<int>();
  g.j_max = j.at("j_max").get<int>();
  g.base = j.value("base", 2.0);
  return g;
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto bad = [this](const std::string& w) {
    fail(ErrorCode::config, "experiment '" + name + "': " + w);
  };
  if (name.empty()) bad("name must be non-empty");
  if (name.find_first_of("/\\") != std::string::npos) bad("name must not contain path separators");
  try {
    field.validate();
    drift.validate(field);
    box_grid.validate();
    kernel_grid.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  if (field.n != 1) bad("parameter sets are subsets of R (n = 1)");
  if (replicas == 0) bad("replicas must be at least 1");
  if (!run_box && !run_kernel) bad("no estimator selected");
  switch (set.kind) {
    case SetKind::interval:
      if (set.points < 2 || set.points > (std::size_t{1} << 14)) bad("interval points must lie in [2, 2^14]");
      if (measure_resolution < 2) bad("measure resolution must be at least 2");
      break;
    case SetKind::cantor:
      if (set.branches < 2 || !(set.ratio > 0.0) || set.branches * set.ratio >= 1.0) bad("cantor parameters infeasible");
      if (set.level > 40 || measure_resolution > 40) bad("cantor level must be at most 40");
      break;
    case SetKind::txset:
      if (!(set.beta > 0.0 && set.beta < 1.0) || !(set.delta0 > 0.0 && set.delta0 < 0.5)) bad("txset parameters out of range");
      break;
  }
  if (!(tolerance_box >= 0.0) || !(tolerance_kernel >= 0.0)) bad("tolerances must be nonnegative");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    const auto& rg = j.at("regime");
    c.field.hurst = rg.at("alpha").get<double>();
    c.field.d = rg.at("d").get<std::size_t>();
    c.field.n = rg.value("n", std::size_t{1});
    const auto& st = j.at("set");
    const std::string kind = st.at("kind").get<std::string>();
    if (kind == "interval") {
      c.set.kind = SetKind::interval;
      c.set.points = st.at("points").get<std::size_t>();
    } else if (kind == "cantor") {
      c.set.kind = SetKind::cantor;
      c.set.branches = st.at("branches").get<unsigned>();
      c.set.ratio = st.at("ratio").get<double>();
      c.set.level = st.at("level").get<std::size_t>();
    } else if (kind == "txset") {
      c.set.kind = SetKind::txset;
      c.set.beta = st.at("beta").get<double>();
      c.set.delta0 = st.at("delta0").get<double>();
      c.set.level = st.at("level").get<std::size_t>();
    } else {
      fail(ErrorCode::config, "unknown set kind '" + kind + "'");
    }
    c.drift = j.contains("drift") ? drift_from_json(j.at("drift")) : DriftSpec{};
    c.mode = field_mode_from_string(j.value("mode", std::string("image")));
    c.measure_resolution = j.at("measure_resolution").get<std::size_t>();
    c.box_grid = grid_from_json(j.at("box_grid"));
    c.kernel_grid = grid_from_json(j.at("kernel_grid"));
    c.box_method = exponent_method_from_string(j.value("box_method", std::string("tail-max")));
    c.kernel_method = exponent_method_from_string(j.value("kernel_method", std::string("regression")));
    c.run_box = false;
    c.run_kernel = false;
    for (const auto& e : j.value("estimators", nlohmann::json::array({"box", "kernel"}))) {
      const std::string s = e.get<std::string>();
      if (s == "box") c.run_box = true;
      else if (s == "kernel") c.run_kernel = true;
      else fail(ErrorCode::config, "unknown estimator '" + s + "'");
    }
    c.replicas = j.at("replicas").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& tol = j.at("tolerance");
    c.tolerance_box = tol.value("box", 0.25);
    c.tolerance_kernel = tol.value("kernel", 0.1);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json set = {{"kind", to_string(c.set.kind)}};
  switch (c.set.kind) {
    case SetKind::interval:
      set["points"] = c.set.points;
      break;
    case SetKind::cantor:
      set["branches"] = c.set.branches;
      set["ratio"] = c.set.ratio;
      set["level"] = c.set.level;
      break;
    case SetKind::txset:
      set["beta"] = c.set.beta;
      set["delta0"] = c.set.delta0;
      set["level"] = c.set.level;
      break;
  }
  nlohmann::json est = nlohmann::json::array();
  if (c.run_box) est.push_back("box");
  if (c.run_kernel) est.push_back("kernel");
  return {{"name", c.name},
          {"regime", {{"alpha", c.field.hurst}, {"d", c.field.d}, {"n", c.field.n}}},
          {"set", set},
          {"drift", to_json(c.drift)},
          {"mode", to_string(c.mode)},
          {"measure_resolution", c.measure_resolution},
          {"box_grid", grid_json(c.box_grid)},
          {"kernel_grid", grid_json(c.kernel_grid)},
          {"box_method", to_string(c.box_method)},
          {"kernel_method", to_string(c.kernel_method)},
          {"estimators", est},
          {"replicas", c.replicas},
          {"seed", c.seed},
          {"tolerance", {{"box", c.tolerance_box}, {"kernel", c.tolerance_kernel}}}};
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ====================================================================
// Running

namespace {

struct BuiltSet {
  std::vector<double> sample_points;
  DiscreteMeasure measure;
  double beta;
  bool connected;
};

BuiltSet build_set(const ExperimentConfig& c) {
  switch (c.set.kind) {
    case SetKind::interval: {
      std::vector<double> pts(c.set.points), atoms(c.measure_resolution);
      for (std::size_t j = 0; j < pts.size(); ++j)
        pts[j] = static_cast<double>(j + 1) / static_cast<double>(pts.size());
      for (std::size_t j = 0; j < atoms.size(); ++j)
        atoms[j] = static_cast<double>(j + 1) / static_cast<double>(atoms.size());
      return {pts, DiscreteMeasure::uniform(1, atoms), 1.0, true};
    }
    case SetKind::cantor: {
      const auto sys = build_uniform_cantor(c.set.branches, c.set.ratio,
                                            std::max(c.set.level, c.measure_resolution));
      return {sys.left_endpoints(c.set.level), natural_measure(sys, c.measure_resolution),
              *sys.similarity_dimension(), false};
    }
    case SetKind::txset: {
      const auto sym = build_tx_system(c.set.beta, c.set.delta0, std::max(c.set.level, c.measure_resolution));
      const auto sys = realize_explicit(sym, std::max(c.set.level, c.measure_resolution));
      return {sys.left_endpoints(c.set.level), natural_measure(sys, c.measure_resolution), c.set.beta, false};
    }
  }
  fail(ErrorCode::internal, "unreachable set kind");
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

}  // namespace

PredictionReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  PredictionReport rep;
  rep.name = config.name;
  rep.config_hash = config_hash(config);
  const BuiltSet set = stage("build-set", [&] { return build_set(config); });

  // ---- predictions
  Regime rg{config.field.hurst, static_cast<unsigned>(config.field.d), set.beta};
  nlohmann::json predictions = stage("predict", [&] { return predict_all(rg); });
  const bool tx = config.set.kind == SetKind::txset && rg.subcritical();
  if (config.mode == FieldMode::image) {
    rep.formula = tx ? "image_lower" : "image";
  } else {
    rep.formula = tx ? "graph_lower" : "graph_upper";
  }
  rep.predicted = predictions.at(rep.formula).get<double>();

  nlohmann::json estimated = nlohmann::json::object();
  nlohmann::json gaps = nlohmann::json::object();
  nlohmann::json passes = nlohmann::json::object();
  rep.pass = true;

  // ---- box counting on sampled paths
  if (config.run_box) {
    std::ostringstream csv;
    csv << "replica,scale,count,ratio\n";
    std::vector<double> per_replica;
    const auto radii = config.box_grid.radii();
    stage("box-estimate", [&] {
      for (std::size_t k = 0; k < config.replicas; ++k) {
        SamplePath path = sample(config.field, set.sample_points, Seed{config.seed}, k);
        path = add_drift(std::move(path), config.drift);
        std::vector<double> pts;
        std::size_t m;
        if (config.mode == FieldMode::image) {
          pts = path.values;
          m = config.field.d;
        } else {
          pts = graph_points(path);
          m = config.field.n + config.field.d;
        }
        if (set.connected) pts = densify_polyline(pts, m, radii.back() / 4.0);
        const BoxEstimate be = minkowski_regression(pts, m, config.box_grid, config.box_method);
        per_replica.push_back(be.exponent.value);
        for (std::size_t j = 0; j < radii.size(); ++j)
          csv << k << ',' << format_double(radii[j]) << ',' << be.counts[j] << ','
              << format_double(be.exponent.per_scale[j].ratio) << '\n';
      }
      return 0;
    });
    double mean = 0.0;
    for (double v : per_replica) mean += v;
    mean /= static_cast<double>(per_replica.size());
    rep.estimate_box = mean;
    rep.box_csv = csv.str();
    const double gap = std::fabs(mean - rep.predicted);
    const bool ok = gap <= config.tolerance_box;
    rep.gap = std::max(rep.gap, gap);
    rep.pass = rep.pass && ok;
    estimated["box"] = {{"value", mean},
                        {"method", to_string(config.box_method)},
                        {"grid", grid_json(config.box_grid)},
                        {"replicas", config.replicas},
                        {"seed", config.seed},
                        {"per_replica", per_replica},
                        {"densified", set.connected}};
    gaps["box"] = gap;
    passes["box"] = ok;
  }

  // ---- kernel estimate
  if (config.run_kernel) {
    const DimensionEstimate de = stage("kernel-estimate", [&] {
      const KernelContext ctx(config.field, config.drift, set.measure, config.mode);
      EstimatorOptions opt;
      opt.method = config.kernel_method;
      return dim_Z_mu(ctx, config.kernel_grid, opt);
    });
    std::ostringstream csv;
    csv << "atom,scale,V,ratio\n";
    const std::size_t ns = de.radii.size();
    for (std::size_t a = 0; a < de.atoms.size(); ++a)
      for (std::size_t j = 0; j < ns; ++j) {
        const double v = de.tables[a * ns + j];
        csv << de.atoms[a] << ',' << format_double(de.radii[j]) << ',' << format_double(v) << ','
            << format_double(std::log(v) / std::log(de.radii[j])) << '\n';
      }
    rep.kernel_csv = csv.str();
    rep.estimate_kernel = de.value;
    const double gap = std::fabs(de.value - rep.predicted);
    const bool ok = gap <= config.tolerance_kernel;
    rep.gap = std::max(rep.gap, gap);
    rep.pass = rep.pass && ok;
    estimated["kernel"] = {{"value", de.value},
                           {"method", to_string(config.kernel_method)},
                           {"grid", grid_json(config.kernel_grid)},
                           {"atoms", set.measure.size()},
                           {"atoms_evaluated", de.atoms.size()},
                           {"argmin_atom", de.argmin_atom},
                           {"guard_status", de.guard_status},
                           {"replicas", 0},
                           {"seed", config.seed}};
    gaps["kernel"] = gap;
    passes["kernel"] = ok;
  }

  rep.json = {{"tool", tool_version()},
              {"config_hash", rep.config_hash},
              {"config", to_json(config)},
              {"predicted", {{"formula", rep.formula}, {"value", rep.predicted}, {"all", predictions}}},
              {"estimated", estimated},
              {"gaps", gaps},
              {"pass", passes},
              {"all_pass", rep.pass}};
  return rep;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) fail(ErrorCode::io, "cannot write " + p.string());
  os << text;
  if (!os) fail(ErrorCode::io, "write failed for " + p.string());
}

}  // namespace

void write_report(const PredictionReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + out_dir.string());
  write_file(out_dir / (report.name + ".json"), report.json.dump(2) + "\n");
  if (!report.box_csv.empty()) write_file(out_dir / (report.name + "_box.csv"), report.box_csv);
  if (!report.kernel_csv.empty()) write_file(out_dir / (report.name + "_kernel.csv"), report.kernel_csv);
}

SuiteResult run_suite(const std::filesystem::path& dir, const std::filesystem::path& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(ErrorCode::io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::invalid_argument, "no experiment configs in " + dir.string());

  SuiteResult res;
  res.all_pass = true;
  std::ostringstream csv;
  csv << "name,predicted,estimate_box,estimate_kernel,gap,pass\n";
  nlohmann::json index = nlohmann::json::array();
  for (const auto& f : files) {
    std::string name = f.stem().string();
    try {
      std::ifstream is(f);
      if (!is) fail(ErrorCode::io, "cannot read " + f.string());
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::config, f.filename().string() + ": " + e.what());
      }
      const ExperimentConfig cfg = config_from_json(j);
      name = cfg.name;
      PredictionReport rep = run_experiment(cfg);
      if (!out_dir.empty()) write_report(rep, out_dir);
      csv << rep.name << ',' << format_double(rep.predicted) << ','
          << (rep.estimate_box ? format_double(*rep.estimate_box) : "") << ','
          << (rep.estimate_kernel ? format_double(*rep.estimate_kernel) : "") << ','
          << format_double(rep.gap) << ',' << (rep.pass ? "true" : "false") << '\n';
      index.push_back({{"name", rep.name}, {"config_hash", rep.config_hash}, {"pass", rep.pass}});
      res.all_pass = res.all_pass && rep.pass;
      res.errors.emplace_back();
      res.names.push_back(rep.name);
      res.reports.push_back(std::move(rep));
    } catch (const Error& e) {
      csv << name << ",nan,,,nan,false\n";
      index.push_back({{"name", name}, {"error", e.what()}, {"pass", false}});
      res.all_pass = false;
      res.errors.emplace_back(e.what());
      res.names.push_back(name);
    }
  }
  res.summary_csv = csv.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir, ec);
    write_file(out_dir / "summary.csv", res.summary_csv);
    const nlohmann::json meta = {{"tool", tool_version()}, {"experiments", index}, {"all_pass", res.all_pass}};
    write_file(out_dir / "summary.json", meta.dump(2) + "\n");
  }
  return res;
}

}  // namespace packdim
