// packdim command line: thin layer over the C interface.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "packdim/packdim.h"

using nlohmann::json;

namespace {

struct Global {
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;
  std::string format = "json";
};

// Owned C string from the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { pd_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int report_error(pd_status s) {
  std::cerr << "packdim: " << pd_status_name(s) << ": " << pd_last_error() << '\n';
  return 2;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

// With --out, files land in that directory as <stem>.csv / <stem>.json;
// otherwise the part selected by --format goes to stdout.
void emit(const Global& g, const std::string& stem, const std::string& csv, const std::string& js) {
  if (!g.out.empty()) {
    std::filesystem::create_directories(g.out);
    if (!csv.empty()) write_text(std::filesystem::path(g.out) / (stem + ".csv"), csv);
    if (!js.empty()) write_text(std::filesystem::path(g.out) / (stem + ".json"), js);
    return;
  }
  if (g.format == "csv" && !csv.empty())
    std::cout << csv;
  else
    std::cout << js;
}

struct MeasureArgs {
  std::string file;
  std::vector<double> cantor;  // branches ratio level
  std::size_t grid = 0;
};

void add_measure_options(CLI::App* sub, MeasureArgs& m) {
  auto* f = sub->add_option("--measure", m.file, "measure CSV (x1..xm,weight)")->check(CLI::ExistingFile);
  auto* c = sub->add_option("--cantor", m.cantor, "uniform Cantor natural measure: branches ratio level")
                ->expected(3);
  auto* g = sub->add_option("--grid", m.grid, "uniform atoms j/N on [0,1]");
  f->excludes(c)->excludes(g);
  c->excludes(g);
}

pd_status load_measure(const MeasureArgs& m, pd_measure** mu) {
  if (!m.file.empty()) return pd_measure_read_csv(m.file.c_str(), mu);
  if (!m.cantor.empty())
    return pd_measure_cantor(static_cast<unsigned>(m.cantor[0]), m.cantor[1],
                             static_cast<std::size_t>(m.cantor[2]), mu);
  if (m.grid > 0) return pd_measure_uniform_grid(m.grid, mu);
  std::cerr << "packdim: one of --measure, --cantor, --grid is required\n";
  return PD_INVALID_ARGUMENT;
}

json parse_json_arg(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw CLI::ValidationError(what, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packing dimensions of Gaussian random fields with drift"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pd_version()));
  Global g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->each([](const std::string& v) {
    if (pd_set_threads(static_cast<unsigned>(std::stoul(v))) != PD_OK)
      throw CLI::ValidationError("--threads", pd_last_error());
  });
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

  int exit_code = 0;

  // ---- simulate
  auto* sim = app.add_subcommand("simulate", "sample a fractional Brownian path");
  double sim_alpha = 0.5;
  std::size_t sim_n = 1, sim_d = 1, sim_grid = 1024, sim_replica = 0;
  std::string sim_points, sim_drift, sim_route = "auto";
  sim->add_option("--alpha", sim_alpha, "Hurst index")->required();
  sim->add_option("--n", sim_n, "domain dimension");
  sim->add_option("--d", sim_d, "range dimension");
  sim->add_option("--grid", sim_grid, "sample at j/N, j = 1..N (n = 1)");
  sim->add_option("--points", sim_points, "file of points, n whitespace-separated values per line")
      ->check(CLI::ExistingFile);
  sim->add_option("--drift", sim_drift, "drift as JSON");
  sim->add_option("--replica", sim_replica, "replica index");
  sim->add_option("--route", sim_route)->check(CLI::IsMember({"auto", "cholesky"}));
  sim->callback([&] {
    json req = {{"regime", {{"alpha", sim_alpha}, {"n", sim_n}, {"d", sim_d}}},
                {"seed", g.seed},
                {"replica", sim_replica},
                {"route", sim_route}};
    if (!sim_points.empty()) {
      std::ifstream is(sim_points);
      std::vector<double> pts;
      double v;
      while (is >> v) pts.push_back(v);
      req["points"] = pts;
    } else {
      req["points"] = {{"grid", sim_grid}};
    }
    if (!sim_drift.empty()) req["drift"] = parse_json_arg(sim_drift, "--drift");
    CStr csv, side;
    const pd_status s = pd_simulate_json(req.dump().c_str(), &csv.p, &side.p);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    emit(g, "simulate", csv.str(), side.str());
  });

  // ---- dim / profile
  auto estimate = [&](const MeasureArgs& m, json req) {
    pd_measure* mu = nullptr;
    pd_status s = load_measure(m, &mu);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    CStr rep, table;
    s = pd_estimate_json(mu, req.dump().c_str(), &rep.p, &table.p);
    pd_measure_free(mu);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    emit(g, req.at("estimator").get<std::string>(), table.str(), rep.str());
  };

  auto* dim = app.add_subcommand("dim", "dimension estimate of a measure");
  MeasureArgs dim_m;
  add_measure_options(dim, dim_m);
  std::string dim_est = "ballmass", dim_method = "regression", dim_mode = "image", dim_drift;
  int dim_jmin = 2, dim_jmax = 8;
  double dim_base = 2.0, dim_alpha = 0.5;
  std::size_t dim_n = 1, dim_d = 1;
  bool dim_all_atoms = false;
  dim->add_option("--estimator", dim_est)->check(CLI::IsMember({"ballmass", "Gd", "Z_mu"}));
  dim->add_option("--jmin", dim_jmin, "coarsest scale index");
  dim->add_option("--jmax", dim_jmax, "finest scale index");
  dim->add_option("--base", dim_base, "radii base^-j");
  dim->add_option("--method", dim_method)->check(CLI::IsMember({"tail-max", "regression"}));
  dim->add_flag("--all-atoms", dim_all_atoms, "minimum over all atoms, not only interior ones");
  dim->add_option("--alpha", dim_alpha, "Hurst index (Z_mu)");
  dim->add_option("--n", dim_n, "domain dimension (Gd, Z_mu)");
  dim->add_option("--d", dim_d, "range dimension (Gd, Z_mu)");
  dim->add_option("--mode", dim_mode)->check(CLI::IsMember({"image", "graph"}));
  dim->add_option("--drift", dim_drift, "drift as JSON (Z_mu)");
  dim->callback([&] {
    json req = {{"estimator", dim_est},
                {"grid", {{"j_min", dim_jmin}, {"j_max", dim_jmax}, {"base", dim_base}}},
                {"method", dim_method},
                {"interior_only", !dim_all_atoms},
                {"n", dim_n},
                {"d", dim_d},
                {"regime", {{"alpha", dim_alpha}, {"n", dim_n}, {"d", dim_d}}},
                {"mode", dim_mode}};
    if (!dim_drift.empty()) req["drift"] = parse_json_arg(dim_drift, "--drift");
    estimate(dim_m, req);
  });

  auto* prof = app.add_subcommand("profile", "packing dimension profile of a measure");
  MeasureArgs prof_m;
  add_measure_options(prof, prof_m);
  double prof_beta = 1.0, prof_base = 2.0;
  int prof_jmin = 2, prof_jmax = 8;
  std::string prof_method = "regression";
  bool prof_all_atoms = false;
  prof->add_option("--beta", prof_beta, "profile parameter")->required();
  prof->add_option("--jmin", prof_jmin);
  prof->add_option("--jmax", prof_jmax);
  prof->add_option("--base", prof_base);
  prof->add_option("--method", prof_method)->check(CLI::IsMember({"tail-max", "regression"}));
  prof->add_flag("--all-atoms", prof_all_atoms);
  prof->callback([&] {
    estimate(prof_m, {{"estimator", "profile"},
                      {"beta", prof_beta},
                      {"grid", {{"j_min", prof_jmin}, {"j_max", prof_jmax}, {"base", prof_base}}},
                      {"method", prof_method},
                      {"interior_only", !prof_all_atoms}});
  });

  // ---- txset
  auto* tx = app.add_subcommand("txset", "per-level table of the oscillating Cantor-type set");
  double tx_beta = 0.5, tx_delta0 = 0.25;
  std::size_t tx_levels = 12;
  tx->add_option("--beta", tx_beta)->required();
  tx->add_option("--delta0", tx_delta0);
  tx->add_option("--levels", tx_levels);
  tx->callback([&] {
    CStr csv;
    const pd_status s = pd_txset_csv(tx_beta, tx_delta0, tx_levels, &csv.p);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    if (!g.out.empty())
      emit(g, "txset", csv.str(), "");
    else
      std::cout << csv.str();
  });

  // ---- predict
  auto* pred = app.add_subcommand("predict", "closed-form dimension predictions");
  double pr_alpha = 0.5, pr_beta = 1.0;
  unsigned pr_d = 1;
  pred->add_option("--alpha", pr_alpha)->required();
  pred->add_option("--d", pr_d)->required();
  pred->add_option("--beta", pr_beta, "packing dimension of the parameter set")->required();
  pred->callback([&] {
    CStr rep;
    const pd_status s = pd_predict_json(pr_alpha, pr_d, pr_beta, &rep.p);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    emit(g, "predict", "", rep.str());
  });

  // ---- verify
  auto* ver = app.add_subcommand("verify", "property checks; exit status 0 iff all pass");
  std::vector<std::string> checks;
  std::optional<std::size_t> v_trials, v_per_decade, v_resolution, v_levels;
  std::optional<double> v_beta, v_gamma, v_alpha;
  ver->add_option("checks", checks, "checks to run (default: all)")
      ->check(CLI::IsMember(
          {"kernel-chain", "doubling", "parts", "scale-doubling", "eq-ar", "graph-expectation"}));
  ver->add_option("--trials", v_trials);
  ver->add_option("--beta", v_beta, "eq-ar exponent");
  ver->add_option("--per-decade", v_per_decade, "eq-ar grid density");
  ver->add_option("--gamma", v_gamma, "graph-expectation mass exponent");
  ver->add_option("--alpha", v_alpha, "graph-expectation Hurst index");
  ver->add_option("--resolution", v_resolution, "graph-expectation atom level");
  ver->add_option("--levels", v_levels, "graph-expectation base depth");
  ver->callback([&] {
    if (checks.empty())
      checks = {"kernel-chain", "doubling", "parts", "scale-doubling", "eq-ar", "graph-expectation"};
    json opt = {{"seed", g.seed}};
    if (v_trials) opt["trials"] = *v_trials;
    if (v_beta) opt["beta"] = *v_beta;
    if (v_per_decade) opt["per_decade"] = *v_per_decade;
    if (v_gamma) opt["gamma"] = *v_gamma;
    if (v_alpha) opt["alpha"] = *v_alpha;
    if (v_resolution) opt["resolution"] = *v_resolution;
    if (v_levels) opt["levels"] = *v_levels;
    json all = json::array();
    for (const auto& c : checks) {
      CStr rep;
      int passed = 0;
      const pd_status s = pd_verify_json(c.c_str(), opt.dump().c_str(), &rep.p, &passed);
      if (s != PD_OK) {
        exit_code = report_error(s);
        all.push_back({{"name", c}, {"error", pd_last_error()}});
        continue;
      }
      if (!passed && exit_code == 0) exit_code = 1;
      all.push_back(json::parse(rep.str()));
    }
    emit(g, "verify", "", all.dump(2) + "\n");
  });

  // ---- experiment
  auto* exp = app.add_subcommand("experiment", "configured estimation experiments");
  exp->require_subcommand(1);
  auto* run = exp->add_subcommand("run", "run one config");
  std::string cfg;
  run->add_option("config", cfg)->required()->check(CLI::ExistingFile);
  run->callback([&] {
    CStr rep;
    int passed = 0;
    const pd_status s = pd_experiment_run(cfg.c_str(), g.out.c_str(), &rep.p, &passed);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    if (g.out.empty()) std::cout << rep.str();
    exit_code = passed ? 0 : 1;
  });
  auto* suite = exp->add_subcommand("suite", "run every config in a directory");
  std::string dir;
  suite->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  suite->callback([&] {
    CStr csv;
    int ok = 0;
    const pd_status s = pd_experiment_suite(dir.c_str(), g.out.c_str(), &csv.p, &ok);
    if (s != PD_OK) {
      exit_code = report_error(s);
      return;
    }
    std::cout << csv.str();
    exit_code = ok ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "packdim: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
