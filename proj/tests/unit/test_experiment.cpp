#include <filesystem>
#include <fstream>

#include "packdim/experiment.hpp"
#include "support.hpp"

using namespace packdim;
namespace fs = std::filesystem;

namespace {

nlohmann::json small_config(const std::string& name) {
  return {{"name", name},
          {"regime", {{"alpha", 0.5}, {"d", 1}, {"n", 1}}},
          {"set", {{"kind", "interval"}, {"points", 1024}}},
          {"mode", "graph"},
          {"measure_resolution", 512},
          {"box_grid", {{"j_min", 3}, {"j_max", 7}}},
          {"kernel_grid", {{"j_min", 2}, {"j_max", 6}}},
          {"replicas", 2},
          {"seed", 17},
          {"tolerance", {{"box", 0.3}, {"kernel", 0.3}}}};
}

fs::path scratch(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / ("packdim_unit_" + leaf);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("config round trip and hash") {
  const auto c = config_from_json(small_config("a"));
  CHECK(c.replicas == 2);
  CHECK(c.box_method == ExponentMethod::tail_max);
  const auto back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  auto other = small_config("a");
  other["seed"] = 18;
  CHECK(config_hash(config_from_json(other)) != config_hash(c));
}

TEST_CASE("config validation") {
  auto zero = small_config("z");
  zero["replicas"] = 0;
  CHECK_CODE(config_from_json(zero), ErrorCode::config);
  auto kind = small_config("k");
  kind["set"]["kind"] = "carpet";
  CHECK_CODE(config_from_json(kind), ErrorCode::config);
  auto missing = small_config("m");
  missing.erase("seed");
  CHECK_CODE(config_from_json(missing), ErrorCode::config);
}

TEST_CASE("experiments are deterministic and name their provenance") {
  const auto c = config_from_json(small_config("det"));
  const auto a = run_experiment(c), b = run_experiment(c);
  CHECK(a.json.dump() == b.json.dump());
  CHECK(a.box_csv == b.box_csv);
  CHECK(a.predicted == 1.5);
  REQUIRE(a.estimate_box.has_value());
  REQUIRE(a.estimate_kernel.has_value());
  for (const char* k : {"box", "kernel"}) {
    const auto& e = a.json.at("estimated").at(k);
    CHECK(e.contains("grid"));
    CHECK(e.contains("method"));
    CHECK(e.contains("replicas"));
    CHECK(e.contains("seed"));
  }
  CHECK(a.json.at("config_hash") == config_hash(c));
  CHECK(a.json.at("tool") == tool_version());
}

TEST_CASE("suite") {
  const auto empty = scratch("empty");
  CHECK_CODE(run_suite(empty, ""), ErrorCode::invalid_argument);

  const auto dir = scratch("suite"), out1 = scratch("out1"), out2 = scratch("out2");
  std::ofstream(dir / "a.json") << small_config("a").dump();
  auto bad = small_config("b");
  bad["replicas"] = 0;
  std::ofstream(dir / "b.json") << bad.dump();
  const auto r1 = run_suite(dir, out1);
  run_suite(dir, out2);
  CHECK_FALSE(r1.all_pass);
  CHECK(r1.errors.size() == 2);
  CHECK(r1.errors[0].empty());
  CHECK_FALSE(r1.errors[1].empty());
  CHECK(slurp(out1 / "summary.csv") == slurp(out2 / "summary.csv"));
  CHECK(slurp(out1 / "a.json") == slurp(out2 / "a.json"));
  CHECK(slurp(out1 / "summary.csv").rfind("name,predicted,estimate_box,estimate_kernel,gap,pass\n", 0) == 0);
  CHECK(fs::exists(out1 / "a_box.csv"));
  CHECK(fs::exists(out1 / "a_kernel.csv"));
}
