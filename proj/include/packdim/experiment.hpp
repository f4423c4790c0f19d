#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "packdim/estimators.hpp"
#include "packdim/fields.hpp"
#include "packdim/kernels.hpp"

namespace packdim {

const char* tool_version() noexcept;

enum class SetKind { interval, cantor, txset };

struct SetSpec {
  SetKind kind = SetKind::interval;
  std::size_t points = 1024;  // interval: sample points j/points, j = 1..points
  unsigned branches = 2;      // cantor
  double ratio = 1.0 / 3.0;   // cantor
  double beta = 0.5;          // txset
  double delta0 = 0.25;       // txset
  std::size_t level = 8;      // cantor / txset: sampled level
};

struct ExperimentConfig {
  std::string name;
  FieldSpec field;
  SetSpec set;
  DriftSpec drift;
  FieldMode mode = FieldMode::image;
  std::size_t measure_resolution = 1024;  // interval: atoms; cantor/txset: level
  ScaleGrid box_grid{4, 9, 2.0};
  ScaleGrid kernel_grid{3, 7, 2.0};
  ExponentMethod box_method = ExponentMethod::tail_max;
  ExponentMethod kernel_method = ExponentMethod::regression;
  bool run_box = true;
  bool run_kernel = true;
  std::size_t replicas = 8;
  std::uint64_t seed = 1;
  double tolerance_box = 0.25;
  double tolerance_kernel = 0.1;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

struct PredictionReport {
  std::string name;
  std::string config_hash;
  double predicted = 0.0;
  std::string formula;
  std::optional<double> estimate_box;
  std::optional<double> estimate_kernel;
  double gap = 0.0;   // largest |estimate - predicted| over the estimators run
  bool pass = false;
  nlohmann::json json;           // full report
  std::string box_csv;           // replica,scale,count,ratio
  std::string kernel_csv;        // atom,scale,V,ratio
};

PredictionReport run_experiment(const ExperimentConfig& config);
// Writes <name>.json, <name>_box.csv, <name>_kernel.csv into out_dir.
void write_report(const PredictionReport& report, const std::filesystem::path& out_dir);

struct SuiteResult {
  std::vector<PredictionReport> reports;
  std::vector<std::string> errors;  // per config, empty if it ran
  std::vector<std::string> names;
  std::string summary_csv;
  bool all_pass = false;
};

// Runs every *.json config in dir (sorted by file name). Reports and
// summary.csv go to out_dir when it is non-empty.
SuiteResult run_suite(const std::filesystem::path& dir, const std::filesystem::path& out_dir);

std::string format_double(double v);

}  // namespace packdim
