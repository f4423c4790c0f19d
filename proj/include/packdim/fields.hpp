#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "packdim/numerics.hpp"

namespace packdim {

struct FieldSpec {
  double hurst = 0.5;    // alpha
  std::size_t n = 1;     // domain dimension
  std::size_t d = 1;     // range dimension

  void validate() const;
};

enum class DriftKind { zero, constant, holder, polynomial };

struct PolynomialTerm {
  std::size_t coord = 0;             // output coordinate i
  double coef = 0.0;
  std::vector<unsigned> powers;      // exponent of each input coordinate
};

// Closed catalog of drifts f: R^n -> R^d.
//   zero        f = 0
//   constant    f = value
//   holder      f(t) = |t|^exponent * direction
//   polynomial  f_i(t) = sum of coef * prod_k t_k^powers[k] over terms for i
struct DriftSpec {
  DriftKind kind = DriftKind::zero;
  std::vector<double> value;
  double exponent = 1.0;
  std::vector<double> direction;
  std::vector<PolynomialTerm> terms;

  void validate(const FieldSpec& spec) const;
  void evaluate(std::span<const double> t, std::span<double> out) const;
};

nlohmann::json to_json(const FieldSpec& s);
FieldSpec field_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DriftSpec& f);
DriftSpec drift_from_json(const nlohmann::json& j);

struct SamplePath {
  FieldSpec spec;
  std::vector<double> points;  // flat, n per point
  std::vector<double> values;  // flat, d per point
  Seed seed;
  std::uint64_t replica = 0;
  std::string method;          // "fft", "increments" or "cholesky"

  std::size_t size() const noexcept { return spec.n ? points.size() / spec.n : 0; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * spec.n, spec.n}; }
  std::span<const double> value(std::size_t i) const { return {values.data() + i * spec.d, spec.d}; }
};

double fbm_covariance(std::span<const double> t, std::span<const double> s, double alpha);
double fbm_covariance(double t, double s, double alpha);
// Same for every coordinate: |t - s|^alpha.
double canonical_metric(const FieldSpec& spec, std::span<const double> t, std::span<const double> s);

enum class SampleRoute { automatic, cholesky };

// Coordinate fields are drawn one after another from
// RandomStream::replica(seed, replica). Uniform 1-D grids {jh} or {(j+1)h}
// use circulant embedding; alpha = 1/2 on other 1-D sets uses independent
// increments; everything else uses Cholesky of the covariance matrix
// restricted to points of positive variance.
SamplePath sample(const FieldSpec& spec, std::vector<double> points, Seed seed,
                  std::uint64_t replica = 0, SampleRoute route = SampleRoute::automatic);

SamplePath add_drift(SamplePath path, const DriftSpec& drift);

// (t, X(t)) rows, flat with n + d coordinates per point.
std::vector<double> graph_points(const SamplePath& path);

}  // namespace packdim
