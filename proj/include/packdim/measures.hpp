#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace packdim {

enum class Norm { euclidean, max };

double distance(std::span<const double> x, std::span<const double> y, Norm norm);

// Finitely supported probability measure on R^m. Atoms are stored
// row-major in one flat coordinate array.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::size_t dim, std::vector<double> coords, std::vector<double> weights);

  static DiscreteMeasure dirac(std::vector<double> point);
  // Equal weights on the given atoms.
  static DiscreteMeasure uniform(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  // Smallest distance between two distinct atoms (infinity for one atom).
  double min_atom_gap(Norm norm) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

// Unnormalized restriction of a measure; total_mass <= 1.
struct SubMeasure {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<double> weights;
  double total_mass = 0.0;
  bool sub_probability = true;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
};

using PointMap = std::function<void(std::span<const double> in, std::span<double> out)>;

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const PointMap& h, std::size_t out_dim);

double ball_mass(const DiscreteMeasure& mu, std::span<const double> x, double r, Norm norm);
double rect_mass(const DiscreteMeasure& mu, std::span<const double> x,
                 std::span<const double> halfwidths);

// mu restricted to D(u, r) x R^d on the first n coordinates, projected to
// the last dim - n coordinates. n = 0 returns mu itself.
SubMeasure slice_measure(const DiscreteMeasure& mu, std::size_t n, std::span<const double> u,
                         double r);

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu);
DiscreteMeasure read_measure_csv(std::istream& is);

}  // namespace packdim
