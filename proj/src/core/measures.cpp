#include "packdim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "packdim/error.hpp"

namespace packdim {

double distance(std::span<const double> x, std::span<const double> y, Norm norm) {
  double acc = 0.0;
  if (norm == Norm::max) {
    for (std::size_t i = 0; i < x.size(); ++i) acc = std::max(acc, std::fabs(x[i] - y[i]));
    return acc;
  }
  if (x.size() == 1) return std::fabs(x[0] - y[0]);
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(acc);
}

namespace {

std::vector<std::size_t> lex_order(std::size_t dim, const std::vector<double>& coords) {
  const std::size_t n = coords.size() / dim;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(coords.begin() + a * dim, coords.begin() + (a + 1) * dim,
                                        coords.begin() + b * dim, coords.begin() + (b + 1) * dim);
  });
  return idx;
}

bool same_atom(std::size_t dim, const std::vector<double>& c, std::size_t a, std::size_t b) {
  return std::equal(c.begin() + a * dim, c.begin() + (a + 1) * dim, c.begin() + b * dim);
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                                 std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  require(dim_ > 0, "DiscreteMeasure: dimension must be positive");
  require(!weights_.empty(), "DiscreteMeasure: no atoms");
  require(coords_.size() == dim_ * weights_.size(),
          "DiscreteMeasure: coordinate count does not match atoms x dim");
  for (double c : coords_) require(std::isfinite(c), "DiscreteMeasure: non-finite coordinate");
  double total = 0.0;
  for (double w : weights_) {
    require(w > 0.0 && std::isfinite(w), "DiscreteMeasure: weights must be positive");
    total += w;
  }
  require(std::fabs(total - 1.0) <= 1e-12, "DiscreteMeasure: weights do not sum to 1");
  const auto idx = lex_order(dim_, coords_);
  for (std::size_t k = 1; k < idx.size(); ++k)
    require(!same_atom(dim_, coords_, idx[k - 1], idx[k]), "DiscreteMeasure: repeated atom");
}

DiscreteMeasure DiscreteMeasure::dirac(std::vector<double> point) {
  const std::size_t d = point.size();
  return DiscreteMeasure(d, std::move(point), {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim, std::vector<double> coords) {
  require(dim > 0 && !coords.empty() && coords.size() % dim == 0,
          "DiscreteMeasure::uniform: bad coordinate array");
  const std::size_t n = coords.size() / dim;
  return DiscreteMeasure(dim, std::move(coords),
                         std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double DiscreteMeasure::min_atom_gap(Norm norm) const {
  const std::size_t n = size();
  double best = std::numeric_limits<double>::infinity();
  if (n < 2) return best;
  if (dim_ == 1) {
    std::vector<double> x = coords_;
    std::sort(x.begin(), x.end());
    for (std::size_t i = 1; i < n; ++i) best = std::min(best, x[i] - x[i - 1]);
    return best;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, distance(atom(i), atom(j), norm));
  return best;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const PointMap& h, std::size_t out_dim) {
  require(out_dim > 0, "pushforward: output dimension must be positive");
  const std::size_t n = mu.size();
  std::vector<double> img(n * out_dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> out(img.data() + i * out_dim, out_dim);
    h(mu.atom(i), out);
    for (double v : out)
      if (!std::isfinite(v)) fail(ErrorCode::invalid_map, "pushforward: map produced a non-finite coordinate");
  }
  // Merge exact duplicates; the merged atom keeps the position of its first
  // occurrence in the input order.
  const auto idx = lex_order(out_dim, img);
  std::vector<std::size_t> rep(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && same_atom(out_dim, img, idx[k - 1], idx[k]))
      rep[idx[k]] = rep[idx[k - 1]];
    else
      rep[idx[k]] = idx[k];
  }
  std::vector<double> coords, weights;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = slot.try_emplace(rep[i], weights.size());
    if (fresh) {
      coords.insert(coords.end(), img.begin() + i * out_dim, img.begin() + (i + 1) * out_dim);
      weights.push_back(0.0);
    }
    weights[it->second] += mu.weight(i);
  }
  // Re-normalize only the rounding drift from summation.
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-12)
    for (double& w : weights) w /= total;
  return DiscreteMeasure(out_dim, std::move(coords), std::move(weights));
}

double ball_mass(const DiscreteMeasure& mu, std::span<const double> x, double r, Norm norm) {
  require(x.size() == mu.dim(), "ball_mass: point dimension does not match measure");
  require(r >= 0.0, "ball_mass: negative radius");
  double m = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (distance(mu.atom(i), x, norm) <= r) m += mu.weight(i);
  return std::min(m, 1.0);
}

double rect_mass(const DiscreteMeasure& mu, std::span<const double> x,
                 std::span<const double> halfwidths) {
  require(x.size() == mu.dim() && halfwidths.size() == mu.dim(),
          "rect_mass: dimension mismatch");
  for (double h : halfwidths) require(h >= 0.0, "rect_mass: negative halfwidth");
  double m = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto a = mu.atom(i);
    bool in = true;
    for (std::size_t k = 0; k < a.size() && in; ++k) in = std::fabs(a[k] - x[k]) <= halfwidths[k];
    if (in) m += mu.weight(i);
  }
  return std::min(m, 1.0);
}

SubMeasure slice_measure(const DiscreteMeasure& mu, std::size_t n, std::span<const double> u,
                         double r) {
  require(n < mu.dim(), "slice_measure: n must be smaller than the measure dimension");
  require(u.size() == n, "slice_measure: u must have n coordinates");
  require(r >= 0.0, "slice_measure: negative radius");
  SubMeasure s;
  s.dim = mu.dim() - n;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto a = mu.atom(i);
    bool in = true;
    for (std::size_t k = 0; k < n && in; ++k) in = std::fabs(a[k] - u[k]) <= r;
    if (!in) continue;
    s.coords.insert(s.coords.end(), a.begin() + n, a.end());
    s.weights.push_back(mu.weight(i));
    s.total_mass += mu.weight(i);
  }
  return s;
}

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu) {
  for (std::size_t k = 0; k < mu.dim(); ++k) os << 'x' << (k + 1) << ',';
  os << "weight\n";
  char buf[32];
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.atom(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", c);
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", mu.weight(i));
    os << buf << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    fail(ErrorCode::io, "measure CSV: bad number '" + s + "' on row " + std::to_string(row));
  return v;
}

}  // namespace

DiscreteMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::io, "measure CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "weight")
    fail(ErrorCode::io, "measure CSV: header must be x1,...,xm,weight");
  const std::size_t dim = header.size() - 1;
  for (std::size_t k = 0; k < dim; ++k)
    if (header[k] != "x" + std::to_string(k + 1))
      fail(ErrorCode::io, "measure CSV: header must be x1,...,xm,weight");
  std::vector<double> coords, weights;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != dim + 1)
      fail(ErrorCode::io, "measure CSV: wrong column count on row " + std::to_string(row));
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(parse_number(cells[k], row));
    weights.push_back(parse_number(cells[dim], row));
  }
  return DiscreteMeasure(dim, std::move(coords), std::move(weights));
}

}  // namespace packdim
