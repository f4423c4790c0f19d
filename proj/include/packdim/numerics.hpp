#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace packdim {

double gaussian_cdf(double z) noexcept;

// P(|rho*N - a| <= r) for standard normal N; rho == 0 is a point mass at 0.
double gaussian_interval_prob(double rho, double a, double r);

// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  static Matrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;  // total amount added to the diagonal
  int retries = 0;
};

// Throws NotPositiveSemidefinite (with the failing pivot) once the jitter
// schedule 1e-12*trace/dim, x10 per retry, 4 retries, is exhausted.
CholeskyFactor cholesky_psd(const Matrix& m);

// Positive magnitude stored by its natural log. long double keeps the
// A_beta scales (log 1/delta_k ~ 2^{k^2/2}) finite up to k = 60 on x86-64.
struct LogValue {
  long double logv = 0.0L;

  static LogValue from_log(long double l) { return LogValue{l}; }
  static LogValue from_magnitude(double x);

  // exp(logv); underflows to 0 / overflows to inf outside double range.
  double magnitude() const { return static_cast<double>(std::exp(logv)); }

  LogValue operator*(LogValue o) const { return LogValue{logv + o.logv}; }
  LogValue operator/(LogValue o) const { return LogValue{logv - o.logv}; }
  LogValue pow(long double p) const { return LogValue{logv * p}; }
  auto operator<=>(const LogValue&) const = default;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

struct Seed {
  std::uint64_t master = 0;
};

// Replica i of a Seed draws from SplitMix64 started at
// mix64(master ^ mix64(i + 1)). Normals use Box-Muller on two uniforms,
// both outputs consumed in order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}
  static RandomStream replica(Seed seed, std::uint64_t i);

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;  // in (0, 1)
  double normal() noexcept;

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace packdim
