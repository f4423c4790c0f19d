#include "packdim/numerics.hpp"

#include <limits>
#include <numbers>
#include <string>

#include "packdim/error.hpp"

namespace packdim {

double gaussian_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {
// Upper tail 1 - Phi(z), accurate for large z.
double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
}  // namespace

double gaussian_interval_prob(double rho, double a, double r) {
  if (!(rho >= 0.0) || !(r >= 0.0) || !std::isfinite(a))
    fail(ErrorCode::invalid_argument, "gaussian_interval_prob: need rho >= 0, r >= 0, finite a");
  a = std::fabs(a);
  if (rho == 0.0) return a <= r ? 1.0 : 0.0;
  const double hi = (a + r) / rho;
  const double lo = (a - r) / rho;
  double p;
  if (lo >= 0.0) {
    p = upper_tail(lo) - upper_tail(hi);
  } else {
    // interval straddles 0: 1 - P(N < lo) - P(N > hi)
    p = 1.0 - upper_tail(-lo) - upper_tail(hi);
  }
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

namespace {

// Returns the failing pivot index, or n on success.
std::size_t try_cholesky(const Matrix& a, double jitter, Matrix& l) {
  const std::size_t n = a.size();
  l = Matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j) + jitter;
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      // exact zero pivot with zero column is tolerated only under jitter
      return j;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return n;
}

}  // namespace

CholeskyFactor cholesky_psd(const Matrix& m) {
  const std::size_t n = m.size();
  require(n > 0, "cholesky_psd: empty matrix");
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double x = m(i, j), y = m(j, i);
      if (std::fabs(x - y) > 1e-12 * (std::fabs(x) + std::fabs(y) + 1e-300))
        fail(ErrorCode::invalid_argument, "cholesky_psd: matrix is not symmetric");
    }
    trace += m(i, i);
  }
  CholeskyFactor out;
  std::size_t pivot = try_cholesky(m, 0.0, out.lower);
  if (pivot == n) return out;
  const double base = trace > 0.0 ? 1e-12 * trace / static_cast<double>(n) : 0.0;
  double jitter = base;
  for (int retry = 1; retry <= 4 && base > 0.0; ++retry) {
    pivot = try_cholesky(m, jitter, out.lower);
    if (pivot == n) {
      out.jitter = jitter;
      out.retries = retry;
      return out;
    }
    jitter *= 10.0;
  }
  throw NotPositiveSemidefinite(pivot);
}

LogValue LogValue::from_magnitude(double x) {
  require(x > 0.0 && std::isfinite(x), "LogValue: magnitude must be positive and finite");
  return LogValue{std::log(static_cast<long double>(x))};
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomStream RandomStream::replica(Seed seed, std::uint64_t i) {
  return RandomStream(mix64(seed.master ^ mix64(i + 1)));
}

std::uint64_t RandomStream::next_u64() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double RandomStream::uniform() noexcept {
  // 53 random bits, shifted off zero
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

}  // namespace packdim
