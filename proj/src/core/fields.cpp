#include "packdim/fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "packdim/error.hpp"

namespace packdim {

namespace {
constexpr std::size_t kMaxPoints = std::size_t{1} << 14;

double norm2(std::span<const double> x) {
  if (x.size() == 1) return std::fabs(x[0]);
  double a = 0.0;
  for (double v : x) a += v * v;
  return std::sqrt(a);
}

double dist2(std::span<const double> x, std::span<const double> y) {
  if (x.size() == 1) return std::fabs(x[0] - y[0]);
  double a = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) a += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(a);
}
}  // namespace

void FieldSpec::validate() const {
  require(hurst > 0.0 && hurst < 1.0, "FieldSpec: hurst index must lie in (0,1)");
  require(n >= 1 && d >= 1, "FieldSpec: dimensions must be positive");
}

// ====================================================================
// Drift catalog

void DriftSpec::validate(const FieldSpec& spec) const {
  switch (kind) {
    case DriftKind::zero:
      break;
    case DriftKind::constant:
      require(value.size() == spec.d, "constant drift: value must have d entries");
      for (double v : value) require(std::isfinite(v), "constant drift: non-finite entry");
      break;
    case DriftKind::holder:
      require(direction.size() == spec.d, "holder drift: direction must have d entries");
      require(exponent > 0.0 && std::isfinite(exponent), "holder drift: exponent must be positive");
      break;
    case DriftKind::polynomial:
      for (const auto& t : terms) {
        require(t.coord < spec.d, "polynomial drift: output coordinate out of range");
        require(t.powers.size() == spec.n, "polynomial drift: powers must have n entries");
        require(std::isfinite(t.coef), "polynomial drift: non-finite coefficient");
      }
      break;
  }
}

void DriftSpec::evaluate(std::span<const double> t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  switch (kind) {
    case DriftKind::zero:
      return;
    case DriftKind::constant:
      std::copy(value.begin(), value.end(), out.begin());
      return;
    case DriftKind::holder: {
      const double s = std::pow(norm2(t), exponent);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * direction[i];
      return;
    }
    case DriftKind::polynomial:
      for (const auto& term : terms) {
        double v = term.coef;
        for (std::size_t k = 0; k < term.powers.size(); ++k)
          for (unsigned p = 0; p < term.powers[k]; ++p) v *= t[k];
        out[term.coord] += v;
      }
      return;
  }
}

nlohmann::json to_json(const FieldSpec& s) {
  return {{"alpha", s.hurst}, {"n", s.n}, {"d", s.d}};
}

FieldSpec field_spec_from_json(const nlohmann::json& j) {
  FieldSpec s;
  try {
    s.hurst = j.at("alpha").get<double>();
    s.n = j.value("n", std::size_t{1});
    s.d = j.at("d").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("field spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json to_json(const DriftSpec& f) {
  switch (f.kind) {
    case DriftKind::zero:
      return {{"kind", "zero"}};
    case DriftKind::constant:
      return {{"kind", "constant"}, {"value", f.value}};
    case DriftKind::holder:
      return {{"kind", "holder"}, {"exponent", f.exponent}, {"direction", f.direction}};
    case DriftKind::polynomial: {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& t : f.terms)
        terms.push_back({{"coord", t.coord}, {"coef", t.coef}, {"powers", t.powers}});
      return {{"kind", "polynomial"}, {"terms", terms}};
    }
  }
  return {};
}

DriftSpec drift_from_json(const nlohmann::json& j) {
  DriftSpec f;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
      f.kind = DriftKind::zero;
    } else if (kind == "constant") {
      f.kind = DriftKind::constant;
      f.value = j.at("value").get<std::vector<double>>();
    } else if (kind == "holder") {
      f.kind = DriftKind::holder;
      f.exponent = j.at("exponent").get<double>();
      f.direction = j.at("direction").get<std::vector<double>>();
    } else if (kind == "polynomial") {
      f.kind = DriftKind::polynomial;
      for (const auto& t : j.at("terms"))
        f.terms.push_back({t.at("coord").get<std::size_t>(), t.at("coef").get<double>(),
                           t.at("powers").get<std::vector<unsigned>>()});
    } else {
      fail(ErrorCode::config, "drift: unknown kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("drift: ") + e.what());
  }
  return f;
}

// ====================================================================
// Covariance

double fbm_covariance(std::span<const double> t, std::span<const double> s, double alpha) {
  const double a2 = 2.0 * alpha;
  return 0.5 * (std::pow(norm2(t), a2) + std::pow(norm2(s), a2) - std::pow(dist2(t, s), a2));
}

double fbm_covariance(double t, double s, double alpha) {
  return fbm_covariance(std::span<const double>(&t, 1), std::span<const double>(&s, 1), alpha);
}

double canonical_metric(const FieldSpec& spec, std::span<const double> t, std::span<const double> s) {
  require(t.size() == spec.n && s.size() == spec.n, "canonical_metric: dimension mismatch");
  return std::pow(dist2(t, s), spec.hurst);
}

// ====================================================================
// Sampling routes

namespace {

std::mutex& fftw_plan_lock() {
  static std::mutex m;
  return m;
}

// Fractional Gaussian noise of length m (unit step) by circulant embedding.
// Returns false if the embedding has a negative eigenvalue.
bool circulant_fgn(std::size_t m, double alpha, RandomStream& rng, std::vector<double>& out) {
  const std::size_t len = 2 * m;
  const double a2 = 2.0 * alpha;
  auto gamma = [a2](double k) {
    return 0.5 * (std::pow(k + 1.0, a2) - 2.0 * std::pow(k, a2) + std::pow(std::fabs(k - 1.0), a2));
  };
  fftw_complex* buf = fftw_alloc_complex(len);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> g(fftw_plan_lock());
    plan = fftw_plan_dft_1d(static_cast<int>(len), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t j = 0; j < len; ++j) {
    const std::size_t k = j <= m ? j : len - j;
    buf[j][0] = gamma(static_cast<double>(k));
    buf[j][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<double> lambda(len);
  bool ok = true;
  for (std::size_t j = 0; j < len; ++j) {
    lambda[j] = buf[j][0];
    if (lambda[j] < 0.0) {
      if (lambda[j] < -1e-10) ok = false;
      lambda[j] = 0.0;
    }
  }
  if (ok) {
    const double L = static_cast<double>(len);
    const double z0 = rng.normal(), zm = rng.normal();
    buf[0][0] = std::sqrt(lambda[0] / L) * z0;
    buf[0][1] = 0.0;
    buf[m][0] = std::sqrt(lambda[m] / L) * zm;
    buf[m][1] = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      const double s = std::sqrt(lambda[j] / (2.0 * L));
      const double re = rng.normal(), im = rng.normal();
      buf[j][0] = s * re;
      buf[j][1] = s * im;
      buf[len - j][0] = s * re;
      buf[len - j][1] = -s * im;
    }
    fftw_execute(plan);
    out.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) out[j] = buf[j][0];
  }
  {
    std::lock_guard<std::mutex> g(fftw_plan_lock());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return ok;
}

// Step h if pts is {0, h, ..., (m-1)h} or {h, 2h, ..., mh}; 0 otherwise.
double uniform_grid_step(const std::vector<double>& pts, bool& starts_at_zero) {
  if (pts.size() < 2) return 0.0;
  starts_at_zero = pts[0] == 0.0;
  const double h = starts_at_zero ? pts[1] : pts[0];
  if (!(h > 0.0)) return 0.0;
  const double offset = starts_at_zero ? 0.0 : 1.0;
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (std::fabs(pts[j] - (static_cast<double>(j) + offset) * h) > 1e-9 * h) return 0.0;
  return h;
}

void sample_fft(const FieldSpec& spec, const std::vector<double>& pts, double h, bool zero_first,
                RandomStream& rng, std::vector<double>& values, bool& ok) {
  const std::size_t np = pts.size();
  const std::size_t steps = zero_first ? np - 1 : np;
  const double scale = std::pow(h, spec.hurst);
  std::vector<double> noise;
  ok = true;
  for (std::size_t i = 0; i < spec.d; ++i) {
    if (!circulant_fgn(std::max<std::size_t>(steps, 1), spec.hurst, rng, noise)) {
      ok = false;
      return;
    }
    double acc = 0.0;
    std::size_t j = 0;
    if (zero_first) values[0 * spec.d + i] = 0.0, j = 1;
    for (std::size_t s = 0; s < steps; ++s, ++j) {
      acc += noise[s];
      values[j * spec.d + i] = scale * acc;
    }
  }
}

void sample_increments(const FieldSpec& spec, const std::vector<double>& pts, RandomStream& rng,
                       std::vector<double>& values) {
  // Brownian motion on R: X(0) = 0 and independent increments, sampled in
  // order of distance from 0 on each side.
  const std::size_t np = pts.size();
  std::vector<std::size_t> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool pa = pts[a] >= 0.0, pb = pts[b] >= 0.0;
    if (pa != pb) return pa;
    return std::fabs(pts[a]) < std::fabs(pts[b]);
  });
  for (std::size_t i = 0; i < spec.d; ++i) {
    double prev_t = 0.0, prev_x = 0.0;
    bool positive = true;
    for (std::size_t idx : order) {
      const double t = pts[idx];
      if ((t >= 0.0) != positive) {
        positive = false;
        prev_t = 0.0;
        prev_x = 0.0;
      }
      const double dt = std::fabs(t - prev_t);
      const double x = dt == 0.0 ? prev_x : prev_x + std::sqrt(dt) * rng.normal();
      values[idx * spec.d + i] = x;
      prev_t = t;
      prev_x = x;
    }
  }
}

void sample_cholesky(const FieldSpec& spec, const std::vector<double>& pts, RandomStream& rng,
                     std::vector<double>& values) {
  const std::size_t np = pts.size() / spec.n;
  auto pt = [&](std::size_t i) { return std::span<const double>(pts.data() + i * spec.n, spec.n); };
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < np; ++i)
    if (norm2(pt(i)) > 0.0) live.push_back(i);
  if (live.empty()) return;
  Matrix cov(live.size());
  for (std::size_t a = 0; a < live.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      const double c = fbm_covariance(pt(live[a]), pt(live[b]), spec.hurst);
      cov(a, b) = c;
      cov(b, a) = c;
    }
  const CholeskyFactor f = cholesky_psd(cov);
  std::vector<double> z(live.size());
  for (std::size_t i = 0; i < spec.d; ++i) {
    for (double& v : z) v = rng.normal();
    for (std::size_t a = 0; a < live.size(); ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b <= a; ++b) acc += f.lower(a, b) * z[b];
      values[live[a] * spec.d + i] = acc;
    }
  }
}

}  // namespace

SamplePath sample(const FieldSpec& spec, std::vector<double> points, Seed seed,
                  std::uint64_t replica, SampleRoute route) {
  spec.validate();
  require(!points.empty() && points.size() % spec.n == 0, "sample: point array must hold n coordinates per point");
  const std::size_t np = points.size() / spec.n;
  require(np <= kMaxPoints, "sample: at most 2^14 points");
  for (double v : points) require(std::isfinite(v), "sample: non-finite point coordinate");

  SamplePath path;
  path.spec = spec;
  path.seed = seed;
  path.replica = replica;
  path.values.assign(np * spec.d, 0.0);
  RandomStream rng = RandomStream::replica(seed, replica);

  if (route == SampleRoute::automatic && spec.n == 1) {
    bool zero_first = false;
    const double h = uniform_grid_step(points, zero_first);
    if (h > 0.0) {
      bool ok = false;
      sample_fft(spec, points, h, zero_first, rng, path.values, ok);
      if (ok) {
        path.method = "fft";
        path.points = std::move(points);
        return path;
      }
      rng = RandomStream::replica(seed, replica);
    }
    if (spec.hurst == 0.5) {
      sample_increments(spec, points, rng, path.values);
      path.method = "increments";
      path.points = std::move(points);
      return path;
    }
  }
  sample_cholesky(spec, points, rng, path.values);
  path.method = "cholesky";
  path.points = std::move(points);
  return path;
}

SamplePath add_drift(SamplePath path, const DriftSpec& drift) {
  drift.validate(path.spec);
  if (drift.kind == DriftKind::zero) return path;
  std::vector<double> f(path.spec.d);
  for (std::size_t i = 0; i < path.size(); ++i) {
    drift.evaluate(path.point(i), f);
    for (std::size_t k = 0; k < path.spec.d; ++k) path.values[i * path.spec.d + k] += f[k];
  }
  return path;
}

std::vector<double> graph_points(const SamplePath& path) {
  const std::size_t n = path.spec.n, d = path.spec.d;
  std::vector<double> out;
  out.reserve(path.size() * (n + d));
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto p = path.point(i);
    auto v = path.value(i);
    out.insert(out.end(), p.begin(), p.end());
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace packdim
