#include <cmath>

#include "packdim/fields.hpp"
#include "support.hpp"

using namespace packdim;

TEST_CASE("fbm covariance and canonical metric") {
  CHECK(fbm_covariance(0.0, 0.7, 0.5) == 0.0);
  CHECK(fbm_covariance(1.0, 1.0, 0.5) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1.0, 2.0, 0.5) == doctest::Approx(1.0));
  CHECK(canonical_metric(FieldSpec{0.3, 1, 1}, std::vector<double>{1.0}, std::vector<double>{1.0}) == 0.0);
  CHECK(canonical_metric(FieldSpec{0.5, 1, 1}, std::vector<double>{0.0}, std::vector<double>{4.0}) == doctest::Approx(2.0));
  RandomStream rs = RandomStream::replica(Seed{3}, 0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> t{rs.uniform(), rs.uniform()}, s{rs.uniform(), rs.uniform()}, u{rs.uniform(), rs.uniform()};
    const FieldSpec f{0.1 + 0.8 * rs.uniform(), 2, 1};
    CHECK(canonical_metric(f, t, s) <= canonical_metric(f, t, u) + canonical_metric(f, u, s) + 1e-12);
  }
}

TEST_CASE("sample: zero point, determinism and routes") {
  const FieldSpec spec{0.5, 1, 2};
  const std::vector<double> pts{0.0, 0.25, 0.5, 1.0};
  const auto a = sample(spec, pts, Seed{5}, 0);
  const auto b = sample(spec, pts, Seed{5}, 0);
  CHECK(a.values == b.values);
  CHECK(a.values[0] == 0.0);
  CHECK(a.values[1] == 0.0);
  const auto c = sample(spec, pts, Seed{5}, 1);
  CHECK(a.values != c.values);

  std::vector<double> grid(64);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = (j + 1) / 64.0;
  CHECK(sample(FieldSpec{0.3, 1, 1}, grid, Seed{1}, 0).method == "fft");
  CHECK(sample(FieldSpec{0.3, 1, 1}, grid, Seed{1}, 0, SampleRoute::cholesky).method == "cholesky");
  CHECK(sample(FieldSpec{0.5, 1, 1}, std::vector<double>{0.3, 0.1, 0.7}, Seed{1}, 0).method == "increments");
  CHECK_CODE(sample(FieldSpec{1.0, 1, 1}, grid, Seed{1}, 0), ErrorCode::invalid_argument);
}

namespace {

// Sample variance of X(1) over replicas and the correlation between coordinates.
void variance_check(double alpha, SampleRoute route, const std::vector<double>& pts, std::size_t idx) {
  const int reps = 10000;
  double s2 = 0, cross = 0;
  for (int k = 0; k < reps; ++k) {
    const auto p = sample(FieldSpec{alpha, 1, 2}, pts, Seed{99}, static_cast<std::uint64_t>(k), route);
    const double x = p.values[idx * 2], y = p.values[idx * 2 + 1];
    s2 += x * x;
    cross += x * y;
  }
  const double var = s2 / reps;
  const double expected = std::pow(pts[idx], 2 * alpha);
  CHECK(var / expected == doctest::Approx(1.0).epsilon(0.06));
  CHECK(std::fabs(cross / reps) / expected <= 0.05);
}

}  // namespace

TEST_CASE("sample variance matches the covariance on every route") {
  variance_check(0.5, SampleRoute::cholesky, {0.0, 1.0}, 1);
  variance_check(0.5, SampleRoute::automatic, {0.0, 1.0}, 1);
  std::vector<double> grid(16);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = (j + 1) / 16.0;
  variance_check(0.7, SampleRoute::automatic, grid, 15);
  variance_check(0.3, SampleRoute::automatic, grid, 15);
  variance_check(0.3, SampleRoute::cholesky, {0.2, 0.9, 0.4}, 1);
}

TEST_CASE("drift catalog") {
  const FieldSpec spec{0.5, 1, 1};
  const std::vector<double> pts{0.0, 0.5, 1.0};
  const auto p = sample(spec, pts, Seed{2}, 0);
  CHECK(add_drift(p, DriftSpec{}).values == p.values);

  DriftSpec c;
  c.kind = DriftKind::constant;
  c.value = {3.0};
  const auto pc = add_drift(p, c);
  for (std::size_t i = 0; i < 3; ++i) CHECK(pc.values[i] == p.values[i] + 3.0);

  DriftSpec lin;
  lin.kind = DriftKind::polynomial;
  lin.terms = {PolynomialTerm{0, 1.0, {1}}};
  CHECK(add_drift(p, lin).values[2] == doctest::Approx(p.values[2] + 1.0));

  DriftSpec h;
  h.kind = DriftKind::holder;
  h.exponent = 0.5;
  h.direction = {2.0};
  std::vector<double> out(1);
  h.evaluate(std::vector<double>{0.25}, out);
  CHECK(out[0] == doctest::Approx(1.0));

  DriftSpec wrong;
  wrong.kind = DriftKind::constant;
  wrong.value = {1.0, 2.0};
  CHECK_CODE(wrong.validate(spec), ErrorCode::invalid_argument);
}

TEST_CASE("drift JSON round trip") {
  DriftSpec p;
  p.kind = DriftKind::polynomial;
  p.terms = {PolynomialTerm{0, 0.5, {2}}, PolynomialTerm{0, -1.0, {0}}};
  const auto back = drift_from_json(to_json(p));
  CHECK(to_json(back) == to_json(p));
  CHECK_CODE(drift_from_json(nlohmann::json{{"kind", "sin"}}), ErrorCode::config);
  const FieldSpec f{0.4, 2, 3};
  const auto g = field_spec_from_json(to_json(f));
  CHECK(g.hurst == 0.4);
  CHECK(g.n == 2);
  CHECK(g.d == 3);
}

TEST_CASE("graph points") {
  const auto p = sample(FieldSpec{0.5, 1, 1}, std::vector<double>{0.0, 1.0}, Seed{1}, 0);
  const auto g = graph_points(p);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 1.0);
  CHECK(g[3] == p.values[1]);
}
