#include <cmath>

#include "packdim/kernels.hpp"
#include "packdim/numerics.hpp"
#include "support.hpp"

using namespace packdim;

namespace {

DiscreteMeasure random_measure(RandomStream& rs, std::size_t dim, std::size_t n) {
  std::vector<double> c(dim * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) c[i * dim + k] = (k == 0 ? static_cast<double>(i) : 0.0) + rs.uniform();
  return DiscreteMeasure::uniform(dim, c);
}

DiscreteMeasure uniform_grid(std::size_t n) {
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = static_cast<double>(j + 1) / static_cast<double>(n);
  return DiscreteMeasure::uniform(1, c);
}

}  // namespace

TEST_CASE("I_d and the drift kernel") {
  CHECK(kernel_Id(std::vector<double>{0.0}) == 1.0);
  CHECK(kernel_Id(std::vector<double>{2.0, 0.5}) == 0.5);
  CHECK(kernel_Id(std::vector<double>{10.0, 10.0}) == doctest::Approx(0.01));
  CHECK(kernel_Ifd(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.1) == 1.0);
  CHECK(kernel_Ifd(std::vector<double>{0.0}, std::vector<double>{2.0}, 1.0) == 0.5);
  CHECK(kernel_Ifd(std::vector<double>{0.0}, std::vector<double>{2.0}, 2.0) >=
        kernel_Ifd(std::vector<double>{0.0}, std::vector<double>{2.0}, 1.0));
}

TEST_CASE("F_beta") {
  const std::vector<double> x{0.0};
  CHECK(kernel_F_beta(DiscreteMeasure::dirac({0.0}), 0.7, x, 1e-9) == 1.0);
  const DiscreteMeasure two(1, {0.0, 1.0}, {0.5, 0.5});
  CHECK(kernel_F_beta(two, 1.0, x, 0.25) == doctest::Approx(0.625));
  CHECK(kernel_F_beta(two, 1.0, x, 2.0) == 1.0);
  const std::vector<double> radii{0.5, 0.25};
  const auto many = kernel_F_beta(two, 1.0, x, radii);
  CHECK(many[1] == kernel_F_beta(two, 1.0, x, 0.25));
}

TEST_CASE("G_d") {
  const DiscreteMeasure mu(2, {0.0, 0.0, 2.0, 0.0}, {0.5, 0.5});
  CHECK(kernel_G_d(mu, 1, 1, std::vector<double>{0.0, 0.0}, 1.0) == 0.5);
  CHECK(kernel_G_d(DiscreteMeasure::dirac({0.3, 0.1}), 1, 1, std::vector<double>{0.3, 0.1}, 0.01) == 1.0);
  CHECK_CODE(kernel_G_d(mu, 1, 2, std::vector<double>{0.0, 0.0}, 1.0), ErrorCode::invalid_argument);

  RandomStream rs = RandomStream::replica(Seed{4}, 0);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_measure(rs, 2, 12);
    const std::vector<double> x{6.0 * rs.uniform(), rs.uniform()};
    const double r = 0.5 * rs.uniform();
    double brute = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::vector<double> z{(m.atom(i)[0] - x[0]) / r, (m.atom(i)[1] - x[1]) / r};
      brute += m.weight(i) * kernel_Id(z);
    }
    CHECK(kernel_G_d(m, 0, 2, x, r) == doctest::Approx(brute).epsilon(1e-13));
  }
}

TEST_CASE("kernel chain: ball mass <= F_d <= G_d with n = 0") {
  RandomStream rs = RandomStream::replica(Seed{8}, 0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + t % 3;
    const auto m = random_measure(rs, d, 1 + rs.next_u64() % 20);
    std::vector<double> x(d);
    for (auto& v : x) v = 4.0 * rs.uniform();
    const double r = rs.uniform();
    const double b = ball_mass(m, x, r, Norm::euclidean);
    const double f = kernel_F_beta(m, static_cast<double>(d), x, r);
    const double g = kernel_G_d(m, 0, d, x, r);
    CHECK(b <= f + 1e-12);
    CHECK(f <= g + 1e-12);
  }
}

TEST_CASE("H_fX") {
  const FieldSpec s1{0.5, 1, 1}, s2{0.5, 1, 2};
  const auto mu = DiscreteMeasure::dirac({0.0});
  const KernelContext c1(s1, {}, mu, FieldMode::image), c2(s2, {}, mu, FieldMode::image);
  const std::vector<double> t{0.0}, s{1.0}, u{0.7};
  CHECK(H_fX(c1, u, u, 1e-9) == 1.0);
  CHECK(H_fX(c1, t, s, 1.96) == doctest::Approx(0.95000420970355913).epsilon(1e-14));
  CHECK(H_fX(c2, t, s, 1.96) == doctest::Approx(0.90250799845448395).epsilon(1e-14));
}

TEST_CASE("expected ball mass") {
  const FieldSpec spec{0.5, 1, 1};
  const std::vector<double> t{0.5};
  const KernelContext dirac(spec, {}, DiscreteMeasure::dirac({0.5}), FieldMode::image);
  CHECK(expected_ball_mass(dirac, t, 1e-6) == 1.0);

  const auto mu = uniform_grid(64);
  const KernelContext img(spec, {}, mu, FieldMode::image), gr(spec, {}, mu, FieldMode::graph);
  CHECK(expected_ball_mass(img, t, 100.0) == doctest::Approx(1.0));
  CHECK(expected_ball_mass(gr, t, 100.0) == doctest::Approx(1.0));

  RandomStream rs = RandomStream::replica(Seed{2}, 0);
  double prev = 0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> at{mu.atom(rs.next_u64() % mu.size())[0]};
    const double r = rs.uniform();
    CHECK(expected_ball_mass(gr, at, r) <= expected_ball_mass(img, at, r) + 1e-15);
  }
  const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625};
  const auto v = expected_ball_mass(img, t, radii);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    CHECK(v[j] == doctest::Approx(expected_ball_mass(img, t, radii[j])).epsilon(1e-14));
    if (j) CHECK(v[j] <= v[j - 1]);
    prev = v[j];
  }
  CHECK(prev > 0.0);
}

TEST_CASE("constant drift leaves the kernels bitwise unchanged") {
  const FieldSpec spec{0.5, 1, 2};
  const auto mu = uniform_grid(32);
  DriftSpec c;
  c.kind = DriftKind::constant;
  c.value = {3.5, -1.25};
  const KernelContext plain(spec, {}, mu, FieldMode::graph), shifted(spec, c, mu, FieldMode::graph);
  const std::vector<double> t{0.25}, s{0.75};
  CHECK(H_fX(plain, t, s, 0.3) == H_fX(shifted, t, s, 0.3));
  CHECK(expected_ball_mass(plain, t, 0.3) == expected_ball_mass(shifted, t, 0.3));

  DriftSpec lin;
  lin.kind = DriftKind::polynomial;
  lin.terms = {PolynomialTerm{0, 5.0, {1}}};
  const KernelContext moved(spec, lin, mu, FieldMode::image);
  CHECK(H_fX(moved, t, s, 0.3) < H_fX(plain, t, s, 0.3));
}
