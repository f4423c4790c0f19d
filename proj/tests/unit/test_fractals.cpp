#include <cmath>

#include "packdim/fractals.hpp"
#include "support.hpp"

using namespace packdim;

namespace {

// Greedy covering of a sorted point set by closed intervals of length eps.
std::size_t greedy_cover(const std::vector<double>& lefts, double len, double eps) {
  std::size_t n = 0;
  double reach = -INFINITY;
  for (double a : lefts) {
    if (a + len <= reach) continue;
    ++n;
    reach = a + eps;
  }
  return n;
}

}  // namespace

TEST_CASE("uniform Cantor construction") {
  const auto s = build_uniform_cantor(2, 1.0 / 3.0, 3);
  CHECK(s.depth() == 3);
  CHECK(s.count(3) == 8);
  CHECK(s.level(3).length == doctest::Approx(1.0 / 27.0));
  const auto l2 = s.left_endpoints(2);
  REQUIRE(l2.size() == 4);
  CHECK(l2[1] == doctest::Approx(2.0 / 9.0));
  CHECK(l2[3] == doctest::Approx(8.0 / 9.0));
  CHECK(*s.similarity_dimension() == doctest::Approx(0.63092975357145744).epsilon(1e-15));
  CHECK_CODE(build_uniform_cantor(3, 0.5, 2), ErrorCode::geometry_infeasible);
  CHECK_FALSE(s.satisfies_strict_packing());
}

TEST_CASE("explicit systems reject overlapping children") {
  IntervalLevel root{1.0, 1, {0.0}, 0.0};
  IntervalLevel kids{0.4, 3, {0.0, 0.3, 0.6}, 0.3};
  CHECK_CODE(NestedIntervalSystem(0.0, {root, kids}), ErrorCode::geometry_infeasible);
  IntervalLevel ok{0.2, 3, {0.0, 0.4, 0.8}, 0.2};
  CHECK_NOTHROW(NestedIntervalSystem(0.0, {root, ok}));
}

TEST_CASE("oscillating system recursion") {
  const auto tx = build_tx_system(0.5, 0.25, 4);
  CHECK(tx.log_inv_eta[1].logv == doctest::Approx(std::log(64.0)));
  CHECK(tx.m[1] == 8);
  CHECK(tx.log_inv_delta[1].logv == doctest::Approx(std::log(4096.0)));
  CHECK(tx.log_inv_eta[2].logv == doctest::Approx(26 * std::log(2.0)));
  CHECK(tx.m[2] == 8192);
  CHECK(tx.log_inv_delta[2].logv == doctest::Approx(128 * std::log(2.0)));
  // delta_k <= (m_1...m_k)^{-2^{k+1}} in log form
  for (std::size_t k = 1; k <= 4; ++k) {
    long double sum = 0;
    for (std::size_t j = 1; j <= k; ++j) sum += tx.log_m[j].logv;
    CHECK(tx.log_inv_delta[k].logv >= std::ldexp(sum, static_cast<int>(k + 1)) * (1 - 1e-15L));
    CHECK(tx.log_inv_delta[k].logv > tx.log_inv_eta[k].logv);
  }
  CHECK_NOTHROW(build_tx_system(0.5, 0.25, 60));
  CHECK_CODE(build_tx_system(1.0, 0.25, 3), ErrorCode::invalid_argument);
}

TEST_CASE("realize_explicit") {
  const auto tx = build_tx_system(0.5, 0.25, 5);
  const auto one = realize_explicit(tx, 1);
  CHECK(one.count(1) == 8);
  CHECK(one.level(1).length == doctest::Approx(1.0 / 4096.0));
  const auto l = one.left_endpoints(1);
  CHECK(l.back() + one.level(1).length <= 0.25);
  CHECK(one.satisfies_strict_packing());
  const auto zero = realize_explicit(tx, 0);
  CHECK(zero.depth() == 0);
  CHECK(zero.level(0).length == 0.25);
  CHECK_CODE(realize_explicit(tx, 4), ErrorCode::scale_unrepresentable);
}

TEST_CASE("natural measure") {
  const auto s = build_uniform_cantor(2, 1.0 / 3.0, 4);
  const auto mu = natural_measure(s, 2);
  REQUIRE(mu.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(mu.weight(i) == 0.25);
  CHECK(mu.atom(2)[0] == doctest::Approx(2.0 / 3.0));
  CHECK(natural_measure(s, 0).size() == 1);
}

TEST_CASE("covering_count") {
  const auto s = build_uniform_cantor(2, 1.0 / 3.0, 12);
  const auto L = [](double eps) { return LogValue::from_log(-std::log(static_cast<long double>(eps))); };
  CHECK(covering_count(s, L(std::pow(3.0, -3))).logv == doctest::Approx(std::log(8.0)));
  CHECK(covering_count(s, L(1.0)).logv == doctest::Approx(0.0));
  CHECK_CODE(covering_count(s, L(2.0)), ErrorCode::out_of_range);

  const auto tx = build_tx_system(0.5, 0.25, 8);
  for (std::size_t k = 1; k <= 8; ++k) {
    long double sum = 0;
    for (std::size_t j = 1; j <= k; ++j) sum += tx.log_m[j].logv;
    CHECK(static_cast<double>(covering_count(tx, tx.log_inv_delta[k]).logv) ==
          doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
  }
}

TEST_CASE("covering_count brackets a greedy cover") {
  // The count is an upper bound, exact at eps = delta_k; greedy covering
  // of the finest level gives the lower side up to a factor 2.
  const auto s = build_uniform_cantor(3, 0.2, 7);
  const auto lefts = s.left_endpoints(7);
  const double len = s.level(7).length;
  for (double eps : {0.3, 0.1, 0.05, 0.013, 0.004, 0.0011}) {
    const double n = std::exp(static_cast<double>(
        covering_count(s, LogValue::from_log(-std::log(static_cast<long double>(eps)))).logv));
    const double g = static_cast<double>(greedy_cover(lefts, len, eps));
    CHECK(n >= g * 0.5);
    CHECK(n <= 2.0 * g + 1.0);
  }
}

TEST_CASE("minkowski bounds") {
  const auto mt = symbolic_uniform_cantor(2, 1.0 / 3.0, 22);
  std::vector<LogValue> grid;
  for (int k = 5; k <= 20; ++k) grid.push_back(LogValue::from_log(k * std::log(3.0L)));
  const auto b = minkowski_bounds(mt, grid);
  CHECK(b.limsup == doctest::Approx(0.63092975357145744).epsilon(1e-6));
  CHECK(b.liminf == doctest::Approx(0.63092975357145744).epsilon(1e-6));
  CHECK_CODE(minkowski_bounds(mt, {}), ErrorCode::invalid_argument);

  const auto tx = build_tx_system(0.5, 0.25, 12);
  std::vector<LogValue> eta, delta;
  for (std::size_t k = 9; k <= 12; ++k) {
    eta.push_back(tx.log_inv_eta[k]);
    delta.push_back(tx.log_inv_delta[k]);
  }
  CHECK(std::fabs(minkowski_bounds(tx, eta).limsup - 0.5) <= 0.05);
  CHECK(minkowski_bounds(tx, delta).limsup <= 0.05);
}

TEST_CASE("extract_E_gamma") {
  const auto base = build_uniform_cantor(2, 1.0 / 3.0, 14);
  const auto e = extract_E_gamma(base, 0.3, 2.0 / 3.0);
  std::string why;
  CHECK_MESSAGE(e.conditions_hold(&why), why);
  REQUIRE(e.source_level.size() >= 4);
  CHECK(e.source_level[1] == 1);
  CHECK(e.source_level[2] == 2);
  CHECK(e.source_level[3] == 4);

  const auto loose = extract_E_gamma(base, 0.3, 2.0);
  CHECK(loose.conditions_hold());

  const auto vacuous = extract_E_gamma(base, 0.01, 50.0);
  CHECK(vacuous.conditions_hold());
  CHECK(vacuous.system.depth() == base.depth());

  CHECK_CODE(extract_E_gamma(base, 0.64, 2.0 / 3.0), ErrorCode::invalid_argument);
  CHECK_CODE(extract_E_gamma(build_uniform_cantor(2, 1.0 / 3.0, 0), 0.3, 2.0 / 3.0), ErrorCode::depth_exhausted);
}
