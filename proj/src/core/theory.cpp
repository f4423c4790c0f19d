#include "packdim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "packdim/error.hpp"

namespace packdim {

void Regime::validate() const {
  require(alpha > 0.0 && alpha < 1.0, "regime: alpha must lie in (0,1)");
  require(d >= 1, "regime: d must be at least 1");
  require(beta >= 0.0 && beta <= 1.0, "regime: beta must lie in [0,1]");
}

namespace {
void need_subcritical(const Regime& g) {
  g.validate();
  if (!g.subcritical())
    fail(ErrorCode::regime, "regime: alpha*d = " + std::to_string(g.alpha * g.d) + " must be below 1");
}
}  // namespace

double predict_image(const Regime& g) {
  g.validate();
  return std::min(static_cast<double>(g.d), g.beta / g.alpha);
}

double predict_graph_upper(const Regime& g) {
  g.validate();
  return std::min(g.beta / g.alpha, g.beta + g.d * (1.0 - g.alpha));
}

double tx_lower(const Regime& g) {
  need_subcritical(g);
  const double ad = g.alpha * g.d;
  if (g.beta == 0.0) return 0.0;
  return g.beta * g.d / (ad + g.beta * (1.0 - ad));
}

double graph_lower(const Regime& g) {
  need_subcritical(g);
  return std::max(tx_lower(g), g.beta * (g.d + 1.0 - g.alpha * g.d));
}

double gh_g(const Regime& g, double x) { return g.beta / (g.alpha * (1.0 - g.beta) * x); }

double gh_h(const Regime& g, double x) {
  if (x <= 1.0 / g.alpha) return (1.0 - 1.0 / x) * g.d;
  return (1.0 - g.alpha) * g.d + 1.0 - 1.0 / (g.alpha * x);
}

GhSolution gh_solver(const Regime& g) {
  need_subcritical(g);
  require(g.beta > 0.0 && g.beta < 1.0, "gh_solver: beta must lie in (0,1)");
  const double a = g.alpha, b = g.beta, d = g.d;
  const double knee = 1.0 / a;
  const double tol = 1e-12 * knee;
  GhSolution s{};
  const double x1 = 1.0 + b / (a * (1.0 - b) * d);
  const double x2 = 1.0 / (a * (1.0 - b) * ((1.0 - a) * d + 1.0));
  if (x1 >= 1.0 && x1 <= knee + tol) {
    s = {x1, gh_g(g, x1), 1};
  } else if (x2 > knee - tol) {
    s = {x2, gh_g(g, x2), 2};
  } else {
    fail(ErrorCode::degenerate_regime, "gh_solver: no consistent crossing branch");
  }
  if (!std::isfinite(s.value))
    fail(ErrorCode::degenerate_regime, "gh_solver: crossing value is not finite");
  const double expected = graph_lower(g);
  if (std::fabs(s.value - expected) > 1e-9 * std::max(1.0, expected))
    fail(ErrorCode::internal, "gh_solver: crossing value disagrees with the closed-form lower bound");
  return s;
}

double predict_image_profile(double alpha, unsigned d, double profile_value, unsigned n) {
  require(alpha > 0.0 && alpha < 1.0 && d >= 1, "predict_image_profile: bad regime");
  const double cap = std::min(alpha * d, static_cast<double>(n));
  require(profile_value >= 0.0 && profile_value <= cap + 1e-12,
          "predict_image_profile: profile value must lie in [0, min{alpha d, n}]");
  return profile_value / alpha;
}

KahaneDims kahane_dims(double alpha, unsigned d, double hausdorff_beta) {
  Regime g{alpha, d, hausdorff_beta};
  g.validate();
  return {std::min(hausdorff_beta / alpha, static_cast<double>(d)),
          std::min(hausdorff_beta / alpha, hausdorff_beta + d * (1.0 - alpha))};
}

nlohmann::json predict_all(const Regime& g) {
  g.validate();
  nlohmann::json j;
  j["regime"] = {{"alpha", g.alpha}, {"d", g.d}, {"beta", g.beta}};
  j["image"] = predict_image(g);
  j["graph_upper"] = predict_graph_upper(g);
  const KahaneDims k = kahane_dims(g.alpha, g.d, g.beta);
  j["hausdorff"] = {{"image", k.image}, {"graph", k.graph}};
  if (g.subcritical()) {
    j["image_lower"] = tx_lower(g);
    j["graph_lower"] = graph_lower(g);
    if (g.beta > 0.0 && g.beta < 1.0) {
      const GhSolution s = gh_solver(g);
      j["gh"] = {{"x_star", s.x_star}, {"value", s.value}, {"branch", s.branch}};
    }
    if (g.beta <= g.alpha * g.d)
      j["image_from_profile"] = predict_image_profile(g.alpha, g.d, g.beta);
  }
  return j;
}

}  // namespace packdim
