#pragma once

#include "json.hpp"

namespace packdim {

struct Regime {
  double alpha = 0.5;
  unsigned d = 1;
  double beta = 1.0;  // packing dimension of the parameter set

  void validate() const;
  bool subcritical() const { return alpha * d < 1.0; }
};

// min{d, beta/alpha}
double predict_image(const Regime& g);
// min{beta/alpha, beta + d(1 - alpha)}
double predict_graph_upper(const Regime& g);
// beta d / (alpha d + beta (1 - alpha d)); needs alpha d < 1
double tx_lower(const Regime& g);
// max{tx_lower, beta (d + 1 - alpha d)}; needs alpha d < 1
double graph_lower(const Regime& g);

struct GhSolution {
  double x_star;
  double value;
  int branch;  // 1: x* <= 1/alpha, 2: x* > 1/alpha
};

double gh_g(const Regime& g, double x);
double gh_h(const Regime& g, double x);
// Crossing of the decreasing g and increasing h on [1, inf).
GhSolution gh_solver(const Regime& g);

double predict_image_profile(double alpha, unsigned d, double profile_value, unsigned n = 1);

struct KahaneDims {
  double image;
  double graph;
};
KahaneDims kahane_dims(double alpha, unsigned d, double hausdorff_beta);

// Every prediction that applies to the regime.
nlohmann::json predict_all(const Regime& g);

}  // namespace packdim
