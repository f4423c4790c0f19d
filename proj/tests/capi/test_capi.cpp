#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "packdim/packdim.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { pd_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(pd_version()).find("packdim") == 0);
  CHECK(std::string(pd_status_name(PD_OK)) == "ok");
  CHECK(std::string(pd_status_name(PD_REGIME)) == "regime");
  CHECK(std::string(pd_status_name(static_cast<pd_status>(99))) == "unknown");
}

TEST_CASE("scalar functions and error reporting") {
  double v = 0;
  CHECK(pd_gaussian_cdf(1.96, &v) == PD_OK);
  CHECK(v == doctest::Approx(0.97500210485177956).epsilon(1e-15));
  CHECK(pd_gaussian_interval_prob(-1.0, 0.0, 1.0, &v) == PD_INVALID_ARGUMENT);
  CHECK(std::strlen(pd_last_error()) > 0);
  CHECK(pd_gaussian_cdf(0.0, nullptr) == PD_INVALID_ARGUMENT);
}

TEST_CASE("measure handles") {
  const double coords[] = {0.0, 3.0};
  const double weights[] = {0.5, 0.5};
  pd_measure* mu = nullptr;
  REQUIRE(pd_measure_create(1, 2, coords, weights, &mu) == PD_OK);
  CHECK(pd_measure_dim(mu) == 1);
  CHECK(pd_measure_size(mu) == 2);
  const double x[] = {0.0};
  double m = 0;
  CHECK(pd_measure_ball_mass(mu, x, 1.0, PD_NORM_EUCLIDEAN, &m) == PD_OK);
  CHECK(m == 0.5);

  const std::string path = "capi_measure.csv";
  CHECK(pd_measure_write_csv(mu, path.c_str()) == PD_OK);
  pd_measure* back = nullptr;
  CHECK(pd_measure_read_csv(path.c_str(), &back) == PD_OK);
  CHECK(pd_measure_size(back) == 2);
  pd_measure_free(back);
  pd_measure_free(mu);
  std::remove(path.c_str());

  const double bad_w[] = {0.5, 0.6};
  pd_measure* none = nullptr;
  CHECK(pd_measure_create(1, 2, coords, bad_w, &none) == PD_INVALID_ARGUMENT);
  CHECK(none == nullptr);
  CHECK(pd_measure_cantor(3, 0.5, 2, &none) == PD_GEOMETRY_INFEASIBLE);
  CHECK(pd_measure_read_csv("/nonexistent/file.csv", &none) == PD_IO);
  pd_measure_free(nullptr);
}

TEST_CASE("estimate through the C interface") {
  pd_measure* mu = nullptr;
  REQUIRE(pd_measure_uniform_grid(1024, &mu) == PD_OK);
  Owned rep, table;
  const char* req = R"({"estimator":"ballmass","grid":{"j_min":2,"j_max":7}})";
  REQUIRE(pd_estimate_json(mu, req, &rep.p, &table.p) == PD_OK);
  CHECK(rep.str().find("\"estimate\"") != std::string::npos);
  CHECK(table.str().rfind("atom,scale,V,ratio\n", 0) == 0);
  Owned bad;
  CHECK(pd_estimate_json(mu, R"({"estimator":"nope","grid":{"j_min":2,"j_max":7}})", &bad.p, nullptr) ==
        PD_INVALID_ARGUMENT);
  CHECK(pd_estimate_json(mu, "{not json", &bad.p, nullptr) == PD_CONFIG);
  pd_measure_free(mu);
}

TEST_CASE("simulate, txset, predict, verify") {
  Owned csv, side;
  REQUIRE(pd_simulate_json(R"({"regime":{"alpha":0.5,"n":1,"d":2},"points":{"grid":16},"seed":3})", &csv.p,
                           &side.p) == PD_OK);
  CHECK(csv.str().rfind("t1,x1,x2\n", 0) == 0);
  CHECK(side.str().find("\"seed\": 3") != std::string::npos);

  Owned tx;
  REQUIRE(pd_txset_csv(0.5, 0.25, 6, &tx.p) == PD_OK);
  CHECK(tx.str().rfind("k,log_inv_delta,log_inv_eta,log_m,ratio_at_eta,ratio_at_delta\n", 0) == 0);

  Owned pr;
  REQUIRE(pd_predict_json(0.5, 1, 0.5, &pr.p) == PD_OK);
  CHECK(pr.str().find("\"graph_lower\": 0.75") != std::string::npos);
  Owned none;
  CHECK(pd_predict_json(0.5, 1, 2.0, &none.p) == PD_INVALID_ARGUMENT);

  Owned ver;
  int passed = 0;
  REQUIRE(pd_verify_json("doubling", R"({"trials":50})", &ver.p, &passed) == PD_OK);
  CHECK(passed == 1);
  CHECK(pd_verify_json("bogus", nullptr, &none.p, &passed) == PD_INVALID_ARGUMENT);
}
