#include "doctest.h"

#include <toalift/toalift.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const double kStations[] = {0, 0, 0.5, -2, 0.5, 1, 0.5, 3};
const double kTruth[] = {1, 0};

toa_scenario* make_canonical() {
  toa_scenario* s = nullptr;
  REQUIRE(toa_scenario_create(kStations, 4, 2, kTruth, &s) == TOA_OK);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / (std::string("toalift_capi_") + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("c api: names, parsing and errors") {
  CHECK(std::string(toa_version()).size() > 0);
  CHECK(std::string(toa_objective_name(TOA_FL1)) == "FL1");
  toa_objective k;
  CHECK(toa_objective_parse("fl2", &k) == TOA_OK);
  CHECK(k == TOA_FL2);
  CHECK(toa_objective_parse("nope", &k) == TOA_ERR_CONFIG);
  CHECK(std::string(toa_last_error()).find("nope") != std::string::npos);
  CHECK(toa_objective_parse(nullptr, &k) == TOA_ERR_INVALID_ARGUMENT);
  CHECK(std::string(toa_status_string(TOA_ERR_IO)).size() > 0);
}

TEST_CASE("c api: scenarios") {
  toa_scenario* s = make_canonical();
  CHECK(toa_scenario_dim(s) == 2);
  CHECK(toa_scenario_size(s) == 4);
  double d[4];
  CHECK(toa_scenario_distances(s, d, 4) == TOA_OK);
  CHECK(d[3] == doctest::Approx(3.041381).epsilon(1e-6));
  CHECK(toa_scenario_distances(s, d, 3) == TOA_ERR_INVALID_ARGUMENT);

  char* json = nullptr;
  REQUIRE(toa_scenario_to_json(s, &json) == TOA_OK);
  toa_scenario* back = nullptr;
  CHECK(toa_scenario_from_json(json, &back) == TOA_OK);
  double g[2];
  CHECK(toa_scenario_ground_truth(back, g, 2) == TOA_OK);
  CHECK(g[0] == 1.0);
  toa_string_free(json);
  toa_scenario_destroy(back);

  const double b[] = {-2, 1, 3};
  toa_scenario* planted = nullptr;
  CHECK(toa_scenario_planted(1.0, 1, 3, b, &planted) == TOA_OK);
  CHECK(toa_scenario_size(planted) == 4);
  toa_scenario_destroy(planted);
  const double flat[] = {0.1, 0.1, 0.1};
  CHECK(toa_scenario_planted(1.0, 1, 3, flat, &planted) == TOA_ERR_INVALID_ARGUMENT);
  CHECK(std::string(toa_last_error()).find("condition 3") != std::string::npos);

  toa_scenario* bad = nullptr;
  CHECK(toa_scenario_create(kStations, 4, 5, kTruth, &bad) == TOA_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(toa_scenario_from_json("{]", &bad) == TOA_ERR_CONFIG);
  CHECK(toa_scenario_load("/nonexistent.json", &bad) == TOA_ERR_CONFIG);

  toa_generator_config cfg;
  toa_generator_config_default(&cfg);
  toa_scenario* r1 = nullptr;
  toa_scenario* r2 = nullptr;
  CHECK(toa_scenario_random(&cfg, &r1) == TOA_OK);
  CHECK(toa_scenario_random(&cfg, &r2) == TOA_OK);
  double d1[4], d2[4];
  toa_scenario_distances(r1, d1, 4);
  toa_scenario_distances(r2, d2, 4);
  CHECK(std::equal(d1, d1 + 4, d2));
  double p[2];
  CHECK(toa_random_position(&cfg, p, 2) == TOA_OK);
  CHECK(p[0] >= 0.0);
  CHECK(p[0] < cfg.cube_side);
  toa_scenario_destroy(r1);
  toa_scenario_destroy(r2);
  toa_scenario_destroy(s);
  toa_scenario_destroy(nullptr);
}

TEST_CASE("c api: objectives") {
  toa_scenario* s = make_canonical();
  const double origin[] = {0, 0, 0};
  double v = 0;
  CHECK(toa_evaluate(s, TOA_F2, origin, 2, &v) == TOA_OK);
  CHECK(v == doctest::Approx(0.25));
  CHECK(toa_evaluate(s, TOA_FL2, origin, 2, &v) == TOA_ERR_INVALID_ARGUMENT);
  double h[9];
  CHECK(toa_hessian(s, TOA_FL2, origin, 3, h) == TOA_OK);
  CHECK(h[8] == doctest::Approx(-1.0));
  CHECK(h[1] == doctest::Approx(2.0));
  double g[2];
  const double station[] = {0.5, 1};
  CHECK(toa_gradient(s, TOA_F1, station, 2, g) == TOA_ERR_NON_DIFFERENTIABLE);
  CHECK(toa_evaluate(nullptr, TOA_F2, origin, 2, &v) == TOA_ERR_INVALID_ARGUMENT);
  toa_scenario_destroy(s);
}

TEST_CASE("c api: solve, trace and classify") {
  toa_scenario* s = make_canonical();
  toa_solver_settings settings;
  toa_solver_settings_default(&settings);
  settings.record_trace = 1;
  const double x0[] = {-1, 2, 1};
  toa_result* r = nullptr;
  REQUIRE(toa_solve(s, TOA_FL2, x0, 3, &settings, &r) == TOA_OK);
  CHECK(toa_result_size(r) == 3);
  CHECK(toa_result_error(r) < 1e-3);
  CHECK(toa_result_trace_length(r) >= 2);
  double first[3];
  CHECK(toa_result_trace_point(r, 0, first, 3) == TOA_OK);
  CHECK(first[0] == -1.0);
  CHECK(toa_result_trace_point(r, 100000, first, 3) == TOA_ERR_INVALID_ARGUMENT);

  const auto dir = scratch_dir("trace");
  CHECK(toa_result_write_trace_csv(r, (dir / "t.csv").c_str()) == TOA_OK);
  CHECK(slurp(dir / "t.csv").rfind("step,x,y,lambda,value\n0,-1,2,1,", 0) == 0);
  CHECK(toa_result_write_trace_csv(r, "/nonexistent/dir/t.csv") == TOA_ERR_IO);
  char* json = nullptr;
  CHECK(toa_result_to_json(r, &json) == TOA_OK);
  CHECK(std::string(json).find("\"termination\"") != std::string::npos);
  toa_string_free(json);
  toa_result_destroy(r);

  toa_result* plain = nullptr;
  REQUIRE(toa_solve(s, TOA_F2, x0, 2, nullptr, &plain) == TOA_OK);
  CHECK(toa_result_error(plain) == doctest::Approx(1.0).epsilon(1e-3));
  toa_result_destroy(plain);

  const double zero_lambda[] = {-1, 2, 0};
  CHECK(toa_solve(s, TOA_FL2, zero_lambda, 3, nullptr, &plain) == TOA_ERR_INVALID_ARGUMENT);

  toa_class cls;
  const double saddle[] = {0, 0, 0};
  CHECK(toa_classify(s, TOA_FL2, saddle, 3, 0.0, -1.0, &cls, nullptr) == TOA_OK);
  CHECK(cls == TOA_CLASS_SADDLE);
  CHECK(toa_classify(s, TOA_F2, saddle, 2, 0.0, -1.0, &cls, nullptr) == TOA_OK);
  CHECK(cls == TOA_CLASS_MINIMUM);
  toa_scenario_destroy(s);
}

TEST_CASE("c api: campaigns are deterministic") {
  toa_campaign_config cfg;
  toa_campaign_config_default(&cfg);
  cfg.trials = 30;
  cfg.kinds_mask = TOA_KIND_F2 | TOA_KIND_FL2;
  toa_campaign* a = nullptr;
  toa_campaign* b = nullptr;
  REQUIRE(toa_campaign_run(&cfg, &a) == TOA_OK);
  REQUIRE(toa_campaign_run(&cfg, &b) == TOA_OK);
  CHECK(toa_campaign_row_count(a) == 2);
  toa_benchmark_row row;
  CHECK(toa_campaign_row(a, 1, &row) == TOA_OK);
  CHECK(row.kind == TOA_FL2);
  CHECK(row.trial_count == 30);
  CHECK(toa_campaign_row(a, 2, &row) == TOA_ERR_INVALID_ARGUMENT);
  toa_saddle_audit audit;
  CHECK(toa_campaign_audit(a, TOA_F2, &audit) == TOA_OK);
  CHECK(toa_campaign_audit(a, TOA_FL2, &audit) == TOA_ERR_INVALID_ARGUMENT);

  const auto dir = scratch_dir("campaign");
  CHECK(toa_campaign_write_csv(a, (dir / "ra.csv").c_str(), (dir / "ta.csv").c_str()) == TOA_OK);
  CHECK(toa_campaign_write_csv(b, (dir / "rb.csv").c_str(), (dir / "tb.csv").c_str()) == TOA_OK);
  CHECK(slurp(dir / "ra.csv") == slurp(dir / "rb.csv"));
  CHECK(slurp(dir / "ta.csv") == slurp(dir / "tb.csv"));
  toa_campaign_destroy(a);
  toa_campaign_destroy(b);

  cfg.trials = 0;
  toa_campaign* bad = nullptr;
  CHECK(toa_campaign_run(&cfg, &bad) == TOA_ERR_INVALID_ARGUMENT);
  CHECK(toa_campaign_config_load("/nonexistent.json", &cfg) == TOA_ERR_CONFIG);
}

TEST_CASE("c api: basin sweep") {
  toa_scenario* s = make_canonical();
  const toa_basin_grid grid{-1, 1, -1, 1, 0.5};
  const double minima[] = {0, 0};
  toa_basin* b = nullptr;
  REQUIRE(toa_basin_sweep(s, TOA_F2, &grid, minima, 1, 1.0, nullptr, &b) == TOA_OK);
  CHECK(toa_basin_nx(b) == 5);
  CHECK(toa_basin_ny(b) == 5);
  CHECK(toa_basin_label_at(b, 0, 0) == TOA_BASIN_LOCAL);
  CHECK(toa_basin_label_at(b, 4, 2) == TOA_BASIN_GLOBAL);
  const auto dir = scratch_dir("basin");
  CHECK(toa_basin_write_csv(b, (dir / "b.csv").c_str()) == TOA_OK);
  CHECK(slurp(dir / "b.csv").rfind("x,y,label,final_x,final_y\n", 0) == 0);
  toa_basin_destroy(b);
  toa_scenario_destroy(s);
}
