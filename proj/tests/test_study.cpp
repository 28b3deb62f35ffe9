#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "maxfem/study.hpp"

using namespace maxfem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: keys, lists, complex k, inner box") {
  StudyConfig cfg = parse_config_text(
      "# comment\n"
      "problem = exp1_interface\n"
      "family = nedelec2\n"
      "k = 10, 5+2i\n"
      "p = 1, 2\n"
      "initial_n = 2\n"
      "levels = 3\n"
      "p_ref = 4\n"
      "inner_box = 0, 0, 0, 0.5, 0.5, 0.5\n"
      "timing_mode = none\n");
  CHECK(cfg.problem == "exp1_interface");
  CHECK(cfg.ks.size() == 2);
  CHECK(cfg.ks[1] == Complex(5, 2));
  CHECK(cfg.ps == std::vector<int>{1, 2});
  CHECK(cfg.levels == 3);
  REQUIRE(cfg.inner_box.has_value());
  CHECK(cfg.inner_box->hi[2] == 0.5);
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("config validation names the offending field") {
  StudyConfig cfg = parse_config_text("k = 10\np = 1,2\np_ref = 2\n");
  try {
    validate_config(cfg);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("p_ref") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("k = 10\nbogus_key = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(validate_config(parse_config_text("k = 0.5\np = 1\n")),
                  std::invalid_argument);
}

TEST_CASE("k filename tokens") {
  CHECK(k_token(Complex(10, 0)) == "10");
  CHECK(k_token(Complex(5, 2)) == "5+2i");
  CHECK(k_token(Complex(2.5, 0)) == "2.5");
}

TEST_CASE("single-case study produces one record with sane fields") {
  StudyConfig cfg = parse_config_text(
      "problem = exp2_smooth\nk = 2\np = 1\ninitial_n = 1\nlevels = 1\np_ref = 3\n");
  std::vector<RunRecord> recs = run_study(cfg);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].p == 1);
  CHECK(recs[0].dofs > 0);
  CHECK(recs[0].n_k == doctest::Approx(std::cbrt(double(recs[0].dofs)) / 2.0));
  CHECK(recs[0].rel_error >= 0.0);
  CHECK(recs[0].t_assemble == 0.0);  // timing_mode = none
}

TEST_CASE("N_k arithmetic") {
  // dof = 8000, |k| = 20 -> N_k = 1
  CHECK(std::cbrt(8000.0) / 20.0 == doctest::Approx(1.0));
}

TEST_CASE("csv emission: one file per (p,k), sorted rows, header, determinism") {
  StudyConfig cfg = parse_config_text(
      "problem = exp2_smooth\nk = 2\np = 1\ninitial_n = 1\nlevels = 2\np_ref = 3\n");
  std::vector<RunRecord> recs = run_study(cfg);
  REQUIRE(recs.size() == 2);

  std::string dir = "csv_test_out";
  auto files = emit_csv(recs, dir);
  REQUIRE(files.size() == 1);
  CHECK(files[0].find("data_p1_k2.csv") != std::string::npos);
  std::string body = slurp(files[0]);
  CHECK(body.rfind("# dof,", 0) == 0);

  // byte-identical on re-emission and on a full re-run
  auto files2 = emit_csv(run_study(cfg), dir);
  CHECK(slurp(files2[0]) == body);

  // error decreases under refinement for this smooth problem
  CHECK(recs[1].rel_error <= recs[0].rel_error);

  CHECK_THROWS_AS(emit_csv({}, dir), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("plot emission: polylines per k plus a dashed guide") {
  std::vector<RunRecord> recs;
  for (int lvl = 0; lvl < 3; ++lvl) {
    RunRecord r;
    r.k = Complex(10, 0);
    r.p = 1;
    r.level = lvl;
    r.h = 1.0 / (1 << lvl);
    r.dofs = 100 << (3 * lvl);
    r.n_k = std::cbrt(double(r.dofs)) / 10.0;
    r.rel_error = 0.5 * std::pow(0.5, lvl);
    recs.push_back(r);
  }
  std::string path = "plot_test.svg";
  emit_plot(recs, 1, path);
  std::string svg = slurp(path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("DOFs per wavelength") != std::string::npos);
  CHECK(svg.find("rel. error") != std::string::npos);
  CHECK(svg.find("O(h^1)") != std::string::npos);
  std::filesystem::remove(path);

  // flat series renders without error
  for (auto& r : recs) r.rel_error = 0.25;
  CHECK_NOTHROW(emit_plot(recs, 1, path));
  std::filesystem::remove(path);

  // single-point series is skipped; with no other series this is an error
  std::vector<RunRecord> one(recs.begin(), recs.begin() + 1);
  CHECK_THROWS_AS(emit_plot(one, 1, path), std::invalid_argument);
}
