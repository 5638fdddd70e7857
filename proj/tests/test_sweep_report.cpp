#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "gaussbound/config.hpp"
#include "gaussbound/svg.hpp"
#include "gaussbound/sweep.hpp"

using namespace gaussbound;

namespace {

SweepConfig parse_or_die(const std::string& text) {
  const ConfigResult r = parse_sweep_config(text);
  REQUIRE_MESSAGE(r.ok(), "config must parse");
  return *r.config;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

const std::string kScalarSweep =
    "kind = scalar\n"
    "families = [theorem1, cor1_second, cor3_first]\n"
    "sweep = n\n"
    "values = [2, 4, 8]\n"
    "seed = 21\n";

}  // namespace

TEST_SUITE_BEGIN("sweep_report");

TEST_CASE("scalar sweep produces one row per point and family, in order") {
  const SweepReport report = run_sweep(parse_or_die(kScalarSweep));
  REQUIRE(report.rows.size() == 9);
  CHECK(report.param_name == "n");
  int idx = 0;
  for (double n : {2.0, 4.0, 8.0}) {
    for (BoundFamily f : {BoundFamily::Theorem1, BoundFamily::Cor1Second, BoundFamily::Cor3First}) {
      CHECK(report.rows[idx].param == n);
      CHECK(report.rows[idx].family == f);
      CHECK(report.rows[idx].true_gen == doctest::Approx(2.0 / n).epsilon(1e-12));
      ++idx;
    }
  }
  // Exactly tight families have ratio 1.
  CHECK(report.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.rows[1].ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.rows[2].ratio < 1.0);
  CHECK(!report.rows[0].mc.has_value());
}

TEST_CASE("report bodies are byte-identical across reruns") {
  const SweepConfig cfg = parse_or_die(kScalarSweep + "mc_samples = 2000\n");
  const std::string csv1 = write_csv(run_sweep(cfg));
  const std::string csv2 = write_csv(run_sweep(cfg));
  CHECK(csv1 == csv2);
  const std::string json1 = write_json(run_sweep(cfg));
  CHECK(json1 == write_json(run_sweep(cfg)));
}

TEST_CASE("csv layout and float round-trip") {
  const SweepConfig cfg = parse_or_die(kScalarSweep + "mc_samples = 1000\n");
  const SweepReport report = run_sweep(cfg);
  const auto lines = split_lines(write_csv(report));
  REQUIRE(lines.size() == 1 + report.rows.size());
  CHECK(lines[0] == "n,family,value,true_gen,ratio,mc_mean,mc_se");
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto cells = split_csv(lines[i + 1]);
    REQUIRE(cells.size() == 7);
    const ReportRow& row = report.rows[i];
    CHECK(std::strtod(cells[0].c_str(), nullptr) == row.param);
    CHECK(cells[1] == to_string(row.family));
    CHECK(std::strtod(cells[2].c_str(), nullptr) == row.value);
    CHECK(std::strtod(cells[3].c_str(), nullptr) == row.true_gen);
    CHECK(std::strtod(cells[4].c_str(), nullptr) == row.ratio);
    REQUIRE(row.mc.has_value());
    CHECK(std::strtod(cells[5].c_str(), nullptr) == row.mc->mean);
    CHECK(std::strtod(cells[6].c_str(), nullptr) == row.mc->std_error);
  }
}

TEST_CASE("closed-form-only mode leaves the mc columns empty") {
  const auto lines = split_lines(write_csv(run_sweep(parse_or_die(kScalarSweep))));
  const auto cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 7);
  CHECK(cells[5].empty());
  CHECK(cells[6].empty());
}

TEST_CASE("json layout mirrors the csv") {
  const SweepConfig cfg = parse_or_die(kScalarSweep + "format = json\n");
  const SweepReport report = run_sweep(cfg);
  const nlohmann::json doc = nlohmann::json::parse(write_json(report));
  CHECK(doc["param"] == "n");
  REQUIRE(doc["rows"].size() == report.rows.size());
  const auto& first = doc["rows"][0];
  CHECK(first["family"] == "theorem1");
  CHECK(first["param"].get<double>() == 2.0);
  CHECK(first["value"].get<double>() == report.rows[0].value);
  CHECK(first["mc_mean"].is_null());
}

TEST_CASE("infinite bounds render as the string inf") {
  const SweepConfig cfg = parse_or_die(
      "kind = scalar\nfamilies = [xu_raginsky]\nsweep = n\nvalues = [3]\nproxy = 1\n");
  // noise_variance defaults to 0: the full-sample information is infinite.
  const SweepReport report = run_sweep(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(std::isinf(report.rows[0].value));
  const auto lines = split_lines(write_csv(report));
  CHECK(split_csv(lines[1])[2] == "inf");
  const nlohmann::json doc = nlohmann::json::parse(write_json(report));
  CHECK(doc["rows"][0]["value"] == "inf");
}

TEST_CASE("timestamp header is opt-in") {
  const SweepReport plain = run_sweep(parse_or_die(kScalarSweep));
  CHECK(write_csv(plain).rfind("n,family", 0) == 0);
  const SweepReport stamped = run_sweep(parse_or_die(kScalarSweep + "timestamp = true\n"));
  CHECK(write_csv(stamped).rfind("# generated ", 0) == 0);
}

TEST_CASE("vector sweep over a covariance diagonal entry") {
  const SweepConfig cfg = parse_or_die(
      "kind = vector\n"
      "families = [decomposed, direct]\n"
      "sweep = s\n"
      "values = [1, 2, 4, 8]\n"
      "n = 10\n"
      "sigma_diag = [1, s]\n");
  const SweepReport report = run_sweep(cfg);
  REQUIRE(report.rows.size() == 8);
  for (std::size_t i = 0; i < 8; i += 2) {
    const double s = report.rows[i].param;
    const double truth = 2.0 * (1.0 + s) / 10.0;
    CHECK(report.rows[i].family == BoundFamily::DecomposedVec);
    CHECK(report.rows[i].value == doctest::Approx(truth).epsilon(1e-9));
    CHECK(report.rows[i + 1].family == BoundFamily::DirectVec);
    if (s == 1.0) {
      CHECK(report.rows[i + 1].value == doctest::Approx(truth).epsilon(1e-9));
    } else {
      CHECK(report.rows[i + 1].value > truth * 1.001);
    }
  }
}

TEST_CASE("per-point problems materialize correctly") {
  const SweepConfig cfg = parse_or_die(
      "kind = vector\nfamilies = [direct]\nsweep = s\nvalues = [4]\nn = 3\n"
      "sigma_diag = [1, s]\nmetric = inv_sigma\n");
  const VectorLocationProblem p = vector_problem_at(cfg, 4.0);
  CHECK(p.covariance(1, 1) == 4.0);
  CHECK((p.loss_metric * p.covariance - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        1e-12);

  const SweepConfig sc = parse_or_die(
      "kind = scalar\nfamilies = [theorem1]\nsweep = variance\nvalues = [2.5]\nn = 4\n");
  const ScalarLocationProblem sp = scalar_problem_at(sc, 2.5);
  CHECK(sp.variance == 2.5);
  CHECK(sp.weights.size() == 4);
}

TEST_CASE("svg rendering of a report") {
  const std::string csv = write_csv(run_sweep(parse_or_die(kScalarSweep)));
  const std::string svg = render_chart_svg(csv);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("theorem1") != std::string::npos);
  CHECK(svg.find("true_gen") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(render_chart_svg("not,a,report"), std::invalid_argument);
}

TEST_CASE("infinite values interrupt a series without breaking the chart") {
  const SweepConfig cfg = parse_or_die(
      "kind = scalar\nfamilies = [xu_raginsky, theorem1]\nsweep = noise_variance\n"
      "values = [0, 0.5, 1.0]\nn = 4\nproxy = 1\n");
  const std::string svg = render_chart_svg(write_csv(run_sweep(cfg)));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("xu_raginsky") != std::string::npos);
}

TEST_SUITE_END();
