#include <cstdlib>
#include <string>

#include <doctest.h>

#include "gaussbound/config.hpp"

using namespace gaussbound;

namespace {

bool mentions(const ConfigResult& r, const std::string& needle) {
  for (const auto& d : r.diagnostics)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

const std::string kMinimalScalar =
    "kind = scalar\n"
    "families = [theorem1]\n"
    "sweep = n\n"
    "values = [2, 10]\n";

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal scalar config parses with defaults") {
  const ConfigResult r = parse_sweep_config(kMinimalScalar);
  REQUIRE(r.ok());
  CHECK(r.config->kind == ProblemKind::Scalar);
  CHECK(r.config->families == std::vector<BoundFamily>{BoundFamily::Theorem1});
  CHECK(r.config->sweep_name == "n");
  CHECK(r.config->sweep_values == std::vector<double>{2.0, 10.0});
  CHECK(r.config->variance == 1.0);
  CHECK(r.config->seed == 1);
  CHECK(r.config->format == ReportFormat::Csv);
  CHECK(r.config->mc_samples == 0);
  CHECK(!r.config->timestamp);
}

TEST_CASE("comments, blank lines, and repeated keys") {
  const ConfigResult r = parse_sweep_config(
      "# a comment\n"
      "kind = scalar\n"
      "\n"
      "families = [theorem1, cor1_second]\n"
      "sweep = variance\n"
      "values = [0.5, 1.0]\n"
      "n = 4\n"
      "seed = 3\n"
      "seed = 9\n");
  REQUIRE(r.ok());
  CHECK(r.config->seed == 9);  // last assignment wins
  CHECK(r.config->families.size() == 2);
}

TEST_CASE("overrides apply after the file, last one winning") {
  const std::vector<std::string> overrides{"seed=5", "format=json", "seed=6"};
  const ConfigResult r = parse_sweep_config(kMinimalScalar, overrides);
  REQUIRE(r.ok());
  CHECK(r.config->seed == 6);
  CHECK(r.config->format == ReportFormat::Json);
  const ConfigResult bad =
      parse_sweep_config(kMinimalScalar, std::vector<std::string>{"no_such=1"});
  CHECK(!bad.ok());
  CHECK(mentions(bad, "no_such"));
}

TEST_CASE("diagnostics accumulate instead of stopping at the first error") {
  const ConfigResult r =
      parse_sweep_config("kind = scalar\nfamilies = [what]\nseed = -2\n");
  CHECK(!r.ok());
  CHECK(r.diagnostics.size() >= 3);
  CHECK(mentions(r, "families"));
  CHECK(mentions(r, "sweep"));
  CHECK(mentions(r, "seed"));
  CHECK(!r.config.has_value());

  const ConfigResult bad_kind = parse_sweep_config("kind = banana\n");
  CHECK(!bad_kind.ok());
  CHECK(mentions(bad_kind, "kind"));
}

TEST_CASE("weights: renormalization window and rejection") {
  const std::string base =
      "kind = scalar\nfamilies = [theorem1]\nsweep = variance\nvalues = [1]\nn = 2\n";
  const ConfigResult near = parse_sweep_config(base + "weights = [0.5000000001, 0.5]\n");
  REQUIRE(near.ok());
  CHECK(near.config->weights == WeightScheme::Explicit);
  const double total = near.config->explicit_weights[0] + near.config->explicit_weights[1];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  const ConfigResult off = parse_sweep_config(base + "weights = [0.499, 0.5]\n");
  CHECK(!off.ok());
  CHECK(mentions(off, "simplex"));
  CHECK(mentions(off, "0.999"));

  const ConfigResult neg = parse_sweep_config(base + "weights = [1.5, -0.5]\n");
  CHECK(!neg.ok());
  CHECK(mentions(neg, "non-negative"));
}

TEST_CASE("uniform-only families reject explicit weights") {
  const ConfigResult r = parse_sweep_config(
      "kind = scalar\nfamilies = [cor3_first]\nsweep = variance\nvalues = [1]\nn = 2\n"
      "weights = [0.7, 0.3]\n");
  CHECK(!r.ok());
  CHECK(mentions(r, "requires uniform weights"));
}

TEST_CASE("log-exact family needs the noise pinned to zero") {
  const ConfigResult swept = parse_sweep_config(
      "kind = scalar\nfamilies = [cor3_second]\nsweep = noise_variance\nvalues = [0, 0.1]\n"
      "n = 4\n");
  CHECK(!swept.ok());
  CHECK(mentions(swept, "not swept"));
  const ConfigResult nonzero = parse_sweep_config(
      "kind = scalar\nfamilies = [eq_mib_second]\nsweep = variance\nvalues = [1]\nn = 4\n"
      "noise_variance = 0.5\n");
  CHECK(!nonzero.ok());
  const ConfigResult ok = parse_sweep_config(
      "kind = scalar\nfamilies = [cor3_second]\nsweep = variance\nvalues = [1]\nn = 4\n");
  CHECK(ok.ok());
}

TEST_CASE("proxy is demanded exactly where it is used") {
  const ConfigResult missing = parse_sweep_config(
      "kind = scalar\nfamilies = [xu_raginsky]\nsweep = n\nvalues = [2]\n"
      "noise_variance = 0.5\n");
  CHECK(!missing.ok());
  CHECK(mentions(missing, "proxy"));
  const ConfigResult given = parse_sweep_config(
      "kind = scalar\nfamilies = [bu]\nsweep = n\nvalues = [2]\nproxy = 1.5\n");
  REQUIRE(given.ok());
  CHECK(given.config->proxy == 1.5);
}

TEST_CASE("swept n excludes a fixed n and non-integer values") {
  CHECK(!parse_sweep_config(kMinimalScalar + "n = 4\n").ok());
  const ConfigResult frac = parse_sweep_config(
      "kind = scalar\nfamilies = [theorem1]\nsweep = n\nvalues = [2.5]\n");
  CHECK(!frac.ok());
  CHECK(mentions(frac, "integers"));
}

TEST_CASE("mc_samples floor") {
  CHECK(!parse_sweep_config(kMinimalScalar + "mc_samples = 50\n").ok());
  CHECK(parse_sweep_config(kMinimalScalar + "mc_samples = 100\n").ok());
  CHECK(parse_sweep_config(kMinimalScalar + "mc_samples = 0\n").ok());
}

TEST_CASE("environment seed is a fallback only") {
  setenv(kSeedEnvVar, "77", 1);
  const ConfigResult env = parse_sweep_config(kMinimalScalar);
  REQUIRE(env.ok());
  CHECK(env.config->seed == 77);
  const ConfigResult explicit_seed = parse_sweep_config(kMinimalScalar + "seed = 4\n");
  REQUIRE(explicit_seed.ok());
  CHECK(explicit_seed.config->seed == 4);
  setenv(kSeedEnvVar, "not-a-number", 1);
  const ConfigResult bad = parse_sweep_config(kMinimalScalar);
  CHECK(!bad.ok());
  CHECK(mentions(bad, kSeedEnvVar));
  unsetenv(kSeedEnvVar);
}

TEST_CASE("vector config with a swept diagonal entry") {
  const ConfigResult r = parse_sweep_config(
      "kind = vector\n"
      "families = [decomposed, direct, true_gen]\n"
      "sweep = s\n"
      "values = [1, 2, 4, 8]\n"
      "n = 10\n"
      "sigma_diag = [1, s]\n");
  REQUIRE(r.ok());
  CHECK(r.config->dim == 2);
  CHECK(r.config->sigma_diag == std::vector<std::string>{"1", "s"});
  CHECK(r.config->metric == MetricKind::Identity);
}

TEST_CASE("vector families are fenced off from scalar configs and vice versa") {
  CHECK(!parse_sweep_config(
             "kind = scalar\nfamilies = [direct]\nsweep = n\nvalues = [2]\n")
             .ok());
  CHECK(!parse_sweep_config(
             "kind = vector\nfamilies = [theorem1]\nsweep = s\nvalues = [1]\n"
             "n = 2\nsigma_diag = [s]\n")
             .ok());
}

TEST_CASE("full covariance input is validated") {
  const std::string base =
      "kind = vector\nfamilies = [direct]\nsweep = noise_variance\nvalues = [0.1]\nn = 3\n";
  const ConfigResult asym =
      parse_sweep_config(base + "sigma_rows = [1, 0.5; 0.4, 1]\n");
  CHECK(!asym.ok());
  CHECK(mentions(asym, "symmetric"));
  const ConfigResult indef =
      parse_sweep_config(base + "sigma_rows = [1, 2; 2, 1]\n");
  CHECK(!indef.ok());
  CHECK(mentions(indef, "positive definite"));
  const ConfigResult both =
      parse_sweep_config(base + "sigma_rows = [1, 0; 0, 1]\nsigma_diag = [1, 1]\n");
  CHECK(!both.ok());
  CHECK(mentions(both, "mutually exclusive"));
  const ConfigResult good = parse_sweep_config(base + "sigma_rows = [2, 0.3; 0.3, 1]\n");
  REQUIRE(good.ok());
  CHECK(good.config->sigma_rows.size() == 2);
}

TEST_CASE("metric options") {
  const std::string base =
      "kind = vector\nfamilies = [direct]\nsweep = noise_variance\nvalues = [0.1]\nn = 3\n"
      "sigma_diag = [1, 2]\n";
  CHECK(parse_sweep_config(base + "metric = inv_sigma\n").ok());
  const ConfigResult diag = parse_sweep_config(base + "metric = diag\nmetric_diag = [1, 3]\n");
  REQUIRE(diag.ok());
  CHECK(diag.config->metric == MetricKind::Diagonal);
  CHECK(!parse_sweep_config(base + "metric = diag\n").ok());
  CHECK(!parse_sweep_config(base + "metric = diag\nmetric_diag = [1]\n").ok());
  CHECK(!parse_sweep_config(base + "metric = shiny\n").ok());
}

TEST_CASE("the sweep token must appear somewhere") {
  const ConfigResult r = parse_sweep_config(
      "kind = vector\nfamilies = [direct]\nsweep = s\nvalues = [1]\nn = 3\n"
      "sigma_diag = [1, 2]\n");
  CHECK(!r.ok());
  CHECK(mentions(r, "not referenced"));
}

TEST_CASE("unreadable files become diagnostics, not exceptions") {
  const ConfigResult r = load_sweep_config("/no/such/path.cfg");
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
}

TEST_SUITE_END();
