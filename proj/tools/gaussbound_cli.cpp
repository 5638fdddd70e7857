#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaussbound/config.hpp"
#include "gaussbound/mc_oracle.hpp"
#include "gaussbound/scalar_bounds.hpp"
#include "gaussbound/svg.hpp"
#include "gaussbound/sweep.hpp"
#include "gaussbound/vector_bounds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void print_diagnostics(const gaussbound::ConfigResult& result) {
  for (const auto& d : result.diagnostics) std::cerr << "error: " << d << "\n";
}

int write_output(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitRuntime;
  }
  out << body;
  return out ? kExitOk : kExitRuntime;
}

int run_sweep_command(gaussbound::ProblemKind kind, const std::string& config_path,
                      const std::vector<std::string>& overrides) {
  const auto result = gaussbound::load_sweep_config(config_path, overrides);
  if (!result.ok()) {
    print_diagnostics(result);
    return kExitConfig;
  }
  if (result.config->kind != kind) {
    std::cerr << "error: kind: config is "
              << (result.config->kind == gaussbound::ProblemKind::Scalar ? "scalar" : "vector")
              << " but the subcommand expects the other kind\n";
    return kExitConfig;
  }
  try {
    const gaussbound::SweepReport report = gaussbound::run_sweep(*result.config);
    const std::string body = result.config->format == gaussbound::ReportFormat::Csv
                                 ? gaussbound::write_csv(report)
                                 : gaussbound::write_json(report);
    return write_output(result.config->output, body);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct CheckPrinter {
  bool all_ok = true;

  void row(const std::string& name, double reference, const gaussbound::McEstimate& est) {
    const double se = est.std_error > 0 ? est.std_error : 1e-300;
    const double zscore = (est.mean - reference) / se;
    const bool ok = std::abs(est.mean - reference) <= 3.0 * est.std_error;
    all_ok = all_ok && ok;
    std::printf("%-28s closed=%.10g mc=%.10g se=%.3g z=%+.2f %s\n", name.c_str(), reference,
                est.mean, est.std_error, zscore, ok ? "ok" : "FAIL");
  }
};

double nats_scaled(double nats, bool bits) { return bits ? nats / std::log(2.0) : nats; }

int run_mc_validate(const std::string& config_path, const std::vector<std::string>& overrides,
                    bool bits) {
  const auto result = gaussbound::load_sweep_config(config_path, overrides);
  if (!result.ok()) {
    print_diagnostics(result);
    return kExitConfig;
  }
  const gaussbound::SweepConfig& cfg = *result.config;
  const std::uint64_t samples = cfg.mc_samples > 0 ? std::max<std::uint64_t>(cfg.mc_samples, 10000)
                                                   : 200000;
  const double value = cfg.sweep_values.front();
  CheckPrinter printer;
  try {
    if (cfg.kind == gaussbound::ProblemKind::Scalar) {
      const auto p = gaussbound::scalar_problem_at(cfg, value);
      printer.row("gen_error", gaussbound::true_gen_error(p),
                  gaussbound::mc_gen_error_scalar(p, samples, cfg.seed));
      const double z = p.mean + std::sqrt(p.variance);
      const double coeff = gaussbound::cgf_conditional(p, 0, z, 1.0);
      const double base = coeff > 0 ? 0.25 / std::sqrt(coeff) : 0.1;
      for (int k = 1; k <= 3; ++k) {
        const double lambda = k * base;
        std::ostringstream name;
        name << "cgf lambda=" << lambda;
        printer.row(name.str(), gaussbound::cgf_conditional(p, 0, z, lambda),
                    gaussbound::mc_cgf(p, 0, z, lambda, samples, cfg.seed + k));
      }
      const double lam_star = gaussbound::lambda_star(p, 0);
      if (std::isfinite(lam_star) && lam_star > 0) {
        const auto rows = gaussbound::mc_dv_check(
            gaussbound::posterior_w_given_zi(p, 0, z), gaussbound::reference_q(p, 0),
            {2.0 * (z - p.mean), p.variance + p.mean * p.mean - z * z},
            std::vector<double>{lam_star}, samples, cfg.seed + 7);
        const auto& row = rows.front();
        const bool tight = std::abs(row.lhs - row.rhs) <= 3.0 * row.std_error;
        printer.all_ok = printer.all_ok && row.holds && tight;
        std::printf("%-28s lhs=%.10g rhs=%.10g se=%.3g %s\n", "dv_equality lambda*", row.lhs,
                    row.rhs, row.std_error, row.holds && tight ? "ok" : "FAIL");
      }
      std::printf("%-28s %.10g %s\n", "mi_per_index(i=0)",
                  nats_scaled(gaussbound::mi_weighted_average_scalar(p, 0), bits),
                  bits ? "bits" : "nats");
      std::printf("%-28s %.10g %s\n", "mi_full_sample",
                  nats_scaled(gaussbound::mi_full_sample_scalar(p), bits),
                  bits ? "bits" : "nats");
    } else {
      const auto p = gaussbound::vector_problem_at(cfg, value);
      printer.row("gen_error", gaussbound::true_gen_error_vec(p),
                  gaussbound::mc_gen_error_vec(p, samples, cfg.seed));
      Eigen::VectorXd z = p.mean;
      for (int k = 0; k < p.d(); ++k) z[k] += std::sqrt(p.covariance(k, k));
      const Eigen::MatrixXd m = gaussbound::reference_covariance(p, 0);
      const Eigen::VectorXd g = 2.0 * (p.loss_metric * (z - p.mean));
      const double coeff = 0.5 * g.dot(m * g);
      const double base = coeff > 0 ? 0.25 / std::sqrt(coeff) : 0.1;
      for (int k = 1; k <= 3; ++k) {
        const double lambda = k * base;
        std::ostringstream name;
        name << "cgf_vec lambda=" << lambda;
        printer.row(name.str(), coeff * lambda * lambda,
                    gaussbound::mc_cgf_vec(p, 0, z, lambda, samples, cfg.seed + k));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  std::printf("%s\n", printer.all_ok ? "all checks ok" : "some checks FAILED");
  return printer.all_ok ? kExitOk : kExitRuntime;
}

int run_render(const std::string& input, const std::string& output) {
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << input << "'\n";
    return kExitConfig;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string svg;
  try {
    svg = gaussbound::render_chart_svg(buf.str());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return write_output(output, svg);
}

int run_validate(const std::string& config_path, const std::vector<std::string>& overrides) {
  const auto result = gaussbound::load_sweep_config(config_path, overrides);
  if (!result.ok()) {
    print_diagnostics(result);
    return kExitConfig;
  }
  const auto& cfg = *result.config;
  std::cout << "ok: kind=" << (cfg.kind == gaussbound::ProblemKind::Scalar ? "scalar" : "vector")
            << " families=" << cfg.families.size() << " sweep=" << cfg.sweep_name
            << " points=" << cfg.sweep_values.size() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalization-error bounds for Gaussian location problems"};
  app.require_subcommand(1);

  std::string config_path, render_in, render_out;
  std::vector<std::string> overrides;
  bool bits = false;

  auto add_config_args = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Path to a key = value config file")->required();
    cmd->add_option("overrides", overrides, "key=value overrides applied after the file");
  };

  CLI::App* scalar = app.add_subcommand("scalar", "Run a scalar-problem bound sweep");
  add_config_args(scalar);
  CLI::App* vector = app.add_subcommand("vector", "Run a vector-problem bound sweep");
  add_config_args(vector);
  CLI::App* mc = app.add_subcommand("mc-validate", "Cross-check closed forms by simulation");
  add_config_args(mc);
  mc->add_flag("--bits", bits, "Report information quantities in bits instead of nats");
  CLI::App* render = app.add_subcommand("render", "Render a report CSV as an SVG chart");
  render->add_option("input", render_in, "Report CSV path")->required();
  render->add_option("output", render_out, "SVG output path (stdout if omitted)");
  CLI::App* validate = app.add_subcommand("validate", "Check a config file and exit");
  add_config_args(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (scalar->parsed()) return run_sweep_command(gaussbound::ProblemKind::Scalar, config_path, overrides);
  if (vector->parsed()) return run_sweep_command(gaussbound::ProblemKind::Vector, config_path, overrides);
  if (mc->parsed()) return run_mc_validate(config_path, overrides, bits);
  if (render->parsed()) return run_render(render_in, render_out);
  if (validate->parsed()) return run_validate(config_path, overrides);
  return kExitConfig;
}
