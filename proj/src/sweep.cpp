#include "gaussbound/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gaussbound/rng.hpp"
#include "gaussbound/scalar_bounds.hpp"
#include "gaussbound/vector_bounds.hpp"

namespace gaussbound {

namespace {

std::vector<double> make_weights(const SweepConfig& cfg, int n) {
  switch (cfg.weights) {
    case WeightScheme::Uniform:
      return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n);
    case WeightScheme::OneHot: {
      std::vector<double> w(static_cast<std::size_t>(n), 0.0);
      w[0] = 1.0;
      return w;
    }
    case WeightScheme::Explicit:
      return cfg.explicit_weights;
  }
  return {};
}

int n_at(const SweepConfig& cfg, double value) {
  return cfg.sweep_name == "n" ? static_cast<int>(value) : cfg.n;
}

double resolve_entry(const std::string& entry, const std::string& token, double value) {
  if (entry == token) return value;
  return std::strtod(entry.c_str(), nullptr);
}

BoundResult eval_scalar_family(BoundFamily f, const ScalarLocationProblem& p,
                               const SweepConfig& cfg, std::uint64_t point_seed) {
  switch (f) {
    case BoundFamily::Theorem1:
      return bound_theorem1(p);
    case BoundFamily::Cor1First:
      return bound_cor1_first(p);
    case BoundFamily::Cor1Second:
      return bound_cor1_second(p);
    case BoundFamily::Cor2First:
      return bound_cor2_first(p, 200000, rng::mix(point_seed + 2));
    case BoundFamily::Cor3First:
      return bound_cor3_first(p);
    case BoundFamily::Cor3Second:
      return bound_cor3_second(p);
    case BoundFamily::Cor4:
      return bound_cor4(p);
    case BoundFamily::EqMibFirst:
      return bound_eq_mib_first(p);
    case BoundFamily::EqMibSecond:
      return bound_eq_mib_second(p);
    case BoundFamily::XuRaginsky:
      return bound_xu_raginsky(p, cfg.proxy);
    case BoundFamily::BuEtAl:
      return bound_bu(p, cfg.proxy);
    case BoundFamily::TrueGen: {
      BoundResult r;
      r.value = true_gen_error(p);
      r.family = BoundFamily::TrueGen;
      return r;
    }
    default:
      throw std::invalid_argument("family not valid for a scalar sweep");
  }
}

BoundResult eval_vector_family(BoundFamily f, const VectorLocationProblem& p) {
  switch (f) {
    case BoundFamily::DirectVec:
      return bound_direct_vec(p);
    case BoundFamily::DecomposedVec:
      return bound_decomposed_vec(p);
    case BoundFamily::TrueGen: {
      BoundResult r;
      r.value = true_gen_error_vec(p);
      r.family = BoundFamily::TrueGen;
      return r;
    }
    default:
      throw std::invalid_argument("family not valid for a vector sweep");
  }
}

std::string utc_now_rfc3339() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

ScalarLocationProblem scalar_problem_at(const SweepConfig& cfg, double value) {
  ScalarLocationProblem p;
  p.mean = cfg.mean;
  p.variance = cfg.sweep_name == "variance" ? value : cfg.variance;
  p.noise_variance = cfg.sweep_name == "noise_variance" ? value : cfg.noise_variance;
  p.weights = make_weights(cfg, n_at(cfg, value));
  return p;
}

VectorLocationProblem vector_problem_at(const SweepConfig& cfg, double value) {
  VectorLocationProblem p;
  const int d = cfg.dim;
  p.noise_variance = cfg.sweep_name == "noise_variance" ? value : cfg.noise_variance;
  p.weights = make_weights(cfg, n_at(cfg, value));
  p.mean = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < cfg.mean_vec.size(); ++k)
    p.mean[static_cast<int>(k)] = cfg.mean_vec[k];
  if (!cfg.sigma_diag.empty()) {
    p.covariance = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k)
      p.covariance(k, k) =
          resolve_entry(cfg.sigma_diag[static_cast<std::size_t>(k)], cfg.sweep_name, value);
  } else {
    p.covariance.resize(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        p.covariance(r, c) = cfg.sigma_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  switch (cfg.metric) {
    case MetricKind::Identity:
      p.loss_metric = Eigen::MatrixXd::Identity(d, d);
      break;
    case MetricKind::InverseCovariance:
      p.loss_metric = p.covariance.llt().solve(Eigen::MatrixXd::Identity(d, d));
      break;
    case MetricKind::Diagonal:
      p.loss_metric = Eigen::MatrixXd::Zero(d, d);
      for (int k = 0; k < d; ++k)
        p.loss_metric(k, k) =
            resolve_entry(cfg.metric_diag[static_cast<std::size_t>(k)], cfg.sweep_name, value);
      break;
  }
  return p;
}

SweepReport run_sweep(const SweepConfig& cfg) {
  const std::size_t points = cfg.sweep_values.size();
  std::vector<std::vector<ReportRow>> per_point(points);

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  const auto run_point = [&](std::size_t idx) {
    const double value = cfg.sweep_values[idx];
    const std::uint64_t point_seed = rng::derive(cfg.seed, idx);
    std::vector<ReportRow> rows;
    rows.reserve(cfg.families.size());

    double truth = 0.0;
    std::optional<McEstimate> mc;
    if (cfg.kind == ProblemKind::Scalar) {
      const ScalarLocationProblem p = scalar_problem_at(cfg, value);
      truth = true_gen_error(p);
      if (cfg.mc_samples > 0)
        mc = mc_gen_error_scalar(p, cfg.mc_samples, rng::mix(point_seed + 1));
      for (const BoundFamily f : cfg.families) {
        ReportRow row;
        row.param = value;
        row.family = f;
        row.value = eval_scalar_family(f, p, cfg, point_seed).value;
        row.true_gen = truth;
        row.ratio = row.value / truth;
        row.mc = mc;
        rows.push_back(std::move(row));
      }
    } else {
      const VectorLocationProblem p = vector_problem_at(cfg, value);
      truth = true_gen_error_vec(p);
      if (cfg.mc_samples > 0)
        mc = mc_gen_error_vec(p, cfg.mc_samples, rng::mix(point_seed + 1));
      for (const BoundFamily f : cfg.families) {
        ReportRow row;
        row.param = value;
        row.family = f;
        row.value = eval_vector_family(f, p).value;
        row.true_gen = truth;
        row.ratio = row.value / truth;
        row.mc = mc;
        rows.push_back(std::move(row));
      }
    }
    per_point[idx] = std::move(rows);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, points));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points; ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= points) return;
          try {
            run_point(idx);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(err_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  SweepReport report;
  report.param_name = cfg.sweep_name;
  if (cfg.timestamp) report.generated_at = utc_now_rfc3339();
  for (auto& rows : per_point)
    for (auto& row : rows) report.rows.push_back(std::move(row));
  return report;
}

std::string write_csv(const SweepReport& report) {
  std::ostringstream out;
  if (!report.generated_at.empty()) out << "# generated " << report.generated_at << "\n";
  out << report.param_name << ",family,value,true_gen,ratio,mc_mean,mc_se\n";
  for (const ReportRow& row : report.rows) {
    out << fmt17(row.param) << ',' << to_string(row.family) << ',' << fmt17(row.value) << ','
        << fmt17(row.true_gen) << ',' << fmt17(row.ratio) << ',';
    if (row.mc) out << fmt17(row.mc->mean);
    out << ',';
    if (row.mc) out << fmt17(row.mc->std_error);
    out << '\n';
  }
  return out.str();
}

std::string write_json(const SweepReport& report) {
  nlohmann::ordered_json doc;
  doc["param"] = report.param_name;
  if (!report.generated_at.empty()) doc["generated_at"] = report.generated_at;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["param"] = json_number(row.param);
    r["family"] = to_string(row.family);
    r["value"] = json_number(row.value);
    r["true_gen"] = json_number(row.true_gen);
    r["ratio"] = json_number(row.ratio);
    r["mc_mean"] = row.mc ? json_number(row.mc->mean) : nlohmann::ordered_json(nullptr);
    r["mc_se"] = row.mc ? json_number(row.mc->std_error) : nlohmann::ordered_json(nullptr);
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gaussbound
