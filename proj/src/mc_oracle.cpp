#include "gaussbound/mc_oracle.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gaussbound/rng.hpp"
#include "gaussbound/summation.hpp"

namespace gaussbound {

namespace {

constexpr std::uint64_t kBlockSize = 65536;

// Run fn(block_index, count, engine) over all blocks, possibly in parallel.
// Results land in block order, so downstream combination is deterministic.
template <typename Block, typename Fn>
std::vector<Block> map_blocks(std::uint64_t total, std::uint64_t seed, Fn&& fn) {
  const std::uint64_t nblocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<Block> out(nblocks);
  const auto run_one = [&](std::uint64_t b) {
    const std::uint64_t count = std::min(kBlockSize, total - b * kBlockSize);
    std::mt19937_64 engine(rng::derive(seed, b));
    out[b] = fn(b, count, engine);
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(hw, nblocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) run_one(b);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        try {
          run_one(b);
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
  return out;
}

struct MomentBlock {
  double sum = 0.0;
  double sum_sq = 0.0;
};

McEstimate finalize_moments(std::span<const MomentBlock> blocks, std::uint64_t n,
                            std::uint64_t seed) {
  std::vector<double> sums(blocks.size()), sums_sq(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    sums[b] = blocks[b].sum;
    sums_sq[b] = blocks[b].sum_sq;
  }
  const double total = pairwise_sum(sums);
  const double total_sq = pairwise_sum(sums_sq);
  const double nn = static_cast<double>(n);
  McEstimate est;
  est.mean = total / nn;
  const double var = n > 1 ? std::max(0.0, (total_sq - total * total / nn) / (nn - 1.0)) : 0.0;
  est.std_error = std::sqrt(var / nn);
  est.n_samples = n;
  est.seed = seed;
  est.rng = rng::kAlgorithm;
  return est;
}

void check_samples(std::uint64_t n_samples, std::uint64_t minimum, const char* what) {
  if (n_samples < minimum)
    throw std::invalid_argument(std::string(what) + ": n_samples below the supported minimum");
}

McEstimate gen_error_scalar_impl(const ScalarLocationProblem& p, std::uint64_t n_samples,
                                 std::uint64_t seed, bool naive) {
  validate(p);
  check_samples(n_samples, 100, "mc_gen_error_scalar");
  const int n = p.n();
  const double sd = std::sqrt(p.variance);
  const double noise_sd = std::sqrt(p.noise_variance);
  const auto blocks = map_blocks<MomentBlock>(
      n_samples, seed, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        MomentBlock mb;
        for (std::uint64_t s = 0; s < count; ++s) {
          double wsum = 0.0, zsum = 0.0, zsq = 0.0;
          for (int i = 0; i < n; ++i) {
            const double z = p.mean + sd * normal(eng);
            wsum += p.weights[static_cast<std::size_t>(i)] * z;
            zsum += z;
            zsq += z * z;
          }
          double w = wsum;
          if (noise_sd > 0.0) w += noise_sd * normal(eng);
          double population;
          if (naive) {
            const double fresh = p.mean + sd * normal(eng);
            const double d = fresh - w;
            population = d * d;
          } else {
            const double d = w - p.mean;
            population = p.variance + d * d;
          }
          const double empirical = (zsq - 2.0 * w * zsum + n * w * w) / n;
          const double gap = population - empirical;
          mb.sum += gap;
          mb.sum_sq += gap * gap;
        }
        return mb;
      });
  return finalize_moments(blocks, n_samples, seed);
}

// PSD square root factor G with G G^T = m, tolerant of zero eigenvalues.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal();
}

struct CgfBlock {
  double shift = 0.0;   // per-block max of lambda * F
  double h = 0.0;       // sum exp(lambda F - shift)
  double h_sq = 0.0;    // sum exp(2 (lambda F - shift))
  double f = 0.0;       // sum F
  double f_sq = 0.0;    // sum F^2
  double hf = 0.0;      // sum F exp(lambda F - shift)
};

// Combine shifted block partials and apply the delta method to
// ln(mean h) - lambda * mean F.
McEstimate finalize_cgf(std::span<const CgfBlock> blocks, double lambda, std::uint64_t n,
                        std::uint64_t seed) {
  double shift = -kInf;
  for (const auto& b : blocks) shift = std::max(shift, b.shift);
  std::vector<double> hs(blocks.size()), hsqs(blocks.size()), hfs(blocks.size()),
      fs(blocks.size()), fsqs(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double scale = std::exp(blocks[b].shift - shift);
    hs[b] = blocks[b].h * scale;
    hsqs[b] = blocks[b].h_sq * scale * scale;
    hfs[b] = blocks[b].hf * scale;
    fs[b] = blocks[b].f;
    fsqs[b] = blocks[b].f_sq;
  }
  const double nn = static_cast<double>(n);
  const double h_total = pairwise_sum(hs);
  const double h_mean = h_total / nn;
  const double f_mean = pairwise_sum(fs) / nn;
  McEstimate est;
  est.n_samples = n;
  est.seed = seed;
  est.rng = rng::kAlgorithm;
  est.mean = shift + std::log(h_mean) - lambda * f_mean;
  if (!std::isfinite(est.mean))
    throw std::runtime_error("mc_cgf: empirical MGF overflowed; lambda too close to the domain edge");
  if (n > 1) {
    const double var_h = std::max(0.0, (pairwise_sum(hsqs) - h_total * h_total / nn) / (nn - 1.0));
    const double var_f =
        std::max(0.0, (pairwise_sum(fsqs) - f_mean * f_mean * nn) / (nn - 1.0));
    const double cov_hf = (pairwise_sum(hfs) - h_total * f_mean) / (nn - 1.0);
    const double var_est = (var_h / (h_mean * h_mean) + lambda * lambda * var_f -
                            2.0 * lambda * cov_hf / h_mean) /
                           nn;
    est.std_error = std::sqrt(std::max(0.0, var_est));
  }
  return est;
}

// One block of CGF moments for F values produced by emit(count, out_buffer).
template <typename Emit>
CgfBlock cgf_block(double lambda, std::uint64_t count, std::vector<double>& buffer,
                   Emit&& emit) {
  buffer.resize(count);
  emit(count, buffer);
  CgfBlock cb;
  cb.shift = -kInf;
  for (std::uint64_t s = 0; s < count; ++s) cb.shift = std::max(cb.shift, lambda * buffer[s]);
  if (!std::isfinite(cb.shift)) cb.shift = 0.0;  // lambda == 0 or constant F
  for (std::uint64_t s = 0; s < count; ++s) {
    const double f = buffer[s];
    const double e = std::exp(lambda * f - cb.shift);
    cb.h += e;
    cb.h_sq += e * e;
    cb.f += f;
    cb.f_sq += f * f;
    cb.hf += f * e;
  }
  return cb;
}

}  // namespace

McEstimate mc_gen_error_scalar(const ScalarLocationProblem& p, std::uint64_t n_samples,
                               std::uint64_t seed) {
  return gen_error_scalar_impl(p, n_samples, seed, /*naive=*/false);
}

McEstimate mc_gen_error_scalar_naive(const ScalarLocationProblem& p, std::uint64_t n_samples,
                                     std::uint64_t seed) {
  return gen_error_scalar_impl(p, n_samples, seed, /*naive=*/true);
}

McEstimate mc_gen_error_vec(const VectorLocationProblem& p, std::uint64_t n_samples,
                            std::uint64_t seed) {
  validate(p);
  check_samples(n_samples, 100, "mc_gen_error_vec");
  const int n = p.n();
  const int d = p.d();
  const Eigen::MatrixXd factor = psd_factor(p.covariance);
  const Eigen::MatrixXd& a = p.loss_metric;
  const double trace_as = (a * p.covariance).trace();
  const double noise_sd = std::sqrt(p.noise_variance);
  const auto blocks = map_blocks<MomentBlock>(
      n_samples, seed, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        MomentBlock mb;
        Eigen::VectorXd u(d), z(d), w(d), zsum(d), wsum(d);
        double zaz;
        for (std::uint64_t s = 0; s < count; ++s) {
          wsum.setZero();
          zsum.setZero();
          zaz = 0.0;
          for (int i = 0; i < n; ++i) {
            for (int k = 0; k < d; ++k) u[k] = normal(eng);
            z = p.mean + factor * u;
            wsum += p.weights[static_cast<std::size_t>(i)] * z;
            zsum += z;
            zaz += z.dot(a * z);
          }
          w = wsum;
          if (noise_sd > 0.0) {
            for (int k = 0; k < d; ++k) u[k] = normal(eng);
            w += noise_sd * u;
          }
          const Eigen::VectorXd dw = w - p.mean;
          const double population = trace_as + dw.dot(a * dw);
          const double empirical = (zaz - 2.0 * w.dot(a * zsum) + n * w.dot(a * w)) / n;
          const double gap = population - empirical;
          mb.sum += gap;
          mb.sum_sq += gap * gap;
        }
        return mb;
      });
  return finalize_moments(blocks, n_samples, seed);
}

McEstimate mc_cgf(const ScalarLocationProblem& p, int i, double z, double lambda,
                  std::uint64_t n_samples, std::uint64_t seed) {
  validate(p);
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
  if (!std::isfinite(z) || !std::isfinite(lambda))
    throw std::invalid_argument("mc_cgf: z and lambda must be finite");
  check_samples(n_samples, 10000, "mc_cgf");
  const double ref_sd = std::sqrt(reference_variance(p, i));
  const double slope = 2.0 * (z - p.mean);
  const double intercept = p.variance + p.mean * p.mean - z * z;
  const auto blocks = map_blocks<CgfBlock>(
      n_samples, seed, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        thread_local std::vector<double> buffer;
        return cgf_block(lambda, count, buffer, [&](std::uint64_t c, std::vector<double>& out) {
          for (std::uint64_t s = 0; s < c; ++s) {
            const double w = p.mean + ref_sd * normal(eng);
            out[s] = intercept + slope * w;
          }
        });
      });
  return finalize_cgf(blocks, lambda, n_samples, seed);
}

McEstimate mc_cgf_vec(const VectorLocationProblem& p, int i, const Eigen::VectorXd& z,
                      double lambda, std::uint64_t n_samples, std::uint64_t seed) {
  validate(p);
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
  if (z.size() != p.d()) throw std::invalid_argument("z: dimension mismatch");
  if (!z.allFinite() || !std::isfinite(lambda))
    throw std::invalid_argument("mc_cgf_vec: z and lambda must be finite");
  check_samples(n_samples, 10000, "mc_cgf_vec");
  const int d = p.d();
  const Eigen::MatrixXd factor = psd_factor(reference_covariance(p, i));
  const Eigen::MatrixXd& a = p.loss_metric;
  const Eigen::VectorXd slope = 2.0 * (a * (z - p.mean));
  const double intercept =
      (a * p.covariance).trace() + p.mean.dot(a * p.mean) - z.dot(a * z);
  const auto blocks = map_blocks<CgfBlock>(
      n_samples, seed, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        thread_local std::vector<double> buffer;
        Eigen::VectorXd u(d);
        return cgf_block(lambda, count, buffer, [&](std::uint64_t c, std::vector<double>& out) {
          for (std::uint64_t s = 0; s < c; ++s) {
            for (int k = 0; k < d; ++k) u[k] = normal(eng);
            const Eigen::VectorXd w = p.mean + factor * u;
            out[s] = intercept + slope.dot(w);
          }
        });
      });
  return finalize_cgf(blocks, lambda, n_samples, seed);
}

std::vector<DvCheckRow> mc_dv_check(const ScalarGaussian& p, const ScalarGaussian& q,
                                    const AffineStatistic& f, std::span<const double> lambdas,
                                    std::uint64_t n_samples, std::uint64_t seed) {
  if (!(p.variance >= 0.0) || !(q.variance >= 0.0))
    throw std::invalid_argument("mc_dv_check: variances must be non-negative");
  if (!std::isfinite(f.slope) || !std::isfinite(f.intercept))
    throw std::invalid_argument("mc_dv_check: statistic must be finite");
  check_samples(n_samples, 100, "mc_dv_check");
  const double kl = kl_scalar(p, q);

  // Independent streams for the two sides of the inequality.
  const std::uint64_t seed_p = rng::mix(seed + 1);
  const std::uint64_t seed_q = rng::mix(seed + 2);

  const double p_sd = std::sqrt(p.variance);
  const auto p_blocks = map_blocks<MomentBlock>(
      n_samples, seed_p, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        MomentBlock mb;
        for (std::uint64_t s = 0; s < count; ++s) {
          const double w = p.mean + p_sd * normal(eng);
          const double val = f.slope * w + f.intercept;
          mb.sum += val;
          mb.sum_sq += val * val;
        }
        return mb;
      });
  const McEstimate f_under_p = finalize_moments(p_blocks, n_samples, seed_p);

  const double q_sd = std::sqrt(q.variance);
  std::vector<DvCheckRow> rows;
  rows.reserve(lambdas.size());
  for (const double lambda : lambdas) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("mc_dv_check: lambda must be finite");
    // Re-deriving the same seed per lambda replays one fixed Q stream, so all
    // rows share their Q draws.
    const auto q_blocks = map_blocks<CgfBlock>(
        n_samples, seed_q, [&](std::uint64_t, std::uint64_t count, std::mt19937_64& eng) {
          std::normal_distribution<double> normal(0.0, 1.0);
          thread_local std::vector<double> buffer;
          return cgf_block(lambda, count, buffer,
                           [&](std::uint64_t c, std::vector<double>& out) {
                             for (std::uint64_t s = 0; s < c; ++s) {
                               const double w = q.mean + q_sd * normal(eng);
                               out[s] = f.slope * w + f.intercept;
                             }
                           });
        });
    // log E_Q[e^{lambda F}] and its delta-method standard error.
    double shift = -kInf;
    for (const auto& b : q_blocks) shift = std::max(shift, b.shift);
    std::vector<double> hs(q_blocks.size()), hsqs(q_blocks.size());
    for (std::size_t b = 0; b < q_blocks.size(); ++b) {
      const double scale = std::exp(q_blocks[b].shift - shift);
      hs[b] = q_blocks[b].h * scale;
      hsqs[b] = q_blocks[b].h_sq * scale * scale;
    }
    const double nn = static_cast<double>(n_samples);
    const double h_total = pairwise_sum(hs);
    const double h_mean = h_total / nn;
    const double log_mgf = shift + std::log(h_mean);
    const double var_h =
        n_samples > 1
            ? std::max(0.0, (pairwise_sum(hsqs) - h_total * h_total / nn) / (nn - 1.0))
            : 0.0;
    const double se_mgf = std::sqrt(var_h / nn) / h_mean;

    DvCheckRow row;
    row.lambda = lambda;
    row.lhs = lambda * f_under_p.mean;
    row.rhs = kl + log_mgf;
    row.std_error = std::hypot(std::abs(lambda) * f_under_p.std_error, se_mgf);
    row.holds = row.lhs <= row.rhs + 3.0 * row.std_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gaussbound
