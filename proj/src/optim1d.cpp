#include "gaussbound/optim1d.hpp"

#include <cmath>
#include <stdexcept>

namespace gaussbound {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxGolden = 200;
constexpr int kMaxBracket = 2200;  // enough halvings to reach denormal range
constexpr double kBoundaryProbe = 1e-8;

}  // namespace

InfResult inverse_legendre_dual(const CgfSpec& cgf, double y) {
  if (std::isnan(y) || y < 0.0)
    throw std::invalid_argument("inverse_legendre_dual: y must be non-negative");
  if (!cgf.evaluate) throw std::invalid_argument("inverse_legendre_dual: cgf.evaluate must be set");
  if (std::isnan(cgf.domain_upper) || cgf.domain_upper <= 0.0)
    throw std::invalid_argument("inverse_legendre_dual: domain_upper must be positive");

  InfResult r;
  if (std::isinf(y)) {
    r.value = kInf;
    r.finite = false;
    r.converged = true;
    return r;
  }

  const double hi = std::isinf(cgf.domain_upper) ? 1e300 : 0.999999 * cgf.domain_upper;
  const auto g = [&](double lam) { return (y + cgf.evaluate(lam)) / lam; };

  if (y == 0.0) {
    const double lam = std::min(kBoundaryProbe, 0.5 * hi);
    r.minimizer = lam;
    r.value = g(lam);
    r.boundary = true;
    r.converged = true;
    return r;
  }

  // Bracket a minimum: walk a geometric triple a < m < b until g(m) is the
  // smallest of the three, starting from lambda = 1.
  double m = std::min(1.0, 0.5 * hi);
  double gm = g(m);
  double a = 0.5 * m, b = std::min(2.0 * m, hi);
  double ga = g(a), gb = g(b);
  int iterations = 0;

  if (ga < gm) {
    while (ga < gm && iterations < kMaxBracket && a > 1e-300) {
      b = m;
      gb = gm;
      m = a;
      gm = ga;
      a = 0.5 * m;
      ga = g(a);
      ++iterations;
    }
    if (ga < gm) {  // still descending at the low edge (only possible numerically)
      r.minimizer = a;
      r.value = ga;
      r.boundary = true;
      r.iterations = iterations;
      return r;
    }
  } else if (gb < gm) {
    while (gb < gm && b < hi && iterations < kMaxBracket) {
      a = m;
      ga = gm;
      m = b;
      gm = gb;
      b = std::min(2.0 * b, hi);
      gb = g(b);
      ++iterations;
    }
    if (gb < gm) {  // objective still descending at the clamped domain edge
      r.minimizer = b;
      r.value = gb;
      r.iterations = iterations;
      return r;
    }
  }

  // Golden-section refinement on [a, b] around m.
  constexpr double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  double best_x = m, best_f = gm;
  const auto consider = [&](double x, double f) {
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  };
  consider(x1, f1);
  consider(x2, f2);

  bool converged = false;
  for (int it = 0; it < kMaxGolden; ++it) {
    if (b - a <= kRelTol * (0.5 * (a + b))) {
      converged = true;
      break;
    }
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
      consider(x2, f2);
    }
    ++iterations;
  }

  // Parabolic vertex through (x-h, x, x+h). Golden section localizes the
  // minimizer only to ~sqrt(eps) relative accuracy on the flat valley floor;
  // the vertex of a fitted parabola at h ~ eps^(1/3) recovers ~1e-10.
  double lam = best_x;
  const double h = 1e-5 * lam;
  if (lam - h > 0.0 && lam + h <= hi) {
    const double g0 = g(lam), gp = g(lam + h), gn = g(lam - h);
    const double denom = gp - 2.0 * g0 + gn;
    if (std::isfinite(denom) && denom > 0.0) {
      const double vertex = lam - 0.5 * h * (gp - gn) / denom;
      if (vertex > 0.0 && vertex <= hi && std::abs(vertex - lam) <= 2.0 * h) {
        const double gv = g(vertex);
        if (std::isfinite(gv)) {
          lam = vertex;
          consider(vertex, gv);
        }
      }
    }
  }

  r.minimizer = lam;
  r.value = best_f;
  r.converged = converged;
  r.iterations = iterations;
  return r;
}

InfResult minimize_bound_objective(double kl, const CgfSpec& cgf) {
  if (std::isnan(kl) || kl < 0.0)
    throw std::invalid_argument("minimize_bound_objective: kl must be non-negative");
  return inverse_legendre_dual(cgf, kl);
}

}  // namespace gaussbound
