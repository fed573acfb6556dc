// Overlap parametrization of assignment pairs and the exponent functions of
// the second-moment computation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "regsat/analytic.hpp"
#include "regsat/errors.hpp"

namespace regsat {

namespace {

struct Parts {
  double qmm, u, s;
};

Parts parts(int k, double q11, double q1m) {
  const double qmm = 1.0 - q11 - 2.0 * q1m;
  const double u = qmm + q1m;
  return {qmm, u, 1.0 - 2.0 * std::pow(u, k) + std::pow(qmm, k)};
}

bool feasible(double q11, double q1m) {
  return q11 > 0.0 && q1m > 0.0 && 1.0 - q11 - 2.0 * q1m > 0.0;
}

double max_abs(const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

void require_rho(double rho11) {
  if (!(rho11 > 0.0 && rho11 < 0.5)) throw DomainError("rho11 must lie in (0, 1/2)");
}

}  // namespace

std::array<double, 2> overlap_residual(int k, double rho11, double q11, double q1m) {
  const Parts p = parts(k, q11, q1m);
  return {q11 / p.s - rho11, q1m * (1.0 - std::pow(p.u, k - 1)) / p.s - (0.5 - rho11)};
}

std::array<double, 4> overlap_jacobian(int k, double q11, double q1m) {
  const Parts p = parts(k, q11, q1m);
  const double u_km1 = std::pow(p.u, k - 1);
  const double u_km2 = std::pow(p.u, k - 2);
  const double qmm_km1 = std::pow(p.qmm, k - 1);
  // q_{-1,-1} = 1 - q11 - 2 q1m and u = q_{-1,-1} + q_{1,-1} = 1 - q11 - q1m.
  const double ds_d11 = 2.0 * k * u_km1 - k * qmm_km1;
  const double ds_d1m = 2.0 * k * u_km1 - 2.0 * k * qmm_km1;
  const double Q1m = q1m * (1.0 - u_km1) / p.s;
  return {
      1.0 / p.s - q11 / (p.s * p.s) * ds_d11,
      -q11 / (p.s * p.s) * ds_d1m,
      q1m * (k - 1) * u_km2 / p.s - Q1m / p.s * ds_d11,
      (1.0 - u_km1 + (k - 1) * q1m * u_km2) / p.s - Q1m / p.s * ds_d1m,
  };
}

OverlapPoint overlap_solve(int k, double rho11) {
  if (k < 3) throw DomainError("overlap_solve requires k >= 3");
  require_rho(rho11);
  const double q = solve_q(k);
  double x11 = q * q, x1m = q * (1.0 - q);
  auto res = overlap_residual(k, rho11, x11, x1m);
  double norm = max_abs(res);

  constexpr int kMaxIter = 50;
  int iter = 0;
  for (; iter < kMaxIter && norm > 0.0; ++iter) {
    const auto J = overlap_jacobian(k, x11, x1m);
    const double det = J[0] * J[3] - J[1] * J[2];
    if (det == 0.0 || !std::isfinite(det)) break;
    const double step11 = (J[3] * res[0] - J[1] * res[1]) / det;
    const double step1m = (J[0] * res[1] - J[2] * res[0]) / det;

    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
      const double c11 = x11 - scale * step11;
      const double c1m = x1m - scale * step1m;
      if (!feasible(c11, c1m)) continue;
      const auto cres = overlap_residual(k, rho11, c11, c1m);
      const double cnorm = max_abs(cres);
      if (cnorm < norm) {
        x11 = c11;
        x1m = c1m;
        res = cres;
        norm = cnorm;
        improved = true;
        break;
      }
    }
    // No strict decrease means we are at the floating-point floor.
    if (!improved) break;
  }

  if (!(norm <= 1e-10)) {
    std::ostringstream msg;
    msg << "overlap_solve failed to converge: k=" << k << " rho11=" << rho11
        << " residual=" << norm << " after " << iter << " iterations (q11=" << x11
        << ", q1m=" << x1m << ")";
    throw NumericalError(msg.str());
  }

  const Parts p = parts(k, x11, x1m);
  OverlapPoint out{};
  out.k = k;
  out.rho11 = rho11;
  out.rho = {rho11, 0.5 - rho11, 0.5 - rho11, rho11};
  out.qmat = {x11, x1m, x1m, p.qmm};
  out.s = p.s;
  out.residual = norm;
  out.iterations = iter;
  return out;
}

double overlap_f(int k, double rho11) {
  const OverlapPoint pt = overlap_solve(k, rho11);
  return std::log(pt.s) + k * kl_divergence(pt.rho, pt.qmat);
}

OverlapExponents overlap_exponents(int k, int d, double rho11) {
  if (d < 1) throw DomainError("d must be positive");
  const OverlapPoint pt = overlap_solve(k, rho11);
  double entropy = 0.0;
  for (double r : pt.rho) entropy -= r * std::log(r);
  const double f = std::log(pt.s) + k * kl_divergence(pt.rho, pt.qmat);
  const double g = entropy + 2.0 * d / k *
                                 std::log(1.0 - std::ldexp(1.0, 1 - k) + std::pow(rho11, k));
  return {f, g, entropy};
}

double bar_nu(const OverlapPoint& pt, PatternCode sigma, PatternCode tau) {
  const PatternCode limit = PatternCode{1} << pt.k;
  if (sigma == 0 || tau == 0 || sigma >= limit || tau >= limit) {
    throw DomainError("bar_nu patterns must be satisfying patterns of width k");
  }
  double prod = 1.0;
  for (int i = 0; i < pt.k; ++i) {
    const bool a = (sigma >> i) & 1u;
    const bool b = (tau >> i) & 1u;
    prod *= pt.qmat[(a ? 0 : 2) + (b ? 0 : 1)];
  }
  return prod / pt.s;
}

double bar_nu(int k, double rho11, PatternCode sigma, PatternCode tau) {
  return bar_nu(overlap_solve(k, rho11), sigma, tau);
}

}  // namespace regsat
