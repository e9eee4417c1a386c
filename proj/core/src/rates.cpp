#include "qkdrates/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkdrates/distill.hpp"

namespace qkd {

namespace {

double plog2(double p) { return p <= 0.0 ? 0.0 : -p * std::log2(p); }

void check_f(double f) {
  if (!(f >= 1.0))
    throw std::invalid_argument("reconciliation factor f must be >= 1");
}

void check_bb84_basis(Basis basis) {
  if (basis == Basis::Y)
    throw std::invalid_argument("BB84 key basis must be X or Z");
}

// Rate with the leakage term scaled by f and Eve's term held fixed:
// 1 - f*h(Q) - (H({l_ij}) - h(Q)). For f = 1 the h(Q) terms cancel and
// the expression reduces to 1 - H({l_ij}).
double rate_from_state(const BellDiagonal& s, double f) {
  const double q = s.l10 + s.l11;
  const double hq = binary_entropy(q);
  return 1.0 - f * hq - (entropy4(s) - hq);
}

}  // namespace

double binary_entropy(double p) {
  if (p < -kCoeffTol || p > 1.0 + kCoeffTol)
    throw std::domain_error("binary_entropy argument outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  return plog2(p) + plog2(1.0 - p);
}

double entropy4(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);
  return plog2(s.l00) + plog2(s.l01) + plog2(s.l10) + plog2(s.l11);
}

RateResult rate_six_state(const BellDiagonal& s, const RateParams& params) {
  if (params.block != 1)
    throw std::invalid_argument("rate_six_state requires block = 1");
  check_f(params.f);
  const BellDiagonal sp = permute_for_key_basis(s, params.basis);
  const double rate = rate_from_state(sp, params.f);
  return {rate, std::max(rate, 0.0), 1.0, std::nullopt, std::nullopt};
}

RateResult rate_bb84(double qx, double qz, const RateParams& params) {
  if (params.block != 1)
    throw std::invalid_argument("rate_bb84 requires block = 1");
  check_f(params.f);
  check_bb84_basis(params.basis);
  validate_qbers({qx, std::min(qx + qz, 2.0 - qx - qz), qz});
  const double q_key = params.basis == Basis::Z ? qz : qx;
  const double q_test = params.basis == Basis::Z ? qx : qz;
  const double rate =
      1.0 - params.f * binary_entropy(q_key) - binary_entropy(q_test);
  return {rate, std::max(rate, 0.0), 1.0, std::nullopt, qy_star(qx, qz)};
}

double qy_star(double qx, double qz) { return qx + qz - 2.0 * qx * qz; }

std::pair<double, double> qy_range(double qx, double qz) {
  const double lo = std::abs(qx - qz);
  const double hi = std::min(qx + qz, 2.0 - qx - qz);
  return {lo, std::max(lo, hi)};
}

RateResult ad_rate_six_state(const BellDiagonal& s, const RateParams& params) {
  if (params.block < 1)
    throw std::invalid_argument("block size must be >= 1");
  check_f(params.f);
  const BellDiagonal sp = permute_for_key_basis(s, params.basis);
  const DistillOutcome d = ad_map_block(sp, params.block);
  if (!d.out_defined)
    return {0.0, 0.0, d.p_succ, std::nullopt, std::nullopt};
  const double rate =
      d.p_succ / static_cast<double>(params.block) * rate_from_state(d.out, params.f);
  return {rate, std::max(rate, 0.0), d.p_succ, d.out, std::nullopt};
}

RateResult ad_rate_bb84(double qx, double qz, const RateParams& params,
                        int grid_points) {
  if (params.block < 1)
    throw std::invalid_argument("block size must be >= 1");
  check_f(params.f);
  check_bb84_basis(params.basis);
  const auto [lo, hi] = qy_range(qx, qz);
  validate_qbers({qx, lo, qz});
  RateParams point = params;
  const auto objective = [&](double qy) {
    return ad_rate_six_state(lambdas_from_qbers({qx, qy, qz}), point).rate;
  };
  const Minimum m = minimize_over_qy(objective, lo, hi, grid_points);
  RateResult r = ad_rate_six_state(lambdas_from_qbers({qx, m.arg, qz}), point);
  r.rate_clamped = std::max(r.rate, 0.0);
  r.worst_qy = m.arg;
  return r;
}

namespace {

Minimum golden_section(const std::function<double(double)>& f, double a,
                       double b) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  Minimum best{x1, f1};
  if (f2 < best.value) best = {x2, f2};
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  if (fm < best.value) best = {xm, fm};
  return best;
}

}  // namespace

Minimum minimize_over_qy(const std::function<double(double)>& objective,
                         double lo, double hi, int grid_points) {
  if (!(lo <= hi))
    throw std::invalid_argument("minimize_over_qy requires lo <= hi");
  if (grid_points < 2) grid_points = 2;
  if (hi - lo < 1e-15) return {lo, objective(lo)};

  const int n = grid_points;
  std::vector<double> xs(n), vs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    vs[i] = objective(xs[i]);
  }

  // Indices of the three smallest grid values.
  int best3[3] = {-1, -1, -1};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (best3[k] < 0 || vs[i] < vs[best3[k]]) {
        for (int m = 2; m > k; --m) best3[m] = best3[m - 1];
        best3[k] = i;
        break;
      }
    }
  }

  Minimum best{xs[best3[0]], vs[best3[0]]};
  for (int k = 0; k < 3; ++k) {
    const int i = best3[k];
    if (i < 0) continue;
    const double a = xs[std::max(i - 1, 0)];
    const double b = xs[std::min(i + 1, n - 1)];
    const Minimum m = golden_section(objective, a, b);
    if (m.value < best.value) best = m;
  }
  return best;
}

}  // namespace qkd
