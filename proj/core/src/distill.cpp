#include "qkdrates/distill.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "qkdrates/rates.hpp"

namespace qkd {

namespace {

double pow_int(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

DistillOutcome ad_map_block(const BellDiagonal& s0, int b) {
  if (b < 1) throw std::invalid_argument("block size must be >= 1");
  const BellDiagonal s = validate_state(s0);
  if (b == 1) return {1.0, s, true};  // identity map, kept bit-exact

  const double u = s.l00 + s.l01;
  const double v = s.l00 - s.l01;
  const double w = s.l10 + s.l11;
  const double x = s.l10 - s.l11;
  const double ub = pow_int(u, b), vb = pow_int(v, b);
  const double wb = pow_int(w, b), xb = pow_int(x, b);
  const double p = ub + wb;
  if (p < kPsuccCutoff) return {p, BellDiagonal{0.0, 0.0, 0.0, 0.0}, false};
  const double n = 2.0 * p;
  return {p,
          BellDiagonal{(ub + vb) / n, (ub - vb) / n, (wb + xb) / n, (wb - xb) / n},
          true};
}

DistillOutcome dejmps(const BellDiagonal& s) {
  return ad_map_block(canonical_dejmps_order(s).state, 2);
}

DistillOutcome bell_index_oracle(const BellDiagonal& s0, int b) {
  if (b < 1) throw std::invalid_argument("block size must be >= 1");
  if (b > 8) throw std::invalid_argument("Bell-index enumeration limited to b <= 8");
  const BellDiagonal s = validate_state(s0);
  const double lam[4] = {s.l00, s.l01, s.l10, s.l11};  // index = 2*amp + phase

  double cell[4] = {0.0, 0.0, 0.0, 0.0};
  double total = 0.0;
  const std::uint64_t tuples = std::uint64_t{1} << (2 * b);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    double weight = 1.0;
    int amp0 = 0, ph0 = 0;
    bool accept = true;
    for (int k = 0; k < b; ++k) {
      const int idx = static_cast<int>((t >> (2 * k)) & 3u);
      weight *= lam[idx];
      const int amp = idx >> 1;
      const int ph = idx & 1;
      if (k == 0) {
        amp0 = amp;
        ph0 = ph;
      } else {
        // CNOT, control copy 0: target amplitude picks up the control
        // amplitude, control phase picks up the target phase.
        if ((amp ^ amp0) != 0) accept = false;  // post-select target amp = 0
        ph0 ^= ph;
      }
    }
    if (!accept) continue;
    total += weight;
    cell[2 * amp0 + ph0] += weight;
  }

  if (total < kPsuccCutoff)
    return {total, BellDiagonal{0.0, 0.0, 0.0, 0.0}, false};
  return {total,
          BellDiagonal{cell[0] / total, cell[1] / total, cell[2] / total,
                       cell[3] / total},
          true};
}

namespace {

using M16 = Eigen::Matrix<double, 16, 16>;
using M4 = Eigen::Matrix<double, 4, 4>;
using V4 = Eigen::Vector4d;

// |Phi_ij> = (X^i Z^j (x) I)|Phi+>, component index 2*a_A + a_B. All four
// Bell vectors are real.
V4 bell_vector(int i, int j) {
  V4 v = V4::Zero();
  for (int a = 0; a < 2; ++a) {
    const double sign = (a == 1 && j == 1) ? -1.0 : 1.0;
    v[((a ^ i) << 1) | a] += sign;
  }
  return v / std::sqrt(2.0);
}

inline int full_index(int a1, int a2, int b1, int b2) {
  return (a1 << 3) | (a2 << 2) | (b1 << 1) | b2;
}

}  // namespace

DistillOutcome dense_two_copy_oracle(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);

  M4 rho = M4::Zero();
  const double lam[2][2] = {{s.l00, s.l01}, {s.l10, s.l11}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const V4 v = bell_vector(i, j);
      rho += lam[i][j] * v * v.transpose();
    }

  // Two copies in qubit order A1 A2 B1 B2; copy 1 = (A1, B1), copy 2 = (A2, B2).
  M16 rho2 = M16::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          for (int c1 = 0; c1 < 2; ++c1)
            for (int c2 = 0; c2 < 2; ++c2)
              for (int d1 = 0; d1 < 2; ++d1)
                for (int d2 = 0; d2 < 2; ++d2)
                  rho2(full_index(a1, a2, b1, b2), full_index(c1, c2, d1, d2)) =
                      rho(2 * a1 + b1, 2 * c1 + d1) * rho(2 * a2 + b2, 2 * c2 + d2);

  // Bi-local CNOTs: A1 controls A2, B1 controls B2.
  M16 cnot = M16::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          cnot(full_index(a1, a2 ^ a1, b1, b2 ^ b1), full_index(a1, a2, b1, b2)) = 1.0;
  rho2 = cnot * rho2 * cnot.transpose();

  // Measure the targets A2, B2 and keep the equal-outcome branches.
  M16 sigma = M16::Zero();
  for (int branch = 0; branch < 2; ++branch) {
    M16 proj = M16::Zero();
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b1 = 0; b1 < 2; ++b1)
        proj(full_index(a1, branch, b1, branch), full_index(a1, branch, b1, branch)) = 1.0;
    sigma += proj * rho2 * proj;
  }
  const double p = sigma.trace();
  if (p < kPsuccCutoff) return {p, BellDiagonal{0.0, 0.0, 0.0, 0.0}, false};

  // Partial trace over the targets leaves the surviving pair (A1, B1).
  M4 tau = M4::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int d1 = 0; d1 < 2; ++d1)
          for (int a2 = 0; a2 < 2; ++a2)
            for (int b2 = 0; b2 < 2; ++b2)
              tau(2 * a1 + b1, 2 * c1 + d1) +=
                  sigma(full_index(a1, a2, b1, b2), full_index(c1, a2, d1, b2));

  double out[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const V4 v = bell_vector(i, j);
      out[i][j] = v.dot(tau * v) / p;
    }
  return {p, BellDiagonal{out[0][0], out[0][1], out[1][0], out[1][1]}, true};
}

AdDejmpsEquivalence check_ad_dejmps_equivalence(const BellDiagonal& s0,
                                                double f) {
  const BellDiagonal s = validate_state(s0);
  if (!is_entangled(s))
    throw std::domain_error(
        "the AD/DEJMPS comparison requires an entangled state");
  if (!(s.l00 > 0.5))
    throw std::domain_error(
        "the AD/DEJMPS comparison requires lambda_00 > 1/2");

  const Basis key = highest_qber_basis(qbers_from_lambdas(s));
  const RateResult ad = ad_rate_six_state(s, {key, 2, f});

  const DistillOutcome d = dejmps(s);
  const RateResult one_way = rate_six_state(d.out, {Basis::Z, 1, f});
  const double rate_dejmps = 0.5 * d.p_succ * one_way.rate;

  return {ad.rate, rate_dejmps, std::abs(ad.rate - rate_dejmps) < 1e-10};
}

}  // namespace qkd
