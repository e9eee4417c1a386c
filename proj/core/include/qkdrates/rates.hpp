#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "qkdrates/states.hpp"

namespace qkd {

/// Default density of the search grid used before golden-section refinement.
inline constexpr int kDefaultGridPoints = 2001;

struct RateParams {
  Basis basis = Basis::Z;  ///< key generation basis
  int block = 1;           ///< advantage-distillation block size, 1 = none
  double f = 1.0;          ///< reconciliation inefficiency, leakage = f*h(Q)
};

struct RateResult {
  double rate = 0.0;          ///< secret bits per raw-key symbol, may be < 0
  double rate_clamped = 0.0;  ///< max(rate, 0)
  double p_succ = 1.0;        ///< AD acceptance probability (1 when block = 1)
  std::optional<BellDiagonal> post_ad_state;  ///< present when block >= 2
  std::optional<double> worst_qy;  ///< minimizing Q_Y for BB84 worst-case paths
};

/// Base-2 binary entropy with 0*log0 = 0. Accepts kCoeffTol slack around
/// [0, 1]; throws std::domain_error beyond it.
double binary_entropy(double p);

/// Shannon entropy (base 2) of the four Bell coefficients.
double entropy4(const BellDiagonal& s);

/// One-way six-state rate, 1 - f*h(Q) - (H({l_ij'}) - h(Q)) with Q the
/// key-basis QBER and {l_ij'} the state permuted for that basis. Requires
/// params.block == 1. For f = 1 this reduces to 1 - H({l_ij}) and is
/// independent of the key basis.
RateResult rate_six_state(const BellDiagonal& s, const RateParams& params);

/// One-way BB84 rate with the Y-basis QBER at its worst case:
/// 1 - f*h(Q_key) - h(Q_test). Key basis must be X or Z; block must be 1.
RateResult rate_bb84(double qx, double qz, const RateParams& params);

/// Location of the six-state rate minimum over the unobserved Q_Y:
/// qx + qz - 2 qx qz.
double qy_star(double qx, double qz);

/// Positivity interval [|qx - qz|, min(qx + qz, 2 - qx - qz)] for Q_Y.
std::pair<double, double> qy_range(double qx, double qz);

/// Six-state rate with advantage distillation on blocks of size params.block:
/// (p_succ / b) * (1 - f*h(Q~) - (H({l~ij}) - h(Q~))) for the post-AD state.
/// block = 1 is the identity map and reproduces rate_six_state.
RateResult ad_rate_six_state(const BellDiagonal& s, const RateParams& params);

/// BB84 rate with advantage distillation: minimum of ad_rate_six_state over
/// the positivity interval of Q_Y. The minimizing Q_Y is returned in
/// RateResult::worst_qy, p_succ and post_ad_state are taken at the minimum.
RateResult ad_rate_bb84(double qx, double qz, const RateParams& params,
                        int grid_points = kDefaultGridPoints);

struct Minimum {
  double arg = 0.0;
  double value = 0.0;
};

/// Global minimum of a scalar objective on [lo, hi]: dense grid scan
/// followed by golden-section refinement around the three best grid points.
/// Accurate to about 1e-9 in value and 1e-6 in argument for smooth
/// objectives; the objective may be non-convex.
Minimum minimize_over_qy(const std::function<double(double)>& objective,
                         double lo, double hi,
                         int grid_points = kDefaultGridPoints);

}  // namespace qkd
