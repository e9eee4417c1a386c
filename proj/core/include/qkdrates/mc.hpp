#pragma once

#include <cstdint>

#include "qkdrates/states.hpp"

namespace qkd {

/// Counter-based random generator (splitmix64 finalizer over seed + counter).
/// Stateless, so any partition of the counter range reproduces the
/// sequential stream exactly.
std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Uniform double in [0, 1) from the counter stream.
double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept;

struct McConfig {
  double q = 0.0;               ///< key-basis QBER
  std::uint64_t blocks = 1;     ///< number of AD blocks to simulate
  int b = 2;                    ///< block size, >= 2
  std::uint64_t seed = 0;
  bool transcript = false;  ///< simulate full Protocol transcripts (a, r, c)
                            ///< instead of bare error patterns; same counts
};

struct McStats {
  std::uint64_t blocks = 0;
  std::uint64_t accepted = 0;
  std::uint64_t kept_errors = 0;  ///< accepted blocks whose kept bit disagrees
  double p_succ_hat = 0.0;
  double p_succ_se = 0.0;  ///< binomial standard error of p_succ_hat
  double qber_hat = 0.0;   ///< disagreement fraction among accepted blocks
  double qber_se = 0.0;
};

/// Simulates `blocks` advantage-distillation blocks: b i.i.d. Bernoulli(q)
/// error bits per block, accept iff the pattern is all-0 or all-1, kept bit
/// disagrees iff all-1. Deterministic given the seed.
McStats run_ad_mc(const McConfig& cfg);

struct McReport {
  McStats stats;
  double p_succ_analytic = 0.0;
  double qber_analytic = 0.0;
  double z_p = 0.0;
  double z_qber = 0.0;
  bool pass = false;  ///< both |z| < 4
};

/// Runs the simulation and compares against the closed-form acceptance
/// probability and post-AD QBER of ad_map_block(s, cfg.b). The state's
/// Z-basis QBER must equal cfg.q (to 1e-12).
McReport compare_to_closed_form(const McConfig& cfg, const BellDiagonal& s);

}  // namespace qkd
