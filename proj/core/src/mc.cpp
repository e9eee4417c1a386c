#include "qkdrates/mc.hpp"

#include <cmath>
#include <stdexcept>

#include "qkdrates/distill.hpp"

namespace qkd {

std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter) noexcept {
  // splitmix64: position the stream at seed + (counter+1)*gamma and finalize.
  std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(counter_rng(seed, counter) >> 11) * 0x1.0p-53;
}

namespace {

void check_config(const McConfig& cfg) {
  if (cfg.blocks < 1) throw std::invalid_argument("blocks must be >= 1");
  if (cfg.b < 2) throw std::invalid_argument("block size must be >= 2");
  if (cfg.q < 0.0 || cfg.q > 1.0)
    throw std::invalid_argument("q must lie in [0, 1]");
}

}  // namespace

McStats run_ad_mc(const McConfig& cfg) {
  check_config(cfg);
  const int b = cfg.b;
  // Each block owns a fixed counter budget so any partition of the block
  // range reproduces the sequential stream: b error bits, b Alice bits, r.
  const std::uint64_t stride = static_cast<std::uint64_t>(2 * b + 1);

  std::uint64_t accepted = 0;
  std::uint64_t kept_errors = 0;
  for (std::uint64_t i = 0; i < cfg.blocks; ++i) {
    const std::uint64_t base = i * stride;
    if (!cfg.transcript) {
      int nerr = 0;
      for (int j = 0; j < b; ++j)
        nerr += uniform01(cfg.seed, base + j) < cfg.q ? 1 : 0;
      if (nerr == 0) {
        ++accepted;
      } else if (nerr == b) {
        ++accepted;
        ++kept_errors;
      }
    } else {
      // Full Protocol transcript: Alice's bits a, her mask r, the public
      // c = a xor r, Bob's bits a xor e. Accept iff bob xor c is constant.
      const int r = uniform01(cfg.seed, base + 2 * b) < 0.5 ? 1 : 0;
      int first_masked = 0;
      int first_err = 0;
      bool constant = true;
      for (int j = 0; j < b; ++j) {
        const int a = uniform01(cfg.seed, base + b + j) < 0.5 ? 1 : 0;
        const int e = uniform01(cfg.seed, base + j) < cfg.q ? 1 : 0;
        const int bob = a ^ e;
        const int c = a ^ r;
        const int masked = bob ^ c;
        if (j == 0) {
          first_masked = masked;
          first_err = e;
        } else if (masked != first_masked) {
          constant = false;
        }
      }
      if (constant) {
        ++accepted;
        kept_errors += first_err;
      }
    }
  }

  McStats st;
  st.blocks = cfg.blocks;
  st.accepted = accepted;
  st.kept_errors = kept_errors;
  const double n = static_cast<double>(cfg.blocks);
  st.p_succ_hat = static_cast<double>(accepted) / n;
  st.p_succ_se = std::sqrt(st.p_succ_hat * (1.0 - st.p_succ_hat) / n);
  if (accepted > 0) {
    const double m = static_cast<double>(accepted);
    st.qber_hat = static_cast<double>(kept_errors) / m;
    st.qber_se = std::sqrt(st.qber_hat * (1.0 - st.qber_hat) / m);
  }
  return st;
}

namespace {

double z_score(double estimate, double truth, double se) {
  const double diff = estimate - truth;
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff);
}

}  // namespace

McReport compare_to_closed_form(const McConfig& cfg, const BellDiagonal& s) {
  check_config(cfg);
  const QberTriple q = qbers_from_lambdas(s);
  if (std::abs(q.qz - cfg.q) > 1e-12)
    throw std::invalid_argument(
        "state Z-basis QBER does not match the simulated q");

  const DistillOutcome d = ad_map_block(s, cfg.b);
  McReport rep;
  rep.p_succ_analytic = d.p_succ;
  rep.qber_analytic = d.out_defined ? d.out.l10 + d.out.l11 : 0.0;
  rep.stats = run_ad_mc(cfg);

  const double n = static_cast<double>(cfg.blocks);
  const double se_p =
      std::sqrt(rep.p_succ_analytic * (1.0 - rep.p_succ_analytic) / n);
  rep.z_p = z_score(rep.stats.p_succ_hat, rep.p_succ_analytic, se_p);

  const double m = static_cast<double>(rep.stats.accepted);
  const double se_q =
      m > 0.0 ? std::sqrt(rep.qber_analytic * (1.0 - rep.qber_analytic) / m)
              : 0.0;
  rep.z_qber = z_score(rep.stats.qber_hat, rep.qber_analytic, se_q);

  rep.pass = std::abs(rep.z_p) < 4.0 && std::abs(rep.z_qber) < 4.0;
  return rep;
}

}  // namespace qkd
