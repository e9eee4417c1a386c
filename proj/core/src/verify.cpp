#include "qkdrates/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qkdrates/csv.hpp"
#include "qkdrates/distill.hpp"
#include "qkdrates/mc.hpp"
#include "qkdrates/scan.hpp"

namespace qkd {

namespace {

BellDiagonal random_state(std::uint64_t seed, std::uint64_t k) {
  double e[4];
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double u = uniform01(seed, 4 * k + static_cast<std::uint64_t>(i));
    e[i] = -std::log1p(-u);
    sum += e[i];
  }
  if (sum <= 0.0) return {0.25, 0.25, 0.25, 0.25};
  return {e[0] / sum, e[1] / sum, e[2] / sum, e[3] / sum};
}

// Random state with l00 > 1/2 (hence entangled, all QBERs < 1/2).
BellDiagonal random_peaked_state(std::uint64_t seed, std::uint64_t k) {
  const double u0 = uniform01(seed, 4 * k);
  const double l00 = 0.5 + 0.5 * (0.001 + 0.998 * u0);
  double e[3];
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double u = uniform01(seed, 4 * k + 1 + static_cast<std::uint64_t>(i));
    e[i] = -std::log1p(-u);
    sum += e[i];
  }
  if (sum <= 0.0) sum = 1.0, e[0] = e[1] = e[2] = 1.0 / 3.0;
  const double rest = 1.0 - l00;
  return {l00, rest * e[0] / sum, rest * e[1] / sum, rest * e[2] / sum};
}

Basis lowest_qber_basis(const QberTriple& q) {
  Basis best = Basis::Z;
  double val = q.qz;
  if (q.qx < val) {
    best = Basis::X;
    val = q.qx;
  }
  if (q.qy < val) best = Basis::Y;
  return best;
}

double rate_in_basis(const BellDiagonal& s, Basis b, double f) {
  return rate_six_state(s, {b, 1, f}).rate;
}

AnchorResult value_anchor(std::string name, double expected, double computed,
                          double tol) {
  return {std::move(name), csv::num(expected), csv::num(computed),
          std::abs(computed - expected) <= tol};
}

AnchorResult bool_anchor(std::string name, std::string expected,
                         std::string computed, bool pass) {
  return {std::move(name), std::move(expected), std::move(computed), pass};
}

}  // namespace

std::vector<AnchorResult> run_verification(const VerifyOptions& opts) {
  std::vector<AnchorResult> out;
  const BellDiagonal cx = lambdas_from_qbers({0.39, 0.39, 0.01});

  out.push_back(value_anchor("counterexample-initial-fidelity", 0.605,
                             singlet_fidelity(cx), 5e-4));

  const DistillOutcome ad2 = ad_map_block(cx, 2);
  out.push_back(value_anchor("counterexample-ad-psucc", 0.9802, ad2.p_succ, 1e-12));
  out.push_back(value_anchor("counterexample-ad-fidelity", 0.525, ad2.out.l00, 5e-4));

  const DistillOutcome dj = dejmps(cx);
  out.push_back(value_anchor("counterexample-dejmps-psucc", 0.5242, dj.p_succ, 1e-12));
  out.push_back(value_anchor("counterexample-dejmps-fidelity", 0.698, dj.out.l00, 5e-4));

  {
    const double rz = ad_rate_six_state(cx, {Basis::Z, 2, 1.0}).rate;
    const double rx = ad_rate_six_state(cx, {Basis::X, 2, 1.0}).rate;
    const double ry = ad_rate_six_state(cx, {Basis::Y, 2, 1.0}).rate;
    out.push_back(bool_anchor(
        "counterexample-z-only-positive", "Z>0;X<=0;Y<=0",
        "Z=" + csv::num(rz) + ";X=" + csv::num(rx) + ";Y=" + csv::num(ry),
        rz > 0.0 && rx <= 0.0 && ry <= 0.0));
  }
  {
    const double direct = rate_six_state(cx, {Basis::Z, 1, 1.0}).rate;
    const double after = rate_six_state(ad2.out, {Basis::Z, 1, 1.0}).rate;
    out.push_back(bool_anchor(
        "counterexample-one-way-then-postad", "direct<=0;post-AD>0",
        "direct=" + csv::num(direct) + ";post=" + csv::num(after),
        direct <= 0.0 && after > 0.0));
  }

  {
    // Zero crossing of 1 - 2h(q) by bisection.
    double lo = 0.05, hi = 0.2;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (1.0 - 2.0 * binary_entropy(mid) > 0.0 ? lo : hi) = mid;
    }
    out.push_back(value_anchor("bb84-threshold", 0.110, 0.5 * (lo + hi), 1e-3));
  }

  out.push_back(value_anchor("qy-star-closed-form", 0.18, qy_star(0.1, 0.1), 1e-12));

  {
    const auto objective = [](double qy) {
      return rate_six_state(lambdas_from_qbers({0.1, qy, 0.1}), {Basis::Z, 1, 1.0})
          .rate;
    };
    const Minimum m = minimize_over_qy(objective, 0.0, 0.2, opts.grid_points);
    const double expect = rate_bb84(0.1, 0.1, {Basis::Z, 1, 1.0}).rate;
    out.push_back(bool_anchor(
        "family-rate-minimum", "argmin=1.8e-1;value=" + csv::num(expect),
        "argmin=" + csv::num(m.arg) + ";value=" + csv::num(m.value),
        std::abs(m.arg - 0.18) <= 1e-3 && std::abs(m.value - expect) <= 1e-4));
  }

  {
    int violations = 0;
    double prev_f = 2.0, prev_e = 2.0;
    for (int i = 0; i <= 200; ++i) {
      const BellDiagonal s = lambdas_from_qbers({0.1, i * 0.001, 0.1});
      const double fv = singlet_fidelity(s);
      const double ev = entanglement_of_formation(s);
      if (i > 0 && (fv >= prev_f || ev >= prev_e)) ++violations;
      prev_f = fv;
      prev_e = ev;
    }
    out.push_back(bool_anchor("family-fidelity-eof-monotone", "violations=0",
                              "violations=" + std::to_string(violations),
                              violations == 0));
  }

  {
    const double r1 = rate_six_state(lambdas_from_qbers({0.1, 0.2, 0.1}),
                                     {Basis::Z, 1, 1.0})
                          .rate;
    const double r2 = rate_six_state(lambdas_from_qbers({0.098, 0.18, 0.098}),
                                     {Basis::Z, 1, 1.0})
                          .rate;
    out.push_back(bool_anchor("higher-qbers-higher-rate", "R(1)>R(2)",
                              "R1=" + csv::num(r1) + ";R2=" + csv::num(r2),
                              r1 > r2));
  }

  {
    const std::uint64_t s1 = counter_rng(opts.seed, 101);
    double spread = 0.0;
    for (std::uint64_t k = 0; k < 200; ++k) {
      const BellDiagonal s = random_state(s1, k);
      const double rz = rate_in_basis(s, Basis::Z, 1.0);
      const double rx = rate_in_basis(s, Basis::X, 1.0);
      const double ry = rate_in_basis(s, Basis::Y, 1.0);
      spread = std::max(
          spread, std::max({rz, rx, ry}) - std::min({rz, rx, ry}));
    }
    out.push_back(bool_anchor("min-leakage-basis-invariance", "spread<=1e-12",
                              "max_spread=" + csv::num(spread),
                              spread <= 1e-12));
  }

  {
    const std::uint64_t s2 = counter_rng(opts.seed, 102);
    double worst = 1.0;
    bool broke = false;
    for (std::uint64_t k = 0; k < 200; ++k) {
      const BellDiagonal s = random_peaked_state(s2, k);
      const QberTriple q = qbers_from_lambdas(s);
      const double best = rate_in_basis(s, lowest_qber_basis(q), 1.2);
      double mx = -2.0, mn = 2.0;
      for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
        const double r = rate_in_basis(s, b, 1.2);
        mx = std::max(mx, r);
        mn = std::min(mn, r);
        worst = std::min(worst, best - r);
      }
      if (mx - mn > 1e-12) broke = true;
    }
    out.push_back(bool_anchor(
        "inefficiency-favors-lowest-qber", "lowest wins;invariance breaks",
        "worst_margin=" + csv::num(worst) + ";breaks=" + (broke ? "1" : "0"),
        worst >= -1e-12 && broke));
  }

  {
    double cross = -1.0, ry_c = 0.0, rz_c = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double qy = i * 0.001;
      const BellDiagonal s = lambdas_from_qbers({0.1, qy, 0.1});
      const double ry = ad_rate_six_state(s, {Basis::Y, 2, 1.0}).rate;
      const double rz = ad_rate_six_state(s, {Basis::Z, 2, 1.0}).rate;
      if (ry > rz && cross < 0.0) {
        cross = qy;
        ry_c = ry;
        rz_c = rz;
      }
    }
    out.push_back(bool_anchor(
        "ad-y-overtakes-z", "crossing with both rates > 0",
        "qy=" + csv::num(cross) + ";rate_y=" + csv::num(ry_c) +
            ";rate_z=" + csv::num(rz_c),
        cross > 0.0 && cross < 0.2 && ry_c > 0.0 && rz_c > 0.0));
  }

  {
    const std::uint64_t s3 = counter_rng(opts.seed, 103);
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 500; ++k) {
      const AdDejmpsEquivalence t = check_ad_dejmps_equivalence(random_peaked_state(s3, k), 1.0);
      worst = std::max(worst, std::abs(t.rate_ad - t.rate_dejmps));
    }
    out.push_back(bool_anchor("ad-equals-dejmps", "max_diff<1e-10",
                              "max_diff=" + csv::num(worst), worst < 1e-10));
  }

  {
    const std::uint64_t s4 = counter_rng(opts.seed, 104);
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 200; ++k) {
      const BellDiagonal s = random_state(s4, k);
      const double qz = qbers_from_lambdas(s).qz;
      const double p = ad_map_block(s, 2).p_succ;
      worst = std::max(worst, std::abs(p - (qz * qz + (1.0 - qz) * (1.0 - qz))));
    }
    out.push_back(bool_anchor("psucc-qber-identity", "max_diff<=1e-14",
                              "max_diff=" + csv::num(worst), worst <= 1e-14));
  }

  {
    int violations = 0;
    double prev = 2.0;
    for (int i = 0; i <= 500; ++i) {
      const double q = 0.5 * i / 500.0;
      const double p = ad_map_block(lambdas_from_qbers({0.5, 0.5, q}), 2).p_succ;
      if (i > 0 && p >= prev) ++violations;
      prev = p;
    }
    out.push_back(bool_anchor("psucc-monotone", "violations=0",
                              "violations=" + std::to_string(violations),
                              violations == 0));
  }

  {
    const double step = opts.region_step;
    const double lo = step, hi = 0.5 - step;
    ScanSettings st;
    st.protocol = Protocol::Bb84;
    st.block = 2;
    st.grid_points = opts.grid_points;
    const RegionScan scan2 = scan_region(lo, hi, step, st);
    double maxdist = 0.0;
    long count = 0;
    std::vector<const ScanRecord*> frontier;
    for (const ScanRecord& r : scan2.rows)
      if (classify_point(r, st) == PointClass::NotPositive)
        frontier.push_back(&r);
    for (const ScanRecord& r : scan2.rows) {
      if (classify_point(r, st) != PointClass::Inverted) continue;
      ++count;
      double d = 1e9;
      for (const ScanRecord* f : frontier)
        d = std::min(d, std::hypot(r.qx - f->qx, r.qz - f->qz));
      maxdist = std::max(maxdist, d);
    }
    out.push_back(bool_anchor(
        "region-b2-inversion-near-frontier", "count>0;maxdist<=0.02",
        "count=" + std::to_string(count) + ";maxdist=" + csv::num(maxdist),
        count > 0 && maxdist <= 0.02 + 1e-9));

    st.block = 7;
    const RegionScan scan7 = scan_region(lo, hi, step, st);
    out.push_back(bool_anchor(
        "region-b7-no-inversion", "inverted=0",
        "inverted=" + std::to_string(scan7.summary.inverted),
        scan7.summary.inverted == 0));
  }

  {
    const double step = opts.region_step;
    ScanSettings st;
    st.protocol = Protocol::SixState;
    st.qy_rule = QyRule::Rank3;
    st.block = 2;
    const RegionScan scan = scan_region(step, 0.5 - step, step, st);
    double worst = 1.0;
    long positive = 0;
    for (const ScanRecord& r : scan.rows) {
      if (!r.valid || !(r.best_rate > 0.0)) continue;
      ++positive;
      worst = std::min(worst, r.rate_y - std::max(r.rate_x, r.rate_z));
    }
    out.push_back(bool_anchor(
        "rank3-y-basis-wins", "margin>=-1e-12 at all positive points",
        "positive=" + std::to_string(positive) + ";worst_margin=" + csv::num(worst),
        positive > 0 && worst >= -1e-12));
  }

  {
    McConfig cfg;
    cfg.q = 0.01;
    cfg.b = 2;
    cfg.blocks = opts.mc_blocks;
    cfg.seed = opts.seed;
    const McReport rep = compare_to_closed_form(cfg, cx);
    out.push_back(bool_anchor(
        "mc-counterexample-psucc", "|z_p|<4;|z_qber|<4",
        "z_p=" + csv::num(rep.z_p) + ";z_qber=" + csv::num(rep.z_qber),
        rep.pass));
  }

  return out;
}

std::string verify_csv_header() { return "anchor,expected,computed,pass"; }

std::string to_csv(const AnchorResult& r) {
  return r.name + ',' + r.expected + ',' + r.computed + ',' +
         csv::flag(r.pass);
}

}  // namespace qkd
