#include "qkdrates/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qkdrates/csv.hpp"

namespace qkd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// EoF of an arbitrary valid Bell-diagonal state: the same expression in
// the largest coefficient, 0 for separable states.
double eof_column(const BellDiagonal& s) {
  const double lmax = std::max({s.l00, s.l01, s.l10, s.l11});
  if (!(lmax > 0.5)) return 0.0;
  return binary_entropy(0.5 + std::sqrt(lmax * (1.0 - lmax)));
}

RateResult basis_rate(const BellDiagonal& s, Basis basis,
                      const ScanSettings& st) {
  const RateParams p{basis, st.block, st.f};
  return st.block == 1 ? rate_six_state(s, p) : ad_rate_six_state(s, p);
}

RateResult basis_rate_bb84(double qx, double qz, Basis basis,
                           const ScanSettings& st) {
  const RateParams p{basis, st.block, st.f};
  return st.block == 1 ? rate_bb84(qx, qz, p)
                       : ad_rate_bb84(qx, qz, p, st.grid_points);
}

// Per-basis minimum over the positivity interval of qy (worst-case rule).
RateResult basis_rate_worst(double qx, double qz, Basis basis,
                            const ScanSettings& st) {
  const RateParams p{basis, st.block, st.f};
  const auto [lo, hi] = qy_range(qx, qz);
  const auto objective = [&](double qy) {
    const BellDiagonal s = lambdas_from_qbers({qx, qy, qz});
    return (st.block == 1 ? rate_six_state(s, p) : ad_rate_six_state(s, p)).rate;
  };
  const Minimum m = minimize_over_qy(objective, lo, hi, st.grid_points);
  const BellDiagonal s = lambdas_from_qbers({qx, m.arg, qz});
  RateResult r = st.block == 1 ? rate_six_state(s, p) : ad_rate_six_state(s, p);
  r.worst_qy = m.arg;
  return r;
}

ScanRecord invalid_record(const QberTriple& q) {
  ScanRecord r;
  r.qx = q.qx;
  r.qy = q.qy;
  r.qz = q.qz;
  r.rate_x = r.rate_y = r.rate_z = kNan;
  r.best_rate = kNan;
  r.p_succ = kNan;
  r.fidelity = kNan;
  r.eof = kNan;
  r.valid = false;
  r.entangled = false;
  return r;
}

double rate_of(const ScanRecord& r, Basis b) {
  switch (b) {
    case Basis::Z: return r.rate_z;
    case Basis::X: return r.rate_x;
    case Basis::Y: return r.rate_y;
  }
  return kNan;
}

// argmax over the candidate bases with the fixed tie-break order Z < X < Y,
// or the forced basis when the caller pinned one.
Basis pick_basis(const ScanRecord& r, std::initializer_list<Basis> candidates,
                 const std::optional<Basis>& forced) {
  if (forced) return *forced;
  Basis best = *candidates.begin();
  for (Basis b : candidates)
    if (rate_of(r, b) > rate_of(r, best)) best = b;
  return best;
}

void fill_state_columns(ScanRecord& r, const BellDiagonal& s) {
  r.fidelity = s.l00;
  r.eof = eof_column(s);
  r.entangled = is_entangled(s);
}

}  // namespace

ScanRecord evaluate_point(const QberTriple& q, const ScanSettings& st) {
  if (!is_realizable(q)) return invalid_record(q);
  ScanRecord r;
  r.qx = q.qx;
  r.qy = q.qy;
  r.qz = q.qz;
  const BellDiagonal s = lambdas_from_qbers(q);
  const RateResult rz = basis_rate(s, Basis::Z, st);
  const RateResult rx = basis_rate(s, Basis::X, st);
  const RateResult ry = basis_rate(s, Basis::Y, st);
  r.rate_z = rz.rate;
  r.rate_x = rx.rate;
  r.rate_y = ry.rate;
  const Basis best = pick_basis(r, {Basis::Z, Basis::X, Basis::Y}, st.forced_basis);
  r.best_basis = best;
  r.best_rate = rate_of(r, best);
  r.p_succ = (best == Basis::Z ? rz : best == Basis::X ? rx : ry).p_succ;
  fill_state_columns(r, s);
  return r;
}

ScanRecord evaluate_bb84_point(const QberTriple& q, const ScanSettings& st) {
  if (!is_realizable(q)) return invalid_record(q);
  ScanRecord r;
  r.qx = q.qx;
  r.qy = q.qy;
  r.qz = q.qz;
  const RateResult rz = basis_rate_bb84(q.qx, q.qz, Basis::Z, st);
  const RateResult rx = basis_rate_bb84(q.qx, q.qz, Basis::X, st);
  r.rate_z = rz.rate;
  r.rate_x = rx.rate;
  r.rate_y = kNan;
  const Basis best = pick_basis(r, {Basis::Z, Basis::X}, st.forced_basis);
  r.best_basis = best;
  r.best_rate = rate_of(r, best);
  r.p_succ = (best == Basis::Z ? rz : rx).p_succ;
  fill_state_columns(r, lambdas_from_qbers(q));
  return r;
}

ScanRecord evaluate_region_point(double qx, double qz, const ScanSettings& st) {
  if (st.protocol == Protocol::SixState && st.qy_rule == QyRule::Fixed)
    return evaluate_point({qx, st.qy_fixed, qz}, st);
  if (st.protocol == Protocol::SixState && st.qy_rule == QyRule::Rank3)
    return evaluate_point({qx, qx + qz, qz}, st);

  if (!is_realizable({qx, qy_range(qx, qz).first, qz}))
    return invalid_record({qx, kNan, qz});

  ScanRecord r;
  r.qx = qx;
  r.qz = qz;
  RateResult res_z, res_x, res_y;
  Basis best;
  if (st.protocol == Protocol::Bb84) {
    res_z = basis_rate_bb84(qx, qz, Basis::Z, st);
    res_x = basis_rate_bb84(qx, qz, Basis::X, st);
    r.rate_z = res_z.rate;
    r.rate_x = res_x.rate;
    r.rate_y = kNan;
    best = pick_basis(r, {Basis::Z, Basis::X}, st.forced_basis);
  } else {  // six-state, worst-case rule
    res_z = basis_rate_worst(qx, qz, Basis::Z, st);
    res_x = basis_rate_worst(qx, qz, Basis::X, st);
    res_y = basis_rate_worst(qx, qz, Basis::Y, st);
    r.rate_z = res_z.rate;
    r.rate_x = res_x.rate;
    r.rate_y = res_y.rate;
    best = pick_basis(r, {Basis::Z, Basis::X, Basis::Y}, st.forced_basis);
  }
  const RateResult& chosen =
      best == Basis::Z ? res_z : best == Basis::X ? res_x : res_y;
  r.best_basis = best;
  r.best_rate = rate_of(r, best);
  r.p_succ = chosen.p_succ;
  // The state columns describe the estimate at the reported basis's
  // minimizing Q_Y; without it the row state is undetermined.
  r.qy = chosen.worst_qy.value_or(kNan);
  if (chosen.worst_qy)
    fill_state_columns(r, lambdas_from_qbers({qx, *chosen.worst_qy, qz}));
  else
    r.fidelity = r.eof = kNan;
  return r;
}

std::vector<ScanRecord> scan1d(double qx, double qz, double qy_lo,
                               double qy_hi, double qy_step,
                               const ScanSettings& st) {
  if (!(qy_step > 0.0)) throw std::invalid_argument("qy step must be > 0");
  if (qy_hi < qy_lo - kCoeffTol)
    throw std::invalid_argument("empty qy range");
  const int n =
      static_cast<int>(std::floor((qy_hi - qy_lo) / qy_step + 1e-9)) + 1;
  std::vector<ScanRecord> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const QberTriple q{qx, qy_lo + i * qy_step, qz};
    rows.push_back(st.protocol == Protocol::Bb84 ? evaluate_bb84_point(q, st)
                                                 : evaluate_point(q, st));
  }
  return rows;
}

PointClass classify_point(const ScanRecord& r, const ScanSettings& st) {
  if (!r.valid || !(r.best_rate > 0.0)) return PointClass::NotPositive;
  const bool xz_only =
      st.protocol == Protocol::Bb84 || st.qy_rule == QyRule::WorstCase;
  double higher, lower;
  if (xz_only) {
    if (r.qx == r.qz) return PointClass::HigherWins;
    higher = r.qz > r.qx ? r.rate_z : r.rate_x;
    lower = r.qz > r.qx ? r.rate_x : r.rate_z;
  } else {
    higher = rate_of(r, highest_qber_basis({r.qx, r.qy, r.qz}));
    lower = r.best_rate;
  }
  return lower > higher + kRateTieTol ? PointClass::Inverted
                                      : PointClass::HigherWins;
}

RegionSummary summarize_region(const std::vector<ScanRecord>& rows,
                               const ScanSettings& st) {
  RegionSummary sum;
  for (const ScanRecord& r : rows) {
    switch (classify_point(r, st)) {
      case PointClass::NotPositive: break;
      case PointClass::HigherWins:
        ++sum.positive;
        ++sum.higher_qber_wins;
        break;
      case PointClass::Inverted:
        ++sum.positive;
        ++sum.inverted;
        break;
    }
  }
  return sum;
}

RegionScan scan_region(double lo, double hi, double step,
                       const ScanSettings& st) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (hi < lo - kCoeffTol) throw std::invalid_argument("empty grid range");
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  RegionScan scan;
  scan.rows.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      scan.rows.push_back(
          evaluate_region_point(lo + i * step, lo + j * step, st));
  scan.summary = summarize_region(scan.rows, st);
  return scan;
}

std::string scan_csv_header() {
  return "qx,qy,qz,rate_x,rate_y,rate_z,best_basis,best_rate,p_succ,fidelity,"
         "eof,valid,entangled";
}

std::string to_csv(const ScanRecord& r) {
  std::string row;
  row.reserve(180);
  row += csv::num(r.qx);
  row += ',';
  row += csv::num(r.qy);
  row += ',';
  row += csv::num(r.qz);
  row += ',';
  row += csv::num(r.rate_x);
  row += ',';
  row += csv::num(r.rate_y);
  row += ',';
  row += csv::num(r.rate_z);
  row += ',';
  row += r.valid ? to_string(r.best_basis) : "-";
  row += ',';
  row += csv::num(r.best_rate);
  row += ',';
  row += csv::num(r.p_succ);
  row += ',';
  row += csv::num(r.fidelity);
  row += ',';
  row += csv::num(r.eof);
  row += ',';
  row += csv::flag(r.valid);
  row += ',';
  row += csv::flag(r.entangled);
  return row;
}

std::string to_csv(const RegionSummary& s) {
  return "summary," + std::to_string(s.positive) + ',' +
         std::to_string(s.higher_qber_wins) + ',' + std::to_string(s.inverted);
}

}  // namespace qkd
