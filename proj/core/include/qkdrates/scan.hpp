#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkdrates/rates.hpp"

namespace qkd {

enum class Protocol { SixState, Bb84 };

/// How a six-state region scan fixes the Y-basis QBER at each grid point.
enum class QyRule {
  Fixed,      ///< qy = a constant supplied by the caller
  Rank3,      ///< qy = qx + qz (rank-3 Bell-diagonal family)
  WorstCase,  ///< each basis rate minimized over the positivity interval
};

/// Rate differences below this are ties: the qy minimizer is only accurate
/// to about 1e-9 in value, so smaller gaps carry no information.
inline constexpr double kRateTieTol = 1e-9;

struct ScanSettings {
  Protocol protocol = Protocol::SixState;
  int block = 1;
  double f = 1.0;
  QyRule qy_rule = QyRule::Fixed;
  double qy_fixed = 0.0;
  int grid_points = kDefaultGridPoints;
  std::optional<Basis> forced_basis;  ///< report this basis instead of argmax
};

/// One row of a sweep. Rates are NaN where not applicable (rate_y for BB84,
/// everything for invalid rows).
struct ScanRecord {
  double qx = 0.0, qy = 0.0, qz = 0.0;
  double rate_x = 0.0, rate_y = 0.0, rate_z = 0.0;
  Basis best_basis = Basis::Z;
  double best_rate = 0.0;
  double p_succ = 1.0;     ///< of the reported basis
  double fidelity = 0.0;   ///< l00 of the row state
  double eof = 0.0;        ///< entanglement of formation (0 when separable)
  bool valid = true;
  bool entangled = false;
};

/// Six-state evaluation of an explicit QBER triple. Unrealizable triples
/// yield a row with valid = false and NaN rates instead of an error.
ScanRecord evaluate_point(const QberTriple& q, const ScanSettings& st);

/// BB84 evaluation of an explicit triple: rates use the worst-case Q_Y,
/// the state columns (fidelity, eof, entangled) describe the given triple.
ScanRecord evaluate_bb84_point(const QberTriple& q, const ScanSettings& st);

/// Evaluation at a region grid point where Q_Y is not an input. For BB84 and
/// the worst-case rule the row's qy column and state columns are taken at the
/// reported basis's minimizing Q_Y.
ScanRecord evaluate_region_point(double qx, double qz, const ScanSettings& st);

/// 1-D family sweep at fixed (qx, qz), qy ascending from lo by step.
std::vector<ScanRecord> scan1d(double qx, double qz, double qy_lo,
                               double qy_hi, double qy_step,
                               const ScanSettings& st);

struct RegionSummary {
  long positive = 0;         ///< rows with best_rate > 0
  long higher_qber_wins = 0; ///< higher-QBER basis at least ties (see README)
  long inverted = 0;         ///< a strictly lower-QBER basis wins by > kRateTieTol
};

struct RegionScan {
  std::vector<ScanRecord> rows;  ///< row-major, qx outer, qz inner
  RegionSummary summary;
};

/// 2-D scan over (qx, qz) in [lo, hi] with the given step.
RegionScan scan_region(double lo, double hi, double step,
                       const ScanSettings& st);

/// Per-point classification behind the summary counts. For BB84 and the
/// worst-case rule the comparison is between the observed X and Z bases;
/// qx = qz points and gaps below kRateTieTol count as HigherWins ties.
enum class PointClass { NotPositive, HigherWins, Inverted };
PointClass classify_point(const ScanRecord& r, const ScanSettings& st);

/// Classification used for the summary, exposed so callers can recount rows.
RegionSummary summarize_region(const std::vector<ScanRecord>& rows,
                               const ScanSettings& st);

/// CSV schema shared by the rate/scan commands.
std::string scan_csv_header();
std::string to_csv(const ScanRecord& r);
std::string to_csv(const RegionSummary& s);

}  // namespace qkd
