#include "qkdrates/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qkd {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::domain_error(msg); }

std::string with_value(const char* text, double v) {
  std::ostringstream os;
  os << text << " (value " << v << ")";
  return os.str();
}

void check_unit_interval(const char* name, double v) {
  if (v < -kCoeffTol || v > 1.0 + kCoeffTol)
    fail(with_value((std::string(name) + " outside [0, 1]").c_str(), v));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

bool is_realizable(const QberTriple& q) noexcept {
  if (q.qx < -kCoeffTol || q.qx > 1.0 + kCoeffTol) return false;
  if (q.qy < -kCoeffTol || q.qy > 1.0 + kCoeffTol) return false;
  if (q.qz < -kCoeffTol || q.qz > 1.0 + kCoeffTol) return false;
  // Nonnegativity of the four Bell coefficients, with 2*kCoeffTol slack
  // because each inequality is a two-coefficient linear form.
  const double slack = 2.0 * kCoeffTol;
  if (q.qy < std::abs(q.qx - q.qz) - slack) return false;
  if (q.qy > q.qx + q.qz + slack) return false;
  if (q.qx + q.qy + q.qz > 2.0 + slack) return false;
  return true;
}

void validate_qbers(const QberTriple& q) {
  check_unit_interval("Q_X", q.qx);
  check_unit_interval("Q_Y", q.qy);
  check_unit_interval("Q_Z", q.qz);
  const double slack = 2.0 * kCoeffTol;
  if (q.qy < q.qx - q.qz - slack)
    fail(with_value("not realizable: Q_Y < Q_X - Q_Z (lambda_10 < 0)", q.qy));
  if (q.qy < q.qz - q.qx - slack)
    fail(with_value("not realizable: Q_Y < Q_Z - Q_X (lambda_01 < 0)", q.qy));
  if (q.qy > q.qx + q.qz + slack)
    fail(with_value("not realizable: Q_Y > Q_X + Q_Z (lambda_11 < 0)", q.qy));
  if (q.qx + q.qy + q.qz > 2.0 + slack)
    fail(with_value("not realizable: Q_X + Q_Y + Q_Z > 2 (lambda_00 < 0)",
                    q.qx + q.qy + q.qz));
}

BellDiagonal validate_state(const BellDiagonal& s) {
  check_unit_interval("lambda_00", s.l00);
  check_unit_interval("lambda_01", s.l01);
  check_unit_interval("lambda_10", s.l10);
  check_unit_interval("lambda_11", s.l11);
  const double sum = s.l00 + s.l01 + s.l10 + s.l11;
  if (std::abs(sum - 1.0) > kCoeffTol)
    fail(with_value("Bell coefficients must sum to 1", sum));
  return {clamp01(s.l00), clamp01(s.l01), clamp01(s.l10), clamp01(s.l11)};
}

BellDiagonal lambdas_from_qbers(const QberTriple& q) {
  validate_qbers(q);
  BellDiagonal s{1.0 - 0.5 * (q.qx + q.qy + q.qz),
                 0.5 * (q.qx + q.qy - q.qz),
                 0.5 * (-q.qx + q.qy + q.qz),
                 0.5 * (q.qx - q.qy + q.qz)};
  s.l00 = clamp01(s.l00);
  s.l01 = clamp01(s.l01);
  s.l10 = clamp01(s.l10);
  s.l11 = clamp01(s.l11);
  return s;
}

QberTriple qbers_from_lambdas(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);
  return {s.l01 + s.l11, s.l01 + s.l10, s.l10 + s.l11};
}

bool is_entangled(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);
  return std::max({s.l00, s.l01, s.l10, s.l11}) > 0.5;
}

BellDiagonal permute_for_key_basis(const BellDiagonal& s0, Basis basis) {
  const BellDiagonal s = validate_state(s0);
  switch (basis) {
    case Basis::Z: return s;
    case Basis::X: return {s.l00, s.l10, s.l01, s.l11};
    case Basis::Y: return {s.l00, s.l11, s.l10, s.l01};
  }
  fail("unknown basis");
}

CanonicalOrder canonical_dejmps_order(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);
  if (!(s.l00 > 0.5))
    fail(with_value("canonical DEJMPS order requires lambda_00 > 1/2", s.l00));

  struct Entry {
    double value;
    int slot;  // 0 = l01, 1 = l10, 2 = l11
  };
  // Listed so that a stable descending sort resolves value ties toward the
  // key-role preference Z, then X, then Y (the last entry lands in slot 01).
  std::array<Entry, 3> e{{{s.l11, 2}, {s.l10, 1}, {s.l01, 0}}};
  std::stable_sort(e.begin(), e.end(),
                   [](const Entry& a, const Entry& b) { return a.value > b.value; });

  CanonicalOrder out;
  out.state = {s.l00, e[2].value, e[0].value, e[1].value};
  out.source = {e[2].slot, e[0].slot, e[1].slot};
  out.key_role = out.source[0] == 0   ? Basis::Z
                 : out.source[0] == 1 ? Basis::X
                                      : Basis::Y;
  return out;
}

double singlet_fidelity(const BellDiagonal& s) { return validate_state(s).l00; }

double entanglement_of_formation(const BellDiagonal& s0) {
  const BellDiagonal s = validate_state(s0);
  if (!(s.l00 > 0.5))
    fail(with_value("entanglement of formation requires lambda_00 > 1/2", s.l00));
  const double arg = 0.5 + std::sqrt(s.l00 * (1.0 - s.l00));
  const double p = std::clamp(arg, 0.0, 1.0);
  const auto plog2 = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log2(x); };
  return plog2(p) + plog2(1.0 - p);
}

Basis highest_qber_basis(const QberTriple& q) {
  validate_qbers(q);
  Basis best = Basis::Z;
  double val = q.qz;
  if (q.qx > val) {
    best = Basis::X;
    val = q.qx;
  }
  if (q.qy > val) best = Basis::Y;
  return best;
}

}  // namespace qkd
