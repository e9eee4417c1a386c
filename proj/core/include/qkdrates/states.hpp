#pragma once

#include <array>

namespace qkd {

/// Measurement bases. The enumeration order Z < X < Y is the fixed
/// tie-breaking order used everywhere a "best" or "highest" basis is picked.
enum class Basis : int { Z = 0, X = 1, Y = 2 };

constexpr const char* to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  return "?";
}

/// Quantum bit error rates in the three bases. Realizable by a two-qubit
/// state iff |qx - qz| <= qy <= qx + qz and qx + qy + qz <= 2.
struct QberTriple {
  double qx = 0.0;
  double qy = 0.0;
  double qz = 0.0;
};

/// Coefficients of a Bell-diagonal two-qubit state, rho = sum l_ij Phi_ij.
/// The first index is the bit-flip (amplitude) bit, the second the phase bit.
/// Valid when all coefficients are nonnegative and sum to 1.
struct BellDiagonal {
  double l00 = 1.0;
  double l01 = 0.0;
  double l10 = 0.0;
  double l11 = 0.0;
};

/// Coefficients within this distance of the valid range are clamped instead
/// of rejected; scans routinely produce boundary states with rounding dust.
inline constexpr double kCoeffTol = 1e-12;

/// True iff the triple corresponds to a positive-semidefinite state
/// (within kCoeffTol slack on each inequality).
bool is_realizable(const QberTriple& q) noexcept;

/// Throws std::domain_error naming the violated inequality.
void validate_qbers(const QberTriple& q);

/// Clamps coefficients within kCoeffTol of [0, 1]; throws std::domain_error
/// for larger violations or if the sum deviates from 1 by more than kCoeffTol.
BellDiagonal validate_state(const BellDiagonal& s);

/// Bell coefficients of the state with the given QBERs.
BellDiagonal lambdas_from_qbers(const QberTriple& q);

/// QBERs of a Bell-diagonal state: (l01+l11, l01+l10, l10+l11).
QberTriple qbers_from_lambdas(const BellDiagonal& s);

/// A Bell-diagonal state is entangled iff its largest coefficient exceeds 1/2.
bool is_entangled(const BellDiagonal& s);

/// Coefficients of the rotated state whose Z-basis measurement statistics
/// equal the given basis's statistics on the input state. The output QBER
/// triple is the input's with the chosen basis moved to the Z slot.
BellDiagonal permute_for_key_basis(const BellDiagonal& s, Basis basis);

/// Result of the canonical reordering: l00 stays put, the remaining three
/// coefficients are sorted descending into slots (10, 11, 01).
struct CanonicalOrder {
  BellDiagonal state;
  /// source[k] = old slot whose coefficient now occupies new slot k,
  /// slots indexed 0 = l01, 1 = l10, 2 = l11.
  std::array<int, 3> source;
  /// Original basis whose QBER ends up in the Z slot (the highest-QBER
  /// basis; coefficient ties resolved in the order Z < X < Y).
  Basis key_role;
};

/// Requires l00 > 1/2; throws std::domain_error otherwise.
CanonicalOrder canonical_dejmps_order(const BellDiagonal& s);

/// Overlap with Phi_00, i.e. l00.
double singlet_fidelity(const BellDiagonal& s);

/// h(1/2 + sqrt(l00 (1 - l00))) in bits. Defined for l00 > 1/2 only;
/// throws std::domain_error otherwise.
double entanglement_of_formation(const BellDiagonal& s);

/// Basis with the maximal QBER; ties broken in the order Z < X < Y.
Basis highest_qber_basis(const QberTriple& q);

}  // namespace qkd
