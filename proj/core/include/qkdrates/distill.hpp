#pragma once

#include "qkdrates/states.hpp"

namespace qkd {

/// Below this acceptance probability the post-selected state is numerically
/// meaningless and callers get out_defined = false instead of garbage.
inline constexpr double kPsuccCutoff = 1e-15;

struct DistillOutcome {
  double p_succ = 0.0;
  BellDiagonal out;         ///< normalized post-selected state
  bool out_defined = true;  ///< false iff p_succ fell below kPsuccCutoff
};

/// Closed-form state map of advantage distillation with block size b.
/// With u = l00+l01, v = l00-l01, w = l10+l11, x = l10-l11:
///   p_succ = u^b + w^b,
///   out    = ((u^b+v^b), (u^b-v^b), (w^b+x^b), (w^b-x^b)) / (2 p_succ).
/// b = 1 is the identity; b = 2 is the two-copy distillation map.
DistillOutcome ad_map_block(const BellDiagonal& s, int b);

/// DEJMPS two-to-one distillation: canonical reordering followed by the
/// b = 2 map. Requires l00 > 1/2.
DistillOutcome dejmps(const BellDiagonal& s);

/// Independent oracle for ad_map_block: enumerates all 4^b Bell-index
/// tuples, propagates the bi-local CNOTs (control copy 1, targets 2..b) by
/// the index rule "target amplitude bit += control amplitude bit, control
/// phase bit += target phase bit", and post-selects on all target amplitude
/// bits being 0. Limited to b <= 8.
DistillOutcome bell_index_oracle(const BellDiagonal& s, int b);

/// Second independent oracle for the two-copy map: explicit 16x16 two-copy
/// density operator (qubit order A1 A2 B1 B2), bi-local CNOTs with controls
/// A1/B1, projection of the targets A2/B2 onto equal Z outcomes, partial
/// trace, Bell-coefficient readback.
DistillOutcome dense_two_copy_oracle(const BellDiagonal& s);

struct AdDejmpsEquivalence {
  double rate_ad = 0.0;      ///< AD in the highest-QBER basis, block 2
  double rate_dejmps = 0.0;  ///< DEJMPS then one-way six-state in Z
  bool equal = false;        ///< |difference| < 1e-10
};

/// Compares the six-state AD rate in the highest-QBER basis against
/// (1/2) p_succ * one-way rate of the DEJMPS output; the two procedures
/// yield the same key rate. Requires an entangled state with l00 > 1/2.
AdDejmpsEquivalence check_ad_dejmps_equivalence(const BellDiagonal& s,
                                                double f = 1.0);

}  // namespace qkd
