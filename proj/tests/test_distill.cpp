#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "qkdrates/distill.hpp"
#include "qkdrates/rates.hpp"
#include "test_support.hpp"

using namespace qkd;

namespace {

double max_coeff_diff(const BellDiagonal& a, const BellDiagonal& b) {
  return std::max({std::abs(a.l00 - b.l00), std::abs(a.l01 - b.l01),
                   std::abs(a.l10 - b.l10), std::abs(a.l11 - b.l11)});
}

const BellDiagonal kCounterexample{0.605, 0.385, 0.005, 0.005};

}  // namespace

TEST_CASE("ad_map_block: identity, fixed point, frozen values") {
  for (int b : {1, 2, 5}) {
    const DistillOutcome d = ad_map_block({1, 0, 0, 0}, b);
    CHECK(d.p_succ == 1.0);
    CHECK(d.out.l00 == 1.0);
  }

  // b = 1 is the identity map, bit for bit
  const BellDiagonal s{0.605, 0.385, 0.005, 0.005};
  const DistillOutcome id = ad_map_block(s, 1);
  CHECK(id.p_succ == 1.0);
  CHECK(max_coeff_diff(id.out, s) == 0.0);

  const DistillOutcome d2 = ad_map_block(kCounterexample, 2);
  CHECK(d2.p_succ == doctest::Approx(0.9802).epsilon(1e-12));
  CHECK(d2.out.l00 == doctest::Approx(0.5246378290144869).epsilon(1e-12));
  CHECK(d2.out.l01 == doctest::Approx(0.47526015098959395).epsilon(1e-12));
  CHECK(d2.out.l10 == doctest::Approx(5.100999795960009e-05).epsilon(1e-10));
  CHECK(d2.out.l11 == doctest::Approx(5.100999795960009e-05).epsilon(1e-10));
  CHECK(std::abs(d2.out.l00 - 0.525) < 5e-4);

  const DistillOutcome d3 = ad_map_block({0.7, 0.1, 0.1, 0.1}, 3);
  CHECK(d3.p_succ == doctest::Approx(0.52).epsilon(1e-12));
  CHECK(d3.out.l00 == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(d3.out.l01 == doctest::Approx(0.2846153846153846).epsilon(1e-12));
  CHECK(d3.out.l10 == doctest::Approx(0.007692307692307695).epsilon(1e-10));
  CHECK(d3.out.l11 == doctest::Approx(0.007692307692307695).epsilon(1e-10));

  CHECK_THROWS_AS(ad_map_block(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(ad_map_block(s, -3), std::invalid_argument);
}

TEST_CASE("ad_map_block flags a vanishing acceptance probability") {
  const DistillOutcome d = ad_map_block({0.25, 0.25, 0.25, 0.25}, 60);
  CHECK_FALSE(d.out_defined);
  CHECK(d.p_succ < 1e-15);
}

TEST_CASE("post-AD state stays normalized") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const BellDiagonal s = testsupport::random_state(6001, k);
    const int b = 1 + static_cast<int>(counter_rng(6002, k) % 7);
    const DistillOutcome d = ad_map_block(s, b);
    if (!d.out_defined) continue;
    const double sum = d.out.l00 + d.out.l01 + d.out.l10 + d.out.l11;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(d.p_succ >= 0.0);
    CHECK(d.p_succ <= 1.0 + 1e-12);
  }
}

TEST_CASE("acceptance probability depends only on the Z-basis QBER") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const BellDiagonal s = testsupport::random_state(6003, k);
    const double qz = qbers_from_lambdas(s).qz;
    const double p = ad_map_block(s, 2).p_succ;
    CHECK(std::abs(p - (qz * qz + (1.0 - qz) * (1.0 - qz))) <= 1e-14);
  }
}

TEST_CASE("dejmps: frozen values and composition") {
  const DistillOutcome d0 = dejmps({1, 0, 0, 0});
  CHECK(d0.p_succ == 1.0);
  CHECK(d0.out.l00 == 1.0);

  const DistillOutcome d = dejmps(kCounterexample);
  CHECK(d.p_succ == doctest::Approx(0.5242).epsilon(1e-12));
  CHECK(d.out.l00 == doctest::Approx(0.6983021747424647).epsilon(1e-12));
  CHECK(std::abs(d.out.l00 - 0.698) < 5e-4);

  const BellDiagonal s{0.8, 0.1, 0.1, 0.0};
  const DistillOutcome via_map = ad_map_block(canonical_dejmps_order(s).state, 2);
  const DistillOutcome via_dejmps = dejmps(s);
  CHECK(via_dejmps.p_succ == via_map.p_succ);
  CHECK(max_coeff_diff(via_dejmps.out, via_map.out) == 0.0);

  CHECK_THROWS_AS(dejmps({0.5, 0.3, 0.1, 0.1}), std::domain_error);
}

TEST_CASE("DEJMPS reordering dominates every plain basis choice") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const BellDiagonal s = testsupport::random_peaked_state(6004, k);
    const double fd = dejmps(s).out.l00;
    for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
      const DistillOutcome d = ad_map_block(permute_for_key_basis(s, b), 2);
      CHECK(fd >= d.out.l00 - 1e-12);
    }
  }
}

TEST_CASE("bell_index_oracle: limits and frozen enumeration values") {
  const DistillOutcome t = bell_index_oracle({1, 0, 0, 0}, 2);
  CHECK(t.p_succ == 1.0);
  CHECK(t.out.l00 == 1.0);

  const DistillOutcome d3 = bell_index_oracle({0.7, 0.1, 0.1, 0.1}, 3);
  CHECK(d3.p_succ == doctest::Approx(0.52).epsilon(1e-12));
  CHECK(d3.out.l00 == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(d3.out.l01 == doctest::Approx(0.2846153846153846).epsilon(1e-12));

  CHECK_THROWS_AS(bell_index_oracle(kCounterexample, 0), std::invalid_argument);
  CHECK_THROWS_AS(bell_index_oracle(kCounterexample, 9), std::invalid_argument);
}

TEST_CASE("closed form vs Bell-index enumeration on random states") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const BellDiagonal s = testsupport::random_state(6005, k);
    for (int b = 1; b <= 5; ++b) {
      const DistillOutcome cf = ad_map_block(s, b);
      const DistillOutcome en = bell_index_oracle(s, b);
      CHECK(std::abs(cf.p_succ - en.p_succ) <= 1e-12);
      CHECK(max_coeff_diff(cf.out, en.out) <= 1e-12);
    }
  }
}

TEST_CASE("dense two-copy oracle: fixed points and cross-checks") {
  const DistillOutcome t = dense_two_copy_oracle({1, 0, 0, 0});
  CHECK(t.p_succ == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.out.l00 == doctest::Approx(1.0).epsilon(1e-12));

  const DistillOutcome mm = dense_two_copy_oracle({0.25, 0.25, 0.25, 0.25});
  CHECK(mm.p_succ == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max_coeff_diff(mm.out, {0.25, 0.25, 0.25, 0.25}) <= 1e-12);

  const DistillOutcome den = dense_two_copy_oracle(kCounterexample);
  const DistillOutcome en = bell_index_oracle(kCounterexample, 2);
  CHECK(std::abs(den.p_succ - en.p_succ) <= 1e-10);
  CHECK(max_coeff_diff(den.out, en.out) <= 1e-10);
}

TEST_CASE("AD/DEJMPS rate equivalence: examples, domain, inefficiency") {
  const AdDejmpsEquivalence a = check_ad_dejmps_equivalence({0.8, 0.0, 0.1, 0.1}, 1.0);
  CHECK(a.equal);

  const AdDejmpsEquivalence b = check_ad_dejmps_equivalence({1, 0, 0, 0}, 1.0);
  CHECK(b.rate_ad == 0.5);
  CHECK(b.rate_dejmps == 0.5);
  CHECK(b.equal);

  CHECK_THROWS_AS(check_ad_dejmps_equivalence({0.25, 0.25, 0.25, 0.25}, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(check_ad_dejmps_equivalence({0.45, 0.55, 0.0, 0.0}, 1.0),
                  std::domain_error);

  for (std::uint64_t k = 0; k < 50; ++k) {
    const AdDejmpsEquivalence t =
        check_ad_dejmps_equivalence(testsupport::random_peaked_state(6006, k), 1.2);
    CHECK(t.equal);
  }
}
