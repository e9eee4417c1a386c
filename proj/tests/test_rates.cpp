#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qkdrates/distill.hpp"
#include "qkdrates/rates.hpp"
#include "test_support.hpp"

using namespace qkd;

namespace {

constexpr double kH01 = 0.4689955935892812;      // h(0.1)
constexpr double kBb84At01 = 0.06200881282143755;  // 1 - 2 h(0.1)

double family_rate(double qy) {
  return rate_six_state(lambdas_from_qbers({0.1, qy, 0.1}), {Basis::Z, 1, 1.0})
      .rate;
}

}  // namespace

TEST_CASE("binary_entropy values and domain") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.1) == doctest::Approx(kH01).epsilon(1e-12));
  CHECK(binary_entropy(1.0 + 5e-13) == 0.0);  // tolerance slack
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
}

TEST_CASE("entropy4 values") {
  CHECK(entropy4({1, 0, 0, 0}) == 0.0);
  CHECK(entropy4({0.25, 0.25, 0.25, 0.25}) == 2.0);
  CHECK(entropy4({0.81, 0.09, 0.09, 0.01}) ==
        doctest::Approx(0.9379911871785624).epsilon(1e-12));
}

TEST_CASE("one-way six-state rate") {
  CHECK(rate_six_state({1, 0, 0, 0}, {Basis::Z, 1, 1.0}).rate == 1.0);

  const double r = rate_six_state({0.8, 0.1, 0.1, 0}, {Basis::Z, 1, 1.0}).rate;
  CHECK(r == doctest::Approx(0.07807190511263773).epsilon(1e-12));

  // At qy = qy*(0.1, 0.1) the six-state rate meets the BB84 closed form,
  // in every basis.
  const BellDiagonal s = lambdas_from_qbers({0.1, 0.18, 0.1});
  for (Basis b : {Basis::Z, Basis::X, Basis::Y})
    CHECK(rate_six_state(s, {b, 1, 1.0}).rate ==
          doctest::Approx(kBb84At01).epsilon(1e-10));

  CHECK_THROWS_AS(rate_six_state(s, {Basis::Z, 2, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(rate_six_state(s, {Basis::Z, 1, 0.9}), std::invalid_argument);
}

TEST_CASE("six-state rate is basis invariant at f = 1") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const BellDiagonal s = testsupport::random_state(4242, k);
    const double rz = rate_six_state(s, {Basis::Z, 1, 1.0}).rate;
    const double rx = rate_six_state(s, {Basis::X, 1, 1.0}).rate;
    const double ry = rate_six_state(s, {Basis::Y, 1, 1.0}).rate;
    CHECK(std::abs(rx - rz) <= 1e-12);
    CHECK(std::abs(ry - rz) <= 1e-12);
  }
}

TEST_CASE("inefficient reconciliation favors the lowest-QBER basis") {
  const BellDiagonal s = lambdas_from_qbers({0.05, 0.12, 0.1});
  // Q_X is lowest, so the X basis must win at f = 1.2.
  const double rz = rate_six_state(s, {Basis::Z, 1, 1.2}).rate;
  const double rx = rate_six_state(s, {Basis::X, 1, 1.2}).rate;
  const double ry = rate_six_state(s, {Basis::Y, 1, 1.2}).rate;
  CHECK(rx > rz);
  CHECK(rx > ry);
  // and the explicit decomposition holds
  const double expect = 1.0 - 1.2 * binary_entropy(0.05) -
                        (entropy4(s) - binary_entropy(0.05));
  CHECK(rx == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("BB84 closed form") {
  CHECK(rate_bb84(0, 0, {Basis::Z, 1, 1.0}).rate == 1.0);
  CHECK(rate_bb84(0.1, 0.1, {Basis::Z, 1, 1.0}).rate ==
        doctest::Approx(kBb84At01).epsilon(1e-12));
  CHECK_THROWS_AS(rate_bb84(0.1, 0.1, {Basis::Y, 1, 1.0}),
                  std::invalid_argument);
  // f > 1 penalizes the key basis only
  const double rf = rate_bb84(0.05, 0.1, {Basis::Z, 1, 1.2}).rate;
  CHECK(rf == doctest::Approx(1.0 - 1.2 * binary_entropy(0.1) -
                              binary_entropy(0.05))
                  .epsilon(1e-12));
}

TEST_CASE("BB84 threshold sits at 11% QBER") {
  double lo = 0.05, hi = 0.2;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rate_bb84(mid, mid, {Basis::Z, 1, 1.0}).rate > 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(0.110).epsilon(1e-2));
  CHECK(std::abs(0.5 * (lo + hi) - 0.11002786443835956) < 1e-9);
}

TEST_CASE("BB84 closed form equals the explicit minimum over qy") {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const double qx = uniform01(555, 2 * k);
    const double qz = uniform01(555, 2 * k + 1);
    const auto [lo, hi] = qy_range(qx, qz);
    const auto objective = [&](double qy) {
      return rate_six_state(lambdas_from_qbers({qx, qy, qz}), {Basis::Z, 1, 1.0})
          .rate;
    };
    const Minimum m = minimize_over_qy(objective, lo, hi, 501);
    const double closed = rate_bb84(qx, qz, {Basis::Z, 1, 1.0}).rate;
    CHECK(std::abs(m.value - closed) <= 1e-9);
  }
}

TEST_CASE("qy_star formula and its role as the minimizer") {
  CHECK(qy_star(0.1, 0.1) == doctest::Approx(0.18).epsilon(1e-15));
  CHECK(qy_star(0.0, 0.3) == 0.3);
  CHECK(qy_star(0.5, 0.5) == 0.5);
  for (std::uint64_t k = 0; k < 50; ++k) {
    const double qx = 0.5 * uniform01(556, 2 * k);
    const double qz = 0.5 * uniform01(556, 2 * k + 1);
    const auto [lo, hi] = qy_range(qx, qz);
    const auto objective = [&](double qy) {
      return rate_six_state(lambdas_from_qbers({qx, qy, qz}), {Basis::Z, 1, 1.0})
          .rate;
    };
    const Minimum m = minimize_over_qy(objective, lo, hi);
    CHECK(std::abs(m.arg - qy_star(qx, qz)) <= 1e-6);
  }
}

TEST_CASE("rate is not monotone in qy: one interior minimum at qy*") {
  // strictly decreasing before 0.18, strictly increasing after
  for (int i = 1; i <= 180; ++i)
    CHECK(family_rate(i * 0.001) < family_rate((i - 1) * 0.001));
  for (int i = 181; i <= 200; ++i)
    CHECK(family_rate(i * 0.001) > family_rate((i - 1) * 0.001));

  // central finite difference changes sign exactly once, at 0.18 +- 1e-3
  const double h = 1e-5;
  double prev = family_rate(0.001 + h) - family_rate(0.001 - h);
  int changes = 0;
  double where = -1.0;
  for (int i = 2; i < 200; ++i) {
    const double x = i * 0.001;
    const double d = family_rate(x + h) - family_rate(x - h);
    if ((d > 0) != (prev > 0)) {
      ++changes;
      where = x;
    }
    prev = d;
  }
  CHECK(changes == 1);
  CHECK(std::abs(where - 0.18) <= 1e-3);
}

TEST_CASE("higher QBERs do not imply a lower rate") {
  const double r1 = family_rate(0.2);
  const double r2 =
      rate_six_state(lambdas_from_qbers({0.098, 0.18, 0.098}), {Basis::Z, 1, 1.0})
          .rate;
  CHECK(r1 == doctest::Approx(0.07807190511263773).epsilon(1e-12));
  CHECK(r2 == doctest::Approx(0.07500203743161749).epsilon(1e-12));
  CHECK(r1 > r2);
}

TEST_CASE("AD six-state rate: fixed points and the block prefactor") {
  const RateResult r = ad_rate_six_state({1, 0, 0, 0}, {Basis::Z, 2, 1.0});
  CHECK(r.rate == 0.5);
  CHECK(r.p_succ == 1.0);
  REQUIRE(r.post_ad_state.has_value());
  CHECK(r.post_ad_state->l00 == 1.0);
}

TEST_CASE("block 1 AD path equals the one-way path exactly") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const BellDiagonal s = testsupport::random_state(4343, k);
    for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
      const double one = rate_six_state(s, {b, 1, 1.3}).rate;
      const double ad = ad_rate_six_state(s, {b, 1, 1.3}).rate;
      CHECK(one == ad);
    }
  }
}

TEST_CASE("Y basis overtakes Z along the qx = qz = 0.1 family") {
  const BellDiagonal s = lambdas_from_qbers({0.1, 0.15, 0.1});
  const double ry = ad_rate_six_state(s, {Basis::Y, 2, 1.0}).rate;
  const double rz = ad_rate_six_state(s, {Basis::Z, 2, 1.0}).rate;
  CHECK(ry == doctest::Approx(0.174382).epsilon(1e-4));
  CHECK(rz == doctest::Approx(0.116488).epsilon(1e-4));
  CHECK(ry > rz);
  CHECK(rz > 0.0);
}

TEST_CASE("only the Z basis keeps the (0.39, 0.39, 0.01) state alive") {
  const BellDiagonal s = lambdas_from_qbers({0.39, 0.39, 0.01});
  const double rz = ad_rate_six_state(s, {Basis::Z, 2, 1.0}).rate;
  const double rx = ad_rate_six_state(s, {Basis::X, 2, 1.0}).rate;
  const double ry = ad_rate_six_state(s, {Basis::Y, 2, 1.0}).rate;
  CHECK(std::abs(rz - 0.00012733143825988423) < 1e-12);
  CHECK(std::abs(rx - -0.0009016318473116919) < 1e-12);
  CHECK(std::abs(ry - -0.0009016318473116919) < 1e-12);
  CHECK(rz > 0.0);
  CHECK(rx <= 0.0);
  CHECK(ry <= 0.0);
}

TEST_CASE("AD acceptance probability decreases with the key-basis QBER") {
  double prev = 2.0;
  for (int i = 0; i <= 100; ++i) {
    const double q = 0.5 * i / 100.0;
    const double p =
        ad_rate_six_state(lambdas_from_qbers({0.5, 0.5, q}), {Basis::Z, 2, 1.0})
            .p_succ;
    if (i > 0) CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("BB84 with AD: degenerate interval and basis ordering") {
  const RateResult r0 = ad_rate_bb84(0, 0, {Basis::Z, 2, 1.0});
  CHECK(r0.rate == 0.5);
  REQUIRE(r0.worst_qy.has_value());
  CHECK(*r0.worst_qy == 0.0);

  const RateResult rz = ad_rate_bb84(0.05, 0.15, {Basis::Z, 2, 1.0});
  const RateResult rx = ad_rate_bb84(0.05, 0.15, {Basis::X, 2, 1.0});
  CHECK(rz.rate == doctest::Approx(0.11832778629696465).epsilon(1e-6));
  CHECK(rx.rate == doctest::Approx(0.06302756818688683).epsilon(1e-6));
  CHECK(rz.rate >= rx.rate);  // Z has the higher QBER here
}

TEST_CASE("BB84 with AD at block 1 matches the closed form") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const double qx = uniform01(557, 2 * k);
    const double qz = uniform01(557, 2 * k + 1);
    const double closed = rate_bb84(qx, qz, {Basis::Z, 1, 1.0}).rate;
    const double numeric = ad_rate_bb84(qx, qz, {Basis::Z, 1, 1.0}, 501).rate;
    CHECK(std::abs(closed - numeric) <= 1e-9);
  }
}

TEST_CASE("minimize_over_qy against a brute-force grid") {
  const auto objective = [](double qy) {
    return ad_rate_six_state(lambdas_from_qbers({0.1, qy, 0.1}),
                             {Basis::Z, 2, 1.0})
        .rate;
  };
  double brute_arg = 0.0;
  double brute_val = std::numeric_limits<double>::infinity();
  const int n = 100000;
  for (int i = 0; i <= n; ++i) {
    const double x = 0.2 * i / n;
    const double v = objective(x);
    if (v < brute_val) {
      brute_val = v;
      brute_arg = x;
    }
  }
  const Minimum m = minimize_over_qy(objective, 0.0, 0.2);
  CHECK(std::abs(m.arg - brute_arg) <= 3e-6);
  // the grid itself is only accurate to ~(spacing)^2 * curvature in value
  CHECK(std::abs(m.value - brute_val) <= 1e-6);
  CHECK(m.value <= brute_val + 1e-15);
}

TEST_CASE("minimize_over_qy: family minimum, constants, degenerate interval") {
  const Minimum m = minimize_over_qy([](double qy) { return family_rate(qy); },
                                     0.0, 0.2);
  CHECK(std::abs(m.arg - 0.18) <= 1e-4);
  CHECK(std::abs(m.value - kBb84At01) <= 1e-10);

  const Minimum c = minimize_over_qy([](double) { return 3.5; }, 0.0, 1.0);
  CHECK(c.value == 3.5);

  const Minimum d = minimize_over_qy([](double x) { return x; }, 0.25, 0.25);
  CHECK(d.arg == 0.25);
  CHECK(d.value == 0.25);

  CHECK_THROWS_AS(minimize_over_qy([](double x) { return x; }, 1.0, 0.0),
                  std::invalid_argument);
}
