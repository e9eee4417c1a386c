#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkdrates/rates.hpp"

namespace qkd {

struct AnchorResult {
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct VerifyOptions {
  double region_step = 0.005;
  std::uint64_t mc_blocks = 1'000'000;
  std::uint64_t seed = 42;
  int grid_points = kDefaultGridPoints;
};

/// Runs every built-in anchor (closed-form values, qualitative curve and
/// region properties, Monte-Carlo agreement) and reports one row each.
std::vector<AnchorResult> run_verification(const VerifyOptions& opts);

std::string verify_csv_header();
std::string to_csv(const AnchorResult& r);

}  // namespace qkd
