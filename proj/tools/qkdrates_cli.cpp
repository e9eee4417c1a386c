// Command line front end: single-point rate queries, family sweeps, region
// scans, distillation queries, Monte-Carlo validation and the anchor table.
// All outputs are CSV. Exit codes: 0 ok, 1 usage, 2 invalid physics,
// 3 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "qkdrates/csv.hpp"
#include "qkdrates/distill.hpp"
#include "qkdrates/mc.hpp"
#include "qkdrates/scan.hpp"
#include "qkdrates/verify.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

qkd::Basis parse_basis(const std::string& s) {
  if (s == "X") return qkd::Basis::X;
  if (s == "Y") return qkd::Basis::Y;
  if (s == "Z") return qkd::Basis::Z;
  throw UsageError("unknown basis: " + s);
}

struct CommonOpts {
  std::string out;
  int block = 1;
  double f = 1.0;
  int grid_points = qkd::kDefaultGridPoints;

  void check() const {
    if (block < 1) throw UsageError("--block must be >= 1");
    if (f < 1.0) throw UsageError("--f must be >= 1");
    if (grid_points < 2) throw UsageError("--grid-points must be >= 2");
  }
};

void add_common(CLI::App* cmd, CommonOpts* c, bool with_block = true) {
  cmd->add_option("--out", c->out, "Write CSV to FILE instead of stdout");
  if (with_block)
    cmd->add_option("--block", c->block,
                    "Advantage-distillation block size (1 = none)");
  cmd->add_option("--f", c->f, "Reconciliation inefficiency factor (>= 1)");
  cmd->add_option("--grid-points", c->grid_points,
                  "Grid density of the worst-case Q_Y minimizer");
}

struct RateOpts {
  CommonOpts common;
  double qx = 0, qy = 0, qz = 0;
  bool qy_set = false;
  std::string protocol;
  std::string basis = "best";
};

int cmd_rate(const RateOpts& o) {
  o.common.check();
  Output out(o.common.out);

  qkd::ScanSettings st;
  st.block = o.common.block;
  st.f = o.common.f;
  st.grid_points = o.common.grid_points;
  st.protocol =
      o.protocol == "bb84" ? qkd::Protocol::Bb84 : qkd::Protocol::SixState;
  if (o.basis != "best") {
    const qkd::Basis b = parse_basis(o.basis);
    if (st.protocol == qkd::Protocol::Bb84 && b == qkd::Basis::Y)
      throw UsageError("BB84 has no Y basis; use X, Z or best");
    st.forced_basis = b;
  }

  qkd::ScanRecord rec;
  if (st.protocol == qkd::Protocol::SixState) {
    if (!o.qy_set) throw UsageError("--qy is required for six-state");
    qkd::validate_qbers({o.qx, o.qy, o.qz});
    rec = qkd::evaluate_point({o.qx, o.qy, o.qz}, st);
  } else if (o.qy_set) {
    qkd::validate_qbers({o.qx, o.qy, o.qz});
    rec = qkd::evaluate_bb84_point({o.qx, o.qy, o.qz}, st);
  } else {
    qkd::validate_qbers({o.qx, qkd::qy_range(o.qx, o.qz).first, o.qz});
    rec = qkd::evaluate_region_point(o.qx, o.qz, st);
  }
  out.os() << qkd::scan_csv_header() << '\n' << qkd::to_csv(rec) << '\n';
  return 0;
}

struct Scan1dOpts {
  CommonOpts common;
  double qx = 0, qz = 0;
  double qy_min = 0, qy_max = 0, qy_step = 0;
  std::string protocol;
};

int cmd_scan1d(const Scan1dOpts& o) {
  o.common.check();
  if (!(o.qy_step > 0.0)) throw UsageError("--qy-step must be > 0");
  if (o.qy_max < o.qy_min - 1e-12) throw UsageError("empty --qy range");
  Output out(o.common.out);

  qkd::ScanSettings st;
  st.block = o.common.block;
  st.f = o.common.f;
  st.grid_points = o.common.grid_points;
  st.protocol =
      o.protocol == "bb84" ? qkd::Protocol::Bb84 : qkd::Protocol::SixState;
  qkd::validate_qbers({o.qx, qkd::qy_range(o.qx, o.qz).first, o.qz});

  const auto rows =
      qkd::scan1d(o.qx, o.qz, o.qy_min, o.qy_max, o.qy_step, st);
  out.os() << qkd::scan_csv_header() << '\n';
  for (const auto& r : rows) out.os() << qkd::to_csv(r) << '\n';
  return 0;
}

struct ScanRegionOpts {
  CommonOpts common;
  double lo = 0.005, hi = 0.495, step = 0.005;
  std::string protocol;
  std::string qy_rule;
  double qy = 0;
  bool qy_set = false;
};

int cmd_scan_region(const ScanRegionOpts& o) {
  o.common.check();
  if (!(o.step > 0.0)) throw UsageError("--step must be > 0");
  if (o.hi < o.lo - 1e-12) throw UsageError("empty grid range");
  Output out(o.common.out);

  qkd::ScanSettings st;
  st.block = o.common.block;
  st.f = o.common.f;
  st.grid_points = o.common.grid_points;
  if (o.protocol == "bb84") {
    st.protocol = qkd::Protocol::Bb84;
    if (!o.qy_rule.empty())
      throw UsageError("--qy-rule applies to six-state only");
  } else {
    st.protocol = qkd::Protocol::SixState;
    if (o.qy_rule == "fixed") {
      if (!o.qy_set) throw UsageError("--qy is required with --qy-rule fixed");
      st.qy_rule = qkd::QyRule::Fixed;
      st.qy_fixed = o.qy;
    } else if (o.qy_rule == "rank3") {
      st.qy_rule = qkd::QyRule::Rank3;
    } else if (o.qy_rule == "worst") {
      st.qy_rule = qkd::QyRule::WorstCase;
    } else if (o.qy_rule.empty()) {
      throw UsageError(
          "six-state region scans need an explicit --qy-rule "
          "(fixed | rank3 | worst)");
    } else {
      throw UsageError("unknown --qy-rule: " + o.qy_rule);
    }
  }

  const qkd::RegionScan scan = qkd::scan_region(o.lo, o.hi, o.step, st);
  out.os() << qkd::scan_csv_header() << '\n';
  for (const auto& r : scan.rows) out.os() << qkd::to_csv(r) << '\n';
  out.os() << qkd::to_csv(scan.summary) << '\n';
  return 0;
}

struct DistillOpts {
  CommonOpts common;
  double qx = 0, qy = 0, qz = 0;
  bool use_dejmps = false;
};

int cmd_distill(const DistillOpts& o) {
  o.common.check();
  if (o.use_dejmps && o.common.block != 2)
    throw UsageError("--dejmps is a two-to-one protocol; --block must be 2");
  Output out(o.common.out);

  qkd::validate_qbers({o.qx, o.qy, o.qz});
  const qkd::BellDiagonal s = qkd::lambdas_from_qbers({o.qx, o.qy, o.qz});
  const qkd::DistillOutcome d = o.use_dejmps
                                    ? qkd::dejmps(s)
                                    : qkd::ad_map_block(s, o.common.block);

  out.os() << "qx,qy,qz,protocol,b,p_succ,out_l00,out_l01,out_l10,out_l11,"
              "out_fidelity,out_defined\n";
  out.os() << qkd::csv::num(o.qx) << ',' << qkd::csv::num(o.qy) << ','
           << qkd::csv::num(o.qz) << ',' << (o.use_dejmps ? "dejmps" : "ad")
           << ',' << o.common.block << ',' << qkd::csv::num(d.p_succ) << ','
           << qkd::csv::num(d.out.l00) << ',' << qkd::csv::num(d.out.l01)
           << ',' << qkd::csv::num(d.out.l10) << ','
           << qkd::csv::num(d.out.l11) << ',' << qkd::csv::num(d.out.l00)
           << ',' << qkd::csv::flag(d.out_defined) << '\n';
  return 0;
}

struct McOpts {
  CommonOpts common;
  double q = 0;
  bool q_set = false;
  double qx = 0, qy = 0, qz = 0;
  bool triple_set = false;
  std::string basis = "Z";
  std::uint64_t blocks = 1'000'000;
  std::uint64_t seed = 42;
  bool transcript = false;
};

int cmd_mc(const McOpts& o) {
  o.common.check();
  if (o.common.block < 2) throw UsageError("--block must be >= 2 for mc");
  if (o.q_set == o.triple_set)
    throw UsageError("give either --q or the triple --qx/--qy/--qz");
  if (o.blocks < 1) throw UsageError("--blocks must be >= 1");
  Output out(o.common.out);

  qkd::BellDiagonal s;
  if (o.triple_set) {
    qkd::validate_qbers({o.qx, o.qy, o.qz});
    s = qkd::permute_for_key_basis(qkd::lambdas_from_qbers({o.qx, o.qy, o.qz}),
                                   parse_basis(o.basis));
  } else {
    if (o.q < 0.0 || o.q > 1.0) throw UsageError("--q must lie in [0, 1]");
    s = qkd::lambdas_from_qbers({0.5, 0.5, o.q});
  }

  qkd::McConfig cfg;
  cfg.q = qkd::qbers_from_lambdas(s).qz;
  cfg.blocks = o.blocks;
  cfg.b = o.common.block;
  cfg.seed = o.seed;
  cfg.transcript = o.transcript;
  const qkd::McReport rep = qkd::compare_to_closed_form(cfg, s);

  out.os() << "q,b,blocks,seed,transcript,accepted,p_succ_hat,p_succ_se,"
              "p_succ_analytic,z_p,qber_hat,qber_se,qber_analytic,z_qber,"
              "pass\n";
  out.os() << qkd::csv::num(cfg.q) << ',' << cfg.b << ',' << cfg.blocks << ','
           << cfg.seed << ',' << qkd::csv::flag(cfg.transcript) << ','
           << rep.stats.accepted << ',' << qkd::csv::num(rep.stats.p_succ_hat)
           << ',' << qkd::csv::num(rep.stats.p_succ_se) << ','
           << qkd::csv::num(rep.p_succ_analytic) << ','
           << qkd::csv::num(rep.z_p) << ',' << qkd::csv::num(rep.stats.qber_hat)
           << ',' << qkd::csv::num(rep.stats.qber_se) << ','
           << qkd::csv::num(rep.qber_analytic) << ','
           << qkd::csv::num(rep.z_qber) << ',' << qkd::csv::flag(rep.pass)
           << '\n';
  return 0;
}

struct VerifyOpts {
  std::string out;
  double step = 0.005;
  std::uint64_t blocks = 1'000'000;
  std::uint64_t seed = 42;
  int grid_points = qkd::kDefaultGridPoints;
};

int cmd_verify(const VerifyOpts& o) {
  if (!(o.step > 0.0) || o.step > 0.2)
    throw UsageError("--step must lie in (0, 0.2]");
  if (o.grid_points < 2) throw UsageError("--grid-points must be >= 2");
  Output out(o.out);

  qkd::VerifyOptions vo;
  vo.region_step = o.step;
  vo.mc_blocks = o.blocks;
  vo.seed = o.seed;
  vo.grid_points = o.grid_points;
  const auto anchors = qkd::run_verification(vo);

  out.os() << qkd::verify_csv_header() << '\n';
  bool all = true;
  for (const auto& a : anchors) {
    out.os() << qkd::to_csv(a) << '\n';
    all = all && a.pass;
  }
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Asymptotic key rates for the BB84 and six-state protocols on "
      "Bell-diagonal states, with advantage distillation and DEJMPS "
      "entanglement distillation"};
  app.require_subcommand(1);

  RateOpts rate;
  auto* c_rate = app.add_subcommand("rate", "Rate of a single QBER triple");
  c_rate->add_option("--qx", rate.qx, "QBER in the X basis")->required();
  c_rate->add_option("--qy", rate.qy, "QBER in the Y basis");
  c_rate->add_option("--qz", rate.qz, "QBER in the Z basis")->required();
  c_rate->add_option("--protocol", rate.protocol, "bb84 | six-state")
      ->required()
      ->check(CLI::IsMember({"bb84", "six-state"}));
  c_rate->add_option("--basis", rate.basis, "X | Y | Z | best")
      ->check(CLI::IsMember({"X", "Y", "Z", "best"}));
  add_common(c_rate, &rate.common);

  Scan1dOpts s1;
  auto* c_s1 = app.add_subcommand("scan1d", "Sweep Q_Y at fixed Q_X, Q_Z");
  c_s1->add_option("--qx", s1.qx)->required();
  c_s1->add_option("--qz", s1.qz)->required();
  c_s1->add_option("--qy-min", s1.qy_min)->required();
  c_s1->add_option("--qy-max", s1.qy_max)->required();
  c_s1->add_option("--qy-step", s1.qy_step)->required();
  c_s1->add_option("--protocol", s1.protocol, "bb84 | six-state")
      ->required()
      ->check(CLI::IsMember({"bb84", "six-state"}));
  add_common(c_s1, &s1.common);

  ScanRegionOpts sr;
  auto* c_sr = app.add_subcommand("scan-region", "Scan a (Q_X, Q_Z) grid");
  c_sr->add_option("--lo", sr.lo, "Grid start (default 0.005)");
  c_sr->add_option("--hi", sr.hi, "Grid end (default 0.495)");
  c_sr->add_option("--step", sr.step, "Grid step (default 0.005)");
  c_sr->add_option("--protocol", sr.protocol, "bb84 | six-state")
      ->required()
      ->check(CLI::IsMember({"bb84", "six-state"}));
  c_sr->add_option("--qy-rule", sr.qy_rule,
                   "six-state only: fixed | rank3 | worst");
  c_sr->add_option("--qy", sr.qy, "Q_Y value for --qy-rule fixed");
  add_common(c_sr, &sr.common);

  DistillOpts di;
  di.common.block = 2;
  auto* c_di = app.add_subcommand("distill", "Distillation map of a state");
  c_di->add_option("--qx", di.qx)->required();
  c_di->add_option("--qy", di.qy)->required();
  c_di->add_option("--qz", di.qz)->required();
  c_di->add_flag("--dejmps", di.use_dejmps,
                 "Canonical reordering before the two-copy map");
  c_di->add_option("--block", di.common.block, "Block size (default 2)");
  c_di->add_option("--out", di.common.out, "Write CSV to FILE");

  McOpts mc;
  mc.common.block = 2;
  auto* c_mc = app.add_subcommand("mc", "Monte-Carlo check of the AD map");
  c_mc->add_option("--q", mc.q, "Key-basis QBER");
  c_mc->add_option("--qx", mc.qx);
  c_mc->add_option("--qy", mc.qy);
  c_mc->add_option("--qz", mc.qz);
  c_mc->add_option("--basis", mc.basis,
                   "Key basis for the triple form (default Z)")
      ->check(CLI::IsMember({"X", "Y", "Z"}));
  c_mc->add_option("--block", mc.common.block, "Block size (default 2)");
  c_mc->add_option("--blocks", mc.blocks, "Number of AD blocks");
  c_mc->add_option("--seed", mc.seed, "Reproducibility seed");
  c_mc->add_flag("--transcript", mc.transcript,
                 "Simulate full transcripts instead of error patterns");
  c_mc->add_option("--out", mc.common.out, "Write CSV to FILE");

  VerifyOpts ve;
  auto* c_ve = app.add_subcommand("verify", "Run every built-in anchor");
  c_ve->add_option("--out", ve.out, "Write CSV to FILE instead of stdout");
  c_ve->add_option("--step", ve.step, "Region-scan grid step");
  c_ve->add_option("--blocks", ve.blocks, "Monte-Carlo blocks");
  c_ve->add_option("--seed", ve.seed, "Seed for randomized anchors");
  c_ve->add_option("--grid-points", ve.grid_points,
                   "Grid density of the worst-case Q_Y minimizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  rate.qy_set = c_rate->count("--qy") > 0;
  sr.qy_set = c_sr->count("--qy") > 0;
  mc.q_set = c_mc->count("--q") > 0;
  mc.triple_set = c_mc->count("--qx") > 0 || c_mc->count("--qy") > 0 ||
                  c_mc->count("--qz") > 0;
  if (mc.triple_set &&
      (c_mc->count("--qx") == 0 || c_mc->count("--qy") == 0 ||
       c_mc->count("--qz") == 0)) {
    std::cerr << "error: the triple form needs all of --qx, --qy, --qz\n";
    return 1;
  }

  try {
    if (app.got_subcommand(c_rate)) return cmd_rate(rate);
    if (app.got_subcommand(c_s1)) return cmd_scan1d(s1);
    if (app.got_subcommand(c_sr)) return cmd_scan_region(sr);
    if (app.got_subcommand(c_di)) return cmd_distill(di);
    if (app.got_subcommand(c_mc)) return cmd_mc(mc);
    if (app.got_subcommand(c_ve)) return cmd_verify(ve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid physics: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid physics: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
