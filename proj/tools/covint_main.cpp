// Copyright 2026 The covint authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covint/coverage_engine.hpp"
#include "covint/errors.hpp"
#include "covint/oracle.hpp"

namespace {

using namespace covint;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadRequest = 2;
constexpr int kExitCertification = 3;
constexpr int kExitUnwritable = 4;

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_request(const std::string& msg) {
  throw ValidationError(msg);
}

struct Request {
  std::string family;
  long long n = -1;
  long long population = -1;
  double r = -1.0;
  std::string method;
  double delta = 0.05;
  std::string table_path;
  std::string range;
  std::string bounds = "closed";
  long long points = 512;
  std::string out_path;
};

struct Analysis {
  DistributionSpec spec;
  IntervalProcedure proc;
  double a = 0.0;
  double b = 0.0;
};

void parse_range(const Request& req, Analysis* an) {
  const auto colon = req.range.find(':');
  if (req.range.empty() || colon == std::string::npos)
    bad_request("range: expected a:b, got '" + req.range + "'");
  const std::string a_s = req.range.substr(0, colon);
  const std::string b_s = req.range.substr(colon + 1);
  const bool integer_param = an->spec.family == Family::Hypergeometric;
  auto parse_one = [&](const std::string& s) -> double {
    try {
      std::size_t used = 0;
      if (integer_param) {
        const long long v = std::stoll(s, &used);
        if (used != s.size())
          bad_request("range: hypergeometric bounds must be integers, got '" +
                      s + "'");
        return static_cast<double>(v);
      }
      const double v = std::stod(s, &used);
      if (used != s.size()) bad_request("range: cannot parse '" + s + "'");
      return v;
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      bad_request("range: cannot parse '" + s + "'");
    }
  };
  an->a = parse_one(a_s);
  an->b = parse_one(b_s);
  if (an->a > an->b) bad_request("range: a must be < b (got " + req.range + ")");
  validate_param(an->spec, an->a);
  validate_param(an->spec, an->b);
}

Analysis resolve(const Request& req) {
  Analysis an;
  const bool have_table = !req.table_path.empty();
  const bool have_method = !req.method.empty();
  if (have_table == have_method)
    bad_request("exactly one procedure source: --table or --method");

  if (have_table) {
    LoadedProcedure loaded = load_procedure_table(req.table_path);
    an.spec = loaded.spec;
    an.proc = std::move(loaded.proc);
    // Flags, when given, must agree with the table header.
    if (!req.family.empty() && req.family != family_name(an.spec.family))
      bad_request("--family " + req.family + " conflicts with table family " +
                  family_name(an.spec.family));
    if (req.n >= 0 && req.n != an.spec.n_samples)
      bad_request("--n conflicts with the table header");
    if (req.population >= 0 && req.population != an.spec.population)
      bad_request("--N conflicts with the table header");
    if (req.r >= 0.0 && req.r != an.spec.r)
      bad_request("--r conflicts with the table header");
  } else {
    if (req.family.empty()) bad_request("--family is required with --method");
    if (req.method == "clopper-pearson") {
      if (req.family != "binomial")
        bad_request("clopper-pearson is a binomial method");
      if (req.n < 1) bad_request("--n is required (>= 1)");
      an.spec = DistributionSpec::binomial(req.n);
      an.proc = IntervalProcedure::clopper_pearson(req.n, req.delta);
    } else if (req.method == "garwood") {
      if (req.family != "poisson") bad_request("garwood is a poisson method");
      if (req.n < 1) bad_request("--n is required (>= 1)");
      an.spec = DistributionSpec::poisson(req.n);
      an.proc = IntervalProcedure::garwood_poisson(req.n, req.delta);
    } else {
      bad_request("unknown method '" + req.method +
                  "' (clopper-pearson, garwood)");
    }
  }
  parse_range(req, &an);
  return an;
}

void print_report_block(const std::string& mode_name,
                        const CoverageReport& report) {
  std::cout << "bounds: " << mode_name << "\n";
  std::cout << "critical_points: " << report.evaluations.size() << "\n";
  for (std::size_t i = 0; i < report.evaluations.size(); ++i) {
    const PointEvaluation& e = report.evaluations[i];
    std::cout << "point[" << i << "]: theta=" << fmt17(e.point.value)
              << " provenance=" << e.point.provenance_str()
              << " C=" << fmt17(e.c) << " C_U=" << fmt17(e.c_u)
              << " C_L=" << fmt17(e.c_l) << "\n";
  }
  std::cout << "infimum: " << fmt17(report.infimum) << "\n";
  std::cout << "attained: " << (report.attained ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    const Witness& w = report.witnesses[i];
    std::cout << "witness[" << i << "]: theta=" << fmt17(w.theta)
              << " kind=" << eval_kind_name(w.kind)
              << " value=" << fmt17(w.value) << "\n";
  }
  for (const std::string& w : report.warnings)
    std::cout << "warning: " << w << "\n";
}

CoverageReport run_mode(const Analysis& an, BoundsMode mode) {
  if (an.spec.family == Family::Hypergeometric)
    return min_hypergeom_coverage(an.spec, an.proc,
                                  static_cast<long long>(an.a),
                                  static_cast<long long>(an.b), mode);
  return mode == BoundsMode::OpenOpen
             ? min_open_coverage(an.spec, an.proc, an.a, an.b)
             : inf_closed_coverage(an.spec, an.proc, an.a, an.b);
}

int cmd_analyze(const Request& req) {
  const Analysis an = resolve(req);
  std::vector<std::pair<std::string, BoundsMode>> modes;
  if (req.bounds == "open") {
    modes.emplace_back("open", BoundsMode::OpenOpen);
  } else if (req.bounds == "closed") {
    modes.emplace_back("closed", BoundsMode::ClosedClosed);
  } else if (req.bounds == "both") {
    modes.emplace_back("open", BoundsMode::OpenOpen);
    modes.emplace_back("closed", BoundsMode::ClosedClosed);
  } else {
    bad_request("--bounds must be open, closed or both");
  }

  std::cout << "family: " << an.spec.str() << "\n";
  std::cout << "procedure: " << an.proc.summary() << "\n";
  std::cout << "direction: " << direction_name(an.proc.direction()) << "\n";
  std::cout << "range: " << fmt17(an.a) << ":" << fmt17(an.b) << "\n";
  for (const auto& [name, mode] : modes)
    print_report_block(name, run_mode(an, mode));
  return kExitOk;
}

int cmd_curve(const Request& req) {
  const Analysis an = resolve(req);
  BoundsMode mode;
  if (req.bounds == "open")
    mode = BoundsMode::OpenOpen;
  else if (req.bounds == "closed")
    mode = BoundsMode::ClosedClosed;
  else
    bad_request("--bounds must be open or closed for curve");
  if (req.points < 2) bad_request("--points must be >= 2");
  if (req.out_path.empty()) bad_request("--out is required for curve");

  const std::vector<CurvePoint> curve =
      coverage_curve(an.spec, an.proc, an.a, an.b, mode, req.points);

  std::ofstream out(req.out_path);
  if (!out) {
    std::cerr << "error: cannot write " << req.out_path << "\n";
    return kExitUnwritable;
  }
  out << "theta,coverage,breakpoint\n";
  for (const CurvePoint& p : curve)
    out << fmt17(p.theta) << "," << fmt17(p.coverage) << "," << p.breakpoint
        << "\n";
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write " << req.out_path << "\n";
    return kExitUnwritable;
  }
  return kExitOk;
}

struct VerifyStats {
  double worst_open_gap = 0.0;        // |engine - grid min|
  double worst_open_excess = 0.0;     // engine - grid min (reduction side)
  double worst_closed_excess = 0.0;   // engine - grid min
  double worst_closed_gap = 0.0;      // grid min - engine
  double worst_hg_float_gap = 0.0;    // |engine - exact|
  long long hg_exact_mismatches = 0;
  long long failures = 0;
};

void verify_case(const oracle::RandomCase& rc, bool inject_fault,
                 VerifyStats* stats) {
  const double bias = inject_fault ? 2e-9 : 0.0;
  if (rc.spec.family == Family::Hypergeometric) {
    const long long a = static_cast<long long>(rc.a);
    const long long b = static_cast<long long>(rc.b);
    const CoverageReport report =
        min_hypergeom_coverage(rc.spec, rc.proc, a, b);
    const oracle::HypergeomScan scan =
        oracle::exhaustive_min_hypergeom(rc.spec, rc.proc, a, b);
    std::vector<long long> ms;
    for (const PointEvaluation& e : report.evaluations)
      ms.push_back(static_cast<long long>(e.point.value));
    const oracle::HypergeomScan reduced =
        oracle::exact_min_over(rc.spec, rc.proc, ms);
    if (reduced.exact_value != scan.exact_value) {
      ++stats->hg_exact_mismatches;
      ++stats->failures;
    }
    const double gap = std::abs(report.infimum + bias - scan.value);
    stats->worst_hg_float_gap = std::max(stats->worst_hg_float_gap, gap);
    if (gap > 1e-12) ++stats->failures;
    return;
  }

  const CoverageReport open_report =
      min_open_coverage(rc.spec, rc.proc, rc.a, rc.b);
  const oracle::GridMin open_grid =
      oracle::grid_min(rc.spec, rc.proc, rc.a, rc.b, BoundsMode::OpenOpen, 2001);
  const double open_inf = open_report.infimum + bias;
  stats->worst_open_gap =
      std::max(stats->worst_open_gap, std::abs(open_inf - open_grid.value));
  stats->worst_open_excess =
      std::max(stats->worst_open_excess, open_inf - open_grid.value);
  if (std::abs(open_inf - open_grid.value) > 1e-10 ||
      open_inf - open_grid.value > 1e-12)
    ++stats->failures;

  const CoverageReport closed_report =
      inf_closed_coverage(rc.spec, rc.proc, rc.a, rc.b);
  const oracle::GridMin closed_grid = oracle::grid_min(
      rc.spec, rc.proc, rc.a, rc.b, BoundsMode::ClosedClosed, 2001);
  const double closed_inf = closed_report.infimum + bias;
  stats->worst_closed_excess =
      std::max(stats->worst_closed_excess, closed_inf - closed_grid.value);
  stats->worst_closed_gap =
      std::max(stats->worst_closed_gap, closed_grid.value - closed_inf);
  if (closed_inf - closed_grid.value > 1e-12 ||
      closed_grid.value - closed_inf > 1e-7)
    ++stats->failures;
}

int cmd_verify(long long seed, long long cases, bool inject_fault) {
  if (cases < 1) bad_request("--cases must be >= 1");
  std::cout << "verify: seed=" << seed << " cases=" << cases << "\n";

  VerifyStats stats;
  const oracle::CaseKind kinds[] = {
      oracle::CaseKind::Binomial, oracle::CaseKind::Poisson,
      oracle::CaseKind::NegBinomial, oracle::CaseKind::Geometric,
      oracle::CaseKind::Hypergeometric};
  for (long long i = 0; i < cases; ++i) {
    const oracle::RandomCase rc = oracle::random_coverage_case(
        kinds[i % 5],
        static_cast<std::uint64_t>(seed) * 0x9e3779b97f4a7c15ULL + i);
    verify_case(rc, inject_fault, &stats);
  }
  std::cout << "open: worst |engine - grid_min| = "
            << fmt17(stats.worst_open_gap) << "\n";
  std::cout << "open: worst engine excess over grid_min = "
            << fmt17(stats.worst_open_excess) << "\n";
  std::cout << "closed: worst engine excess over grid_min = "
            << fmt17(stats.worst_closed_excess) << "\n";
  std::cout << "closed: worst grid_min - infimum = "
            << fmt17(stats.worst_closed_gap) << "\n";
  std::cout << "hypergeometric: exact reduction mismatches = "
            << stats.hg_exact_mismatches
            << ", worst |engine - exact| = " << fmt17(stats.worst_hg_float_gap)
            << "\n";

  bool identities_ok = true;
  const std::pair<long long, long long> ladder[] = {
      {4, 2}, {10, 3}, {20, 6}, {28, 9}, {33, 11}};
  const oracle::TWeightFault fault =
      inject_fault ? oracle::TWeightFault::SecondArgOffByOne
                   : oracle::TWeightFault::None;
  for (const auto& [N, n] : ladder) {
    const oracle::OracleVerdict v = oracle::check_hypergeom_identities(N, n, fault);
    std::cout << "identity-suite: N=" << N << " n=" << n << " "
              << (v.passed ? "pass" : "FAIL") << " (discrepancy "
              << fmt17(v.worst_discrepancy) << ")\n";
    if (!v.passed) {
      identities_ok = false;
      for (std::size_t j = 0; j < v.failing_cases.size() && j < 3; ++j)
        std::cout << "identity-suite failing case: " << v.failing_cases[j].input
                  << " expected " << v.failing_cases[j].expected << " got "
                  << v.failing_cases[j].got << "\n";
    }
  }

  const bool pass = stats.failures == 0 && identities_ok;
  if (stats.failures != 0)
    std::cout << "engine-vs-oracle failures: " << stats.failures << "\n";
  std::cout << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "covint: exact worst-case coverage of random intervals for binomial, "
      "Poisson, negative-binomial and hypergeometric variables"};
  app.require_subcommand(1);

  Request req;
  long long seed = 0;
  long long cases = 100;
  bool inject_fault = false;

  auto add_common = [&req](CLI::App* sub) {
    sub->add_option("--family", req.family,
                    "binomial|poisson|negbinomial|hypergeometric");
    sub->add_option("--n", req.n, "trials / sample count / draws");
    sub->add_option("--N", req.population, "hypergeometric population size");
    sub->add_option("--r", req.r, "negative-binomial shape");
    sub->add_option("--method", req.method,
                    "built-in procedure: clopper-pearson|garwood");
    sub->add_option("--delta", req.delta, "built-in confidence 1-delta");
    sub->add_option("--table", req.table_path, "procedure table file");
    sub->add_option("--range", req.range, "parameter range a:b");
    sub->add_option("--bounds", req.bounds, "open|closed|both");
  };

  CLI::App* analyze =
      app.add_subcommand("analyze", "worst-case coverage over a range");
  add_common(analyze);

  CLI::App* curve =
      app.add_subcommand("curve", "coverage curve as CSV");
  add_common(curve);
  curve->add_option("--points", req.points, "uniform fill point count");
  curve->add_option("--out", req.out_path, "output CSV path");

  CLI::App* verify = app.add_subcommand(
      "verify", "randomized engine-vs-oracle equivalence and identity suites");
  verify->add_option("--seed", seed, "PRNG seed");
  verify->add_option("--cases", cases, "number of random cases");
  verify
      ->add_flag("--inject-fault", inject_fault,
                 "perturb the engine to prove failures are caught")
      ->group("");  // test hook; hidden from help

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadRequest;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(req);
    if (curve->parsed()) return cmd_curve(req);
    return cmd_verify(seed, cases, inject_fault);
  } catch (const CertificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCertification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadRequest;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadRequest;
  }
}
