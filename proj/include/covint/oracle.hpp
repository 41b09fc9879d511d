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

#ifndef COVINT_ORACLE_HPP
#define COVINT_ORACLE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "covint/critical_set.hpp"
#include "covint/hypergeom_exact.hpp"
#include "covint/procedures.hpp"

namespace covint::oracle {

/// Outcome of a verification suite.  passed iff no failing cases.
struct OracleVerdict {
  bool passed = true;
  double worst_discrepancy = 0.0;
  struct FailingCase {
    std::string input;
    std::string expected;
    std::string got;
  };
  std::vector<FailingCase> failing_cases;  // capped at `kept_failures_cap`
  std::size_t total_failures = 0;

  static constexpr std::size_t kept_failures_cap = 100;
  void record_failure(std::string input, std::string expected,
                      std::string got);
};

/// Coverage evaluated the brute-force way: every k of the support is tested
/// against L(k) <> theta <> U(k) directly (no binary search, no contiguity
/// assumption), so a bug in k_interval_for cannot hide in both paths.
double coverage_direct(const DistributionSpec& spec,
                       const IntervalProcedure& proc, double theta,
                       BoundsMode mode);

struct GridMin {
  double theta = 0.0;
  double value = 1.0;
};

/// Minimum of coverage_direct over the uniform grid of n_grid points on
/// [a, b] augmented with all critical points and critical points
/// +- 1e-9 (b - a), clipped to [a, b].
GridMin grid_min(const DistributionSpec& spec, const IntervalProcedure& proc,
                 double a, double b, BoundsMode mode, long long n_grid);

struct HypergeomScan {
  long long m_star = 0;
  double value = 1.0;
  bool exact_path = false;
  exact::Rational exact_value;  // only set on the exact path
};

/// Minimum of P{L(K) < M < U(K) | M} over every integer M in [a, b]; exact
/// rational evaluation whenever N <= 300.  Events are re-derived per k.
HypergeomScan exhaustive_min_hypergeom(const DistributionSpec& spec,
                                       const IntervalProcedure& proc,
                                       long long a, long long b);

/// Same exact evaluation restricted to a given list of M values (used to
/// compare a reduction's candidate set against the exhaustive scan without
/// leaving exact arithmetic).  Requires a non-empty list and N <= 300.
HypergeomScan exact_min_over(const DistributionSpec& spec,
                             const IntervalProcedure& proc,
                             const std::vector<long long>& ms);

/// True iff some split makes the sequence nondecreasing (within tol) before
/// it and nonincreasing (within tol) after it.
bool check_unimodal_between(const std::vector<double>& values, double tol);

enum class TWeightFault { None, SecondArgOffByOne };

/// Families as exercised by the randomized suites; Geometric is the
/// negative binomial pinned at r = 1.
enum class CaseKind { Binomial, Poisson, NegBinomial, Geometric,
                      Hypergeometric };

struct RandomCase {
  DistributionSpec spec;
  IntervalProcedure proc;
  double a = 0.0;
  double b = 0.0;
};

/// Deterministic seeded case for verification suites: a random monotone
/// procedure and a parameter range.  Truncated families (Poisson, negative
/// binomial) are tabulated to k = 60 with ranges chosen so the tails
/// certify.  size_hint bounds the binomial n (default 30) or fixes the
/// hypergeometric N (default 25).
RandomCase random_coverage_case(CaseKind kind, std::uint64_t seed,
                                long long size_hint = 0);

/// Exhaustive exact-arithmetic verification of the hypergeometric
/// identities and inequalities underpinning the integer-parameter theory:
///  (a) cdf decrement equals T(k, M, N, n),
///  (b) interval-probability difference identity,
///  (c) both floor bounds (skipped for n = 1, which the bounds' divisions
///      by n - 1 do not cover),
///  (d) T monotone in r around floor(nM/(N+1)) and in M around
///      1 + floor(Nr/(n-1)) (the M part skipped for n = 1),
///  (e) interval probabilities unimodal in M,
///  (f) both shift inequalities for g, h in [-1, n+1].
/// Requires 0 < n <= N <= 300.  `fault` perturbs the T computation so tests
/// can prove the suite catches wrong identities.
OracleVerdict check_hypergeom_identities(long long population, long long draws,
                               TWeightFault fault = TWeightFault::None);

}  // namespace covint::oracle

#endif  // COVINT_ORACLE_HPP
