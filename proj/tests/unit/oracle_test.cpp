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

#include <doctest.h>

#include "covint/coverage_engine.hpp"
#include "covint/errors.hpp"
#include "covint/oracle.hpp"

using namespace covint;

TEST_CASE("binom with the zero convention") {
  CHECK(exact::binom(10, 3) == 120);
  CHECK(exact::binom(10, 0) == 1);
  CHECK(exact::binom(10, -1) == 0);
  CHECK(exact::binom(10, 11) == 0);
  CHECK(exact::binom(300, 150) ==
        exact::binom(299, 149) + exact::binom(299, 150));
}

TEST_CASE("check_unimodal_between") {
  CHECK(oracle::check_unimodal_between({0.0, 1.0, 0.5}, 0.0));
  CHECK_FALSE(oracle::check_unimodal_between({0.0, 1.0, 0.0, 1.0}, 0.0));
  CHECK(oracle::check_unimodal_between({1.0, 1.0, 1.0}, 0.0));
  CHECK(oracle::check_unimodal_between({0.0, 1.0}, 0.0));
  CHECK(oracle::check_unimodal_between({1.0, 0.0}, 0.0));
  CHECK(oracle::check_unimodal_between({0.0, 0.5, 1.0}, 0.0));
  // tolerance forgives wiggles at its scale
  CHECK(oracle::check_unimodal_between({0.0, 1.0, 1.0 - 1e-13, 1.0}, 1e-12));
  CHECK_THROWS_AS(oracle::check_unimodal_between({1.0}, 0.0),
                  ValidationError);
}

TEST_CASE("check_hypergeom_identities passes and catches injected faults") {
  const auto small = oracle::check_hypergeom_identities(4, 2);
  CHECK(small.passed);
  CHECK(small.worst_discrepancy == 0.0);
  CHECK(small.failing_cases.empty());

  const auto mid = oracle::check_hypergeom_identities(20, 6);
  CHECK(mid.passed);
  CHECK(mid.total_failures == 0);

  const auto n1 = oracle::check_hypergeom_identities(7, 1);  // floor lemmas skipped
  CHECK(n1.passed);

  const auto fault = oracle::check_hypergeom_identities(
      20, 6, oracle::TWeightFault::SecondArgOffByOne);
  CHECK_FALSE(fault.passed);
  CHECK(fault.total_failures > 0);
  CHECK(!fault.failing_cases.empty());
  CHECK(fault.worst_discrepancy > 0.0);

  CHECK_THROWS_AS(oracle::check_hypergeom_identities(301, 4), ValidationError);
  CHECK_THROWS_AS(oracle::check_hypergeom_identities(10, 0), ValidationError);
}

TEST_CASE("coverage_direct agrees with the engine evaluation") {
  for (std::uint64_t seed = 400; seed < 412; ++seed) {
    for (auto kind : {oracle::CaseKind::Binomial, oracle::CaseKind::Poisson,
                      oracle::CaseKind::Geometric}) {
      const auto rc = oracle::random_coverage_case(kind, seed);
      for (double f : {0.0, 0.21, 0.5, 0.83, 1.0}) {
        const double theta = rc.a + (rc.b - rc.a) * f;
        for (auto mode : {BoundsMode::OpenOpen, BoundsMode::ClosedClosed,
                          BoundsMode::ClosedOpen, BoundsMode::OpenClosed}) {
          const double direct = oracle::coverage_direct(rc.spec, rc.proc,
                                                        theta, mode);
          const double engine = coverage_at(rc.spec, rc.proc, theta, mode);
          CHECK(std::abs(direct - engine) <= 1e-13);
        }
      }
    }
  }
}

TEST_CASE("coverage_direct handles nonincreasing truncated tails") {
  const auto spec = DistributionSpec::neg_binomial(2.0);
  const auto proc = IntervalProcedure::truncated_table(
      {0.9, 0.7, 0.5}, {0.95, 0.8, 0.6}, Direction::NonIncreasing, 0.1, 0.15);
  for (double theta : {0.65, 0.75, 0.9}) {
    for (auto mode : {BoundsMode::OpenOpen, BoundsMode::ClosedClosed}) {
      const double direct = oracle::coverage_direct(spec, proc, theta, mode);
      const double engine = coverage_at(spec, proc, theta, mode);
      CHECK(std::abs(direct - engine) <= 1e-13);
    }
  }
  CHECK_THROWS_AS(
      oracle::coverage_direct(spec, proc, 0.55, BoundsMode::ClosedClosed),
      CertificationError);
}

TEST_CASE("grid_min finds the dip the reduction reports") {
  const auto b1 = DistributionSpec::binomial(1);
  const auto proc = IntervalProcedure::from_table({0.0, 0.5}, {0.5, 1.0},
                                                  Direction::NonDecreasing);
  const auto gm = oracle::grid_min(b1, proc, 0.1, 0.9, BoundsMode::OpenOpen,
                                   2001);
  CHECK(gm.value == 0.0);
  CHECK(gm.theta == 0.5);

  const auto trivial = oracle::grid_min(
      b1, IntervalProcedure::from_table({0.0, 0.0}, {1.0, 1.0},
                                        Direction::NonDecreasing),
      0.1, 0.9, BoundsMode::OpenOpen, 101);
  CHECK(trivial.value == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(oracle::grid_min(b1, proc, 0.1, 0.9, BoundsMode::OpenOpen,
                                   1),
                  ValidationError);
}

TEST_CASE("exhaustive hypergeometric scan") {
  const auto spec = DistributionSpec::hypergeometric(10, 4);
  const auto full = IntervalProcedure::from_table(
      {-1, -1, -1, -1, -1}, {11, 11, 11, 11, 11}, Direction::NonDecreasing);
  const auto scan = oracle::exhaustive_min_hypergeom(spec, full, 0, 10);
  CHECK(scan.exact_path);
  CHECK(scan.value == 1.0);
  CHECK(scan.exact_value == 1);

  for (std::uint64_t seed = 900; seed < 910; ++seed) {
    const auto rc = oracle::random_coverage_case(
        oracle::CaseKind::Hypergeometric, seed, /*size_hint=*/60);
    const long long a = static_cast<long long>(rc.a);
    const long long b = static_cast<long long>(rc.b);
    const auto ex = oracle::exhaustive_min_hypergeom(rc.spec, rc.proc, a, b);
    const auto report = min_hypergeom_coverage(rc.spec, rc.proc, a, b);
    std::vector<long long> ms;
    for (const auto& e : report.evaluations)
      ms.push_back(static_cast<long long>(e.point.value));
    const auto reduced = oracle::exact_min_over(rc.spec, rc.proc, ms);
    CHECK(reduced.exact_value == ex.exact_value);
    CHECK(std::abs(report.infimum - ex.value) <= 1e-12);
  }
}

TEST_CASE("random cases are valid and reproducible") {
  for (auto kind : {oracle::CaseKind::Binomial, oracle::CaseKind::Poisson,
                    oracle::CaseKind::NegBinomial, oracle::CaseKind::Geometric,
                    oracle::CaseKind::Hypergeometric}) {
    const auto a = oracle::random_coverage_case(kind, 1234);
    const auto b = oracle::random_coverage_case(kind, 1234);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.a < a.b);
    CHECK(a.proc.table_k_max() == b.proc.table_k_max());
    for (long long k = 0; k <= a.proc.table_k_max(); ++k) {
      CHECK(a.proc.lower(k) == b.proc.lower(k));
      CHECK(a.proc.upper(k) == b.proc.upper(k));
    }
    if (kind == oracle::CaseKind::Geometric) CHECK(a.spec.r == 1.0);
  }
}
