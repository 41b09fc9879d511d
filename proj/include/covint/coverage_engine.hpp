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

#ifndef COVINT_COVERAGE_ENGINE_HPP
#define COVINT_COVERAGE_ENGINE_HPP

#include <string>
#include <vector>

#include "covint/critical_set.hpp"
#include "covint/dist_core.hpp"
#include "covint/procedures.hpp"

namespace covint {

/// Which quantity an entry refers to: the plain coverage of the analyzed
/// interval type (C), or one of the half-open one-sided values C_U / C_L.
enum class EvalKind { C, CU, CL };

std::string eval_kind_name(EvalKind k);

/// All quantities evaluated at one critical point.  `candidate_*` marks the
/// entries over which the infimum is taken for the analyzed mode.
struct PointEvaluation {
  CriticalPoint point;
  double c = 0.0;    // coverage of the analyzed interval type at the point
  double c_u = 0.0;  // P{L <= theta <  U}
  double c_l = 0.0;  // P{L <  theta <= U}
  bool candidate_c = false;
  bool candidate_cu = false;
  bool candidate_cl = false;
};

struct Witness {
  double theta = 0.0;
  EvalKind kind = EvalKind::C;
  double value = 0.0;
};

/// Result of a worst-case coverage search.  `infimum` is the minimum of the
/// candidate entries in `evaluations`; `witnesses` lists every achieving
/// entry (ascending theta, C before CU before CL at equal theta, so the
/// report is deterministic).  `attained` is false only when the infimum is
/// a one-sided limit that no theta in [a, b] achieves.
struct CoverageReport {
  BoundsMode bounds_mode = BoundsMode::OpenOpen;
  double infimum = 1.0;
  bool attained = true;
  std::vector<Witness> witnesses;
  std::vector<PointEvaluation> evaluations;
  std::vector<std::string> warnings;
};

/// P{L(K) <> theta <> U(K) | theta} with comparisons per `mode`: the
/// probability that K falls in the event's k-interval.
double coverage_at(const DistributionSpec& spec, const IntervalProcedure& proc,
                   double theta, BoundsMode mode);

/// Minimum of P{L < theta < U} over theta in [a, b], evaluated on the
/// critical set (endpoints plus breakpoints).  The minimum is attained.
/// Continuous-parameter families only.
CoverageReport min_open_coverage(const DistributionSpec& spec,
                                 const IntervalProcedure& proc, double a,
                                 double b);

/// Infimum of P{L <= theta <= U} over [a, b]: the minimum of C at the
/// endpoints, C_U at a and at every upper breakpoint, and C_L at every
/// lower breakpoint and at b.  May be a one-sided limit (attained = false).
/// Continuous-parameter families only.
CoverageReport inf_closed_coverage(const DistributionSpec& spec,
                                   const IntervalProcedure& proc, double a,
                                   double b);

/// Hypergeometric worst case over integer M in [a, b], evaluated on the
/// integer critical set.
/// mode selects the interval type: OpenOpen evaluates P{L < M < U} directly;
/// ClosedClosed runs the open algorithm on the shifted bounds L-1, U+1
/// (for integer M, L <= M <= U iff L-1 < M < U+1), so its critical values
/// are the shifted bounds while provenance keeps the originating k.
/// Requires a NonDecreasing integer-valued procedure.
CoverageReport min_hypergeom_coverage(const DistributionSpec& spec,
                                      const IntervalProcedure& proc,
                                      long long a, long long b,
                                      BoundsMode mode = BoundsMode::OpenOpen);

/// Coverage evaluated at n_points uniformly spaced values on [a, b] merged
/// with all critical points, sorted by theta, deduplicated.  The third
/// member tells how the point arose.
struct CurvePoint {
  double theta = 0.0;
  double coverage = 0.0;
  std::string breakpoint;  // "none", "L", "U", "LU", "endpoint"
};

std::vector<CurvePoint> coverage_curve(const DistributionSpec& spec,
                                       const IntervalProcedure& proc, double a,
                                       double b, BoundsMode mode,
                                       long long n_points);

}  // namespace covint

#endif  // COVINT_COVERAGE_ENGINE_HPP
