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

#ifndef COVINT_CRITICAL_SET_HPP
#define COVINT_CRITICAL_SET_HPP

#include <string>
#include <vector>

#include "covint/procedures.hpp"

namespace covint {

/// One evaluation point of the worst-case search, with provenance: range
/// endpoint and/or the indices k whose L(k) / U(k) produced the value.
/// Breakpoint values lie strictly inside (a, b); a value arising both as
/// some L(j) and some U(k) carries both tags.
struct CriticalPoint {
  double value = 0.0;
  bool endpoint_a = false;
  bool endpoint_b = false;
  std::vector<long long> lower_ks;  // ks with L(k) == value
  std::vector<long long> upper_ks;  // ks with U(k) == value

  bool is_lower_break() const { return !lower_ks.empty(); }
  bool is_upper_break() const { return !upper_ks.empty(); }
  bool is_endpoint() const { return endpoint_a || endpoint_b; }

  /// e.g. "endpoint", "L(3)", "L(3),U(1)"
  std::string provenance_str() const;
};

/// Sorted, deduplicated evaluation points {a, b} plus every bound value
/// strictly inside (a, b).  Deduplication is by exact value equality; two
/// unequal doubles are kept apart even if they are equal in exact
/// arithmetic (each is still a valid evaluation point).
struct CriticalSet {
  double a = 0.0;
  double b = 0.0;
  std::vector<CriticalPoint> points;  // strictly increasing values
};

/// {a, b} union {L(k) in (a,b)} union {U(k) in (a,b)} for a continuous
/// parameter.  On unbounded supports the contributing k form a contiguous
/// range (monotonicity) located through the tail limits; throws
/// CertificationError when a truncated table cannot certify completeness.
CriticalSet breakpoints_continuous(const IntervalProcedure& proc, double a,
                                   double b);

/// Integer variant for the hypergeometric parameter M.
/// Requires a NonDecreasing, integer-valued procedure and 0 <= a < b <= N.
CriticalSet breakpoints_hypergeom(const IntervalProcedure& proc, long long a,
                                  long long b, long long population);

}  // namespace covint

#endif  // COVINT_CRITICAL_SET_HPP
