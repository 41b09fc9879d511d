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

#include "covint/critical_set.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "covint/errors.hpp"

namespace covint {

namespace {

constexpr long long kRuleSearchCap = 1LL << 48;

struct Collector {
  double a;
  double b;
  std::map<double, CriticalPoint> points;

  void add_endpoints() {
    points[a].value = a;
    points[a].endpoint_a = true;
    points[b].value = b;
    points[b].endpoint_b = true;
  }
  void add_bound_value(double v, bool is_lower, long long k) {
    if (!(a < v && v < b)) return;
    CriticalPoint& p = points[v];
    p.value = v;
    (is_lower ? p.lower_ks : p.upper_ks).push_back(k);
  }
  CriticalSet finish() {
    CriticalSet cs;
    cs.a = a;
    cs.b = b;
    cs.points.reserve(points.size());
    for (auto& [v, p] : points) cs.points.push_back(std::move(p));
    return cs;
  }
};

/// First k with B(k) > a for a nondecreasing rule bound known to cross
/// (limit > a), by doubling then bisection.
long long first_above(const std::function<double(long long)>& bound,
                      double threshold) {
  if (bound(0) > threshold) return 0;
  long long hi = 1;
  while (!(bound(hi) > threshold)) {
    if (hi > kRuleSearchCap)
      throw CertificationError("breakpoint search exceeded the index cap");
    hi *= 2;
  }
  long long lo = hi / 2;  // bound(lo) <= threshold
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (bound(mid) > threshold ? hi : lo) = mid;
  }
  return hi;
}

/// Contributing k range {k : B(k) in (a, b)} for one bound of an
/// unbounded-support procedure, enumerated into the collector.
void collect_rule_bound(const IntervalProcedure& proc, bool is_lower,
                        Collector& col) {
  const bool mirror = proc.direction() == Direction::NonIncreasing;
  auto raw = [&proc, is_lower](long long k) {
    return is_lower ? proc.lower(k) : proc.upper(k);
  };
  auto bound = [&raw, mirror](long long k) {
    return mirror ? -raw(k) : raw(k);
  };
  const double raw_limit =
      is_lower ? proc.lower_tail_limit() : proc.upper_tail_limit();
  const double limit = mirror ? -raw_limit : raw_limit;
  const double lo_edge = mirror ? -col.b : col.a;
  const double hi_edge = mirror ? -col.a : col.b;

  // bound() is nondecreasing with supremum `limit`.
  if (limit <= lo_edge) return;          // every value <= lo_edge
  if (bound(0) >= hi_edge) return;       // every value >= hi_edge
  if (limit <= hi_edge)
    throw CertificationError(
        "breakpoints accumulate toward a tail limit inside the range; the "
        "contributing k set is not finite");
  const long long k_first = first_above(bound, lo_edge);
  const long long k_last = first_above(bound, hi_edge) - 1;  // crosses: limit > hi_edge
  for (long long k = k_first; k <= k_last; ++k)
    col.add_bound_value(raw(k), is_lower, k);
}

void collect_truncated_bound(const IntervalProcedure& proc, bool is_lower,
                             Collector& col) {
  const long long kT = proc.table_k_max();
  const double last = is_lower ? proc.lower(kT) : proc.upper(kT);
  const double limit =
      is_lower ? proc.lower_tail_limit() : proc.upper_tail_limit();
  const bool certified =
      proc.direction() == Direction::NonDecreasing
          ? (last >= col.b || limit <= col.a)
          : (last <= col.a || limit >= col.b);
  if (!certified)
    throw CertificationError(
        std::string("truncated table: values of ") +
        (is_lower ? "L" : "U") +
        " beyond the table may fall inside the range; tail limit cannot "
        "certify completeness");
  for (long long k = 0; k <= kT; ++k)
    col.add_bound_value(is_lower ? proc.lower(k) : proc.upper(k), is_lower, k);
}

}  // namespace

std::string CriticalPoint::provenance_str() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << ",";
    first = false;
  };
  if (endpoint_a) {
    sep();
    os << "endpoint-a";
  }
  if (endpoint_b) {
    sep();
    os << "endpoint-b";
  }
  for (long long k : lower_ks) {
    sep();
    os << "L(" << k << ")";
  }
  for (long long k : upper_ks) {
    sep();
    os << "U(" << k << ")";
  }
  return os.str();
}

CriticalSet breakpoints_continuous(const IntervalProcedure& proc, double a,
                                   double b) {
  if (!(a < b))
    throw ValidationError("breakpoints_continuous: requires a < b");
  Collector col{a, b, {}};
  col.add_endpoints();
  switch (proc.kind()) {
    case IntervalProcedure::Kind::FiniteTable:
      for (long long k = 0; k <= proc.table_k_max(); ++k) {
        col.add_bound_value(proc.lower(k), true, k);
        col.add_bound_value(proc.upper(k), false, k);
      }
      break;
    case IntervalProcedure::Kind::TruncatedTable:
      collect_truncated_bound(proc, true, col);
      collect_truncated_bound(proc, false, col);
      break;
    case IntervalProcedure::Kind::Rule:
      collect_rule_bound(proc, true, col);
      collect_rule_bound(proc, false, col);
      break;
  }
  return col.finish();
}

CriticalSet breakpoints_hypergeom(const IntervalProcedure& proc, long long a,
                                  long long b, long long population) {
  if (!(0 <= a && a < b && b <= population))
    throw ValidationError(
        "breakpoints_hypergeom: requires 0 <= a < b <= N");
  if (proc.direction() != Direction::NonDecreasing)
    throw ValidationError(
        "breakpoints_hypergeom: direction violation (the hypergeometric "
        "theory requires nondecreasing bounds)");
  if (proc.unbounded_support())
    throw ValidationError(
        "breakpoints_hypergeom: the procedure must be a finite table");
  if (!proc.integer_valued())
    throw ValidationError(
        "breakpoints_hypergeom: bounds must be integer-valued");
  Collector col{static_cast<double>(a), static_cast<double>(b), {}};
  col.add_endpoints();
  for (long long k = 0; k <= proc.table_k_max(); ++k) {
    col.add_bound_value(proc.lower(k), true, k);
    col.add_bound_value(proc.upper(k), false, k);
  }
  return col.finish();
}

}  // namespace covint
