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

#include "covint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "covint/errors.hpp"

namespace covint::oracle {

namespace {

constexpr long long kRuleEnumerationCap = 200000;

/// Floor division (C++ '/' truncates toward zero, which is wrong for the
/// negative arguments the floor-bound lemma ranges over).
long long floor_div(long long num, long long den) {
  long long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

struct EventCmp {
  bool lower_strict;
  bool upper_strict;
  bool lower_holds(double bound, double theta) const {
    return lower_strict ? bound < theta : bound <= theta;
  }
  bool upper_holds(double bound, double theta) const {
    return upper_strict ? bound > theta : bound >= theta;
  }
};

EventCmp event_cmp(BoundsMode mode) {
  return {mode == BoundsMode::OpenOpen || mode == BoundsMode::OpenClosed,
          mode == BoundsMode::OpenOpen || mode == BoundsMode::ClosedOpen};
}

enum class TailStatus { AllTrue, AllFalse, Mixed };

/// Status of one comparison over the unseen values of a truncated table's
/// bound: those values run monotonically from the last tabulated value
/// toward the tail limit.
TailStatus tail_status(double last, double limit, bool nondecreasing,
                       bool is_lower_side, bool strict, double theta) {
  if (!nondecreasing) {
    // Mirror through negation; "value below theta" becomes "value above
    // -theta", so the side flips with the values.
    return tail_status(-last, -limit, true, !is_lower_side, strict, -theta);
  }
  if (is_lower_side) {
    // condition: value < theta (strict) or <= theta
    if (strict ? limit < theta : limit <= theta) return TailStatus::AllTrue;
    if (strict ? last >= theta : last > theta) return TailStatus::AllFalse;
    return TailStatus::Mixed;
  }
  // condition: value > theta (strict) or >= theta
  if (strict ? last > theta : last >= theta) return TailStatus::AllTrue;
  if (strict ? limit <= theta : limit < theta) return TailStatus::AllFalse;
  return TailStatus::Mixed;
}

double sum_events_in_table(const DistributionSpec& spec,
                           const IntervalProcedure& proc, double theta,
                           const EventCmp& cmp, long long k_max) {
  const std::vector<double> pm = pmf_window(spec, theta, 0, k_max);
  double sum = 0.0, comp = 0.0;
  for (long long k = 0; k <= k_max; ++k) {
    if (!cmp.lower_holds(proc.lower(k), theta)) continue;
    if (!cmp.upper_holds(proc.upper(k), theta)) continue;
    const double y = pm[static_cast<std::size_t>(k)] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double coverage_direct_rule(const DistributionSpec& spec,
                            const IntervalProcedure& proc, double theta,
                            const EventCmp& cmp) {
  const bool nondecr = proc.direction() == Direction::NonDecreasing;
  double sum = 0.0;
  for (long long k = 0; k <= kRuleEnumerationCap; ++k) {
    const double l = proc.lower(k);
    const double u = proc.upper(k);
    // Once the constraining bound has moved past theta it never comes back.
    if (nondecr && l > theta) return sum;
    if (!nondecr && u < theta) return sum;
    if (cmp.lower_holds(l, theta) && cmp.upper_holds(u, theta))
      sum += pmf(spec, theta, k);
  }
  throw CertificationError(
      "coverage_direct: rule enumeration cap exceeded without a stopping "
      "bound crossing theta");
}

}  // namespace

void OracleVerdict::record_failure(std::string input, std::string expected,
                                   std::string got) {
  passed = false;
  ++total_failures;
  if (failing_cases.size() < kept_failures_cap)
    failing_cases.push_back(
        {std::move(input), std::move(expected), std::move(got)});
}

double coverage_direct(const DistributionSpec& spec,
                       const IntervalProcedure& proc, double theta,
                       BoundsMode mode) {
  spec.validate();
  require_support_match(spec, proc);
  validate_param(spec, theta);
  const EventCmp cmp = event_cmp(mode);

  switch (proc.kind()) {
    case IntervalProcedure::Kind::FiniteTable:
      return sum_events_in_table(spec, proc, theta, cmp, proc.table_k_max());
    case IntervalProcedure::Kind::TruncatedTable: {
      const long long k_max = proc.table_k_max();
      double sum = sum_events_in_table(spec, proc, theta, cmp, k_max);
      const bool nondecr = proc.direction() == Direction::NonDecreasing;
      const TailStatus lower_tail =
          tail_status(proc.lower(k_max), proc.lower_tail_limit(), nondecr,
                      true, cmp.lower_strict, theta);
      const TailStatus upper_tail =
          tail_status(proc.upper(k_max), proc.upper_tail_limit(), nondecr,
                      false, cmp.upper_strict, theta);
      if (lower_tail == TailStatus::AllFalse ||
          upper_tail == TailStatus::AllFalse)
        return sum;
      if (lower_tail == TailStatus::AllTrue &&
          upper_tail == TailStatus::AllTrue)
        return sum + interval_prob(spec, theta,
                                   KIndexInterval::at_least(k_max + 1));
      throw CertificationError(
          "coverage_direct: the tail limits cannot settle the event past "
          "the table");
    }
    case IntervalProcedure::Kind::Rule:
      return coverage_direct_rule(spec, proc, theta, cmp);
  }
  return 0.0;
}

GridMin grid_min(const DistributionSpec& spec, const IntervalProcedure& proc,
                 double a, double b, BoundsMode mode, long long n_grid) {
  spec.validate();
  if (spec.family == Family::Hypergeometric)
    throw DomainError("grid_min: use exhaustive_min_hypergeom");
  if (n_grid < 2) throw ValidationError("grid_min: n_grid must be >= 2");
  validate_param(spec, a);
  validate_param(spec, b);
  if (!(a < b)) throw ValidationError("grid_min: requires a < b");

  std::set<double> thetas;
  for (long long i = 0; i < n_grid; ++i)
    thetas.insert(a + (b - a) * static_cast<double>(i) /
                          static_cast<double>(n_grid - 1));
  const double eps = 1e-9 * (b - a);
  for (const CriticalPoint& p : breakpoints_continuous(proc, a, b).points) {
    thetas.insert(p.value);
    thetas.insert(std::clamp(p.value - eps, a, b));
    thetas.insert(std::clamp(p.value + eps, a, b));
  }

  GridMin best;
  best.value = 2.0;
  for (double theta : thetas) {
    const double v = coverage_direct(spec, proc, theta, mode);
    if (v < best.value) {
      best.value = v;
      best.theta = theta;
    }
  }
  return best;
}

HypergeomScan exhaustive_min_hypergeom(const DistributionSpec& spec,
                                       const IntervalProcedure& proc,
                                       long long a, long long b) {
  spec.validate();
  if (spec.family != Family::Hypergeometric)
    throw DomainError("exhaustive_min_hypergeom: hypergeometric specs only");
  if (!(0 <= a && a <= b && b <= spec.population))
    throw ValidationError(
        "exhaustive_min_hypergeom: requires 0 <= a <= b <= N");
  std::vector<long long> ms;
  ms.reserve(static_cast<std::size_t>(b - a + 1));
  for (long long m = a; m <= b; ++m) ms.push_back(m);
  return exact_min_over(spec, proc, ms);
}

HypergeomScan exact_min_over(const DistributionSpec& spec,
                             const IntervalProcedure& proc,
                             const std::vector<long long>& ms) {
  spec.validate();
  if (spec.family != Family::Hypergeometric)
    throw DomainError("exact_min_over: hypergeometric specs only");
  require_support_match(spec, proc);
  if (ms.empty()) throw ValidationError("exact_min_over: empty point list");
  const EventCmp cmp = event_cmp(BoundsMode::OpenOpen);
  const long long k_max = proc.table_k_max();

  HypergeomScan best;
  if (spec.population <= 300) {
    best.exact_path = true;
    const exact::HypergeomExact H(spec.population, spec.n_samples);
    bool have = false;
    exact::BigInt best_num;
    for (long long m : ms) {
      exact::BigInt num = 0;
      for (long long k = 0; k <= k_max; ++k) {
        if (cmp.lower_holds(proc.lower(k), static_cast<double>(m)) &&
            cmp.upper_holds(proc.upper(k), static_cast<double>(m)))
          num += H.pmf_num(m, k);
      }
      if (!have || num < best_num) {
        have = true;
        best_num = num;
        best.m_star = m;
      }
    }
    best.exact_value = exact::Rational(best_num, H.denominator());
    best.value = best.exact_value.convert_to<double>();
    return best;
  }

  best.value = 2.0;
  for (long long m : ms) {
    const double v =
        coverage_direct(spec, proc, static_cast<double>(m), BoundsMode::OpenOpen);
    if (v < best.value) {
      best.value = v;
      best.m_star = m;
    }
  }
  return best;
}

namespace {

/// Uniform variates mapped from mt19937_64 directly, so streams are
/// identical on every platform (library distributions are not).
struct CaseRng {
  std::mt19937_64 gen;
  explicit CaseRng(std::uint64_t seed) : gen(seed) {}
  double unif() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  long long unif_int(long long lo, long long hi) {  // inclusive
    const auto span = static_cast<double>(hi - lo + 1);
    const long long v = lo + static_cast<long long>(unif() * span);
    return std::min(v, hi);
  }
};

std::vector<double> monotone_values(CaseRng& rng, std::size_t count,
                                    double lo, double hi, bool descending,
                                    double dup_prob) {
  std::vector<double> v(count);
  for (double& x : v) x = lo + (hi - lo) * rng.unif();
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < count; ++i)
    if (rng.unif() < dup_prob) v[i] = v[i - 1];  // flat stretches
  if (descending) std::reverse(v.begin(), v.end());
  return v;
}

RandomCase truncated_family_case(CaseRng& rng, DistributionSpec spec,
                                 double value_lo, double value_hi,
                                 double tail_limit, double range_floor) {
  constexpr std::size_t kRows = 61;  // k = 0..60
  std::vector<double> lower =
      monotone_values(rng, kRows, value_lo, value_hi, false, 0.2);
  std::vector<double> upper =
      monotone_values(rng, kRows, value_lo, value_hi, false, 0.2);
  for (std::size_t i = 0; i < kRows; ++i)
    upper[i] = std::max(upper[i], lower[i]);
  // The range stays strictly below L(60) so the tails certify every query.
  const double hi = 0.95 * lower.back();
  RandomCase rc;
  rc.a = std::max(range_floor, hi * (0.05 + 0.15 * rng.unif()));
  rc.b = rc.a + (hi - rc.a) * (0.3 + 0.7 * rng.unif());
  if (!(rc.a < rc.b)) {
    rc.a = hi * 0.4;
    rc.b = hi * 0.8;
  }
  rc.spec = spec;
  rc.proc = IntervalProcedure::truncated_table(
      std::move(lower), std::move(upper), Direction::NonDecreasing,
      tail_limit, tail_limit);
  return rc;
}

}  // namespace

RandomCase random_coverage_case(CaseKind kind, std::uint64_t seed,
                                long long size_hint) {
  CaseRng rng(seed);
  rng.gen.discard(7);  // decorrelate small consecutive seeds
  switch (kind) {
    case CaseKind::Binomial: {
      const long long n_max = size_hint > 0 ? size_hint : 30;
      const long long n = rng.unif_int(1, n_max);
      const bool descending = rng.unif() < 0.25;
      const Direction dir = descending ? Direction::NonIncreasing
                                       : Direction::NonDecreasing;
      std::vector<double> lower =
          monotone_values(rng, n + 1, 0.0, 1.0, descending, 0.25);
      std::vector<double> upper =
          monotone_values(rng, n + 1, 0.0, 1.0, descending, 0.25);
      for (std::size_t i = 0; i < upper.size(); ++i)
        upper[i] = std::max(upper[i], lower[i]);
      RandomCase rc;
      rc.spec = DistributionSpec::binomial(n);
      rc.proc =
          IntervalProcedure::from_table(std::move(lower), std::move(upper), dir);
      rc.a = 0.02 + 0.3 * rng.unif();
      rc.b = rc.a + 0.05 + (0.93 - rc.a) * rng.unif();
      return rc;
    }
    case CaseKind::Poisson: {
      const long long n_samples = rng.unif_int(1, 3);
      return truncated_family_case(
          rng, DistributionSpec::poisson(n_samples), 0.0, 8.0,
          std::numeric_limits<double>::infinity(), 1e-3);
    }
    case CaseKind::NegBinomial:
    case CaseKind::Geometric: {
      const double r =
          kind == CaseKind::Geometric ? 1.0 : 0.5 + 3.5 * rng.unif();
      return truncated_family_case(rng, DistributionSpec::neg_binomial(r),
                                   0.05, 0.95, 1.0, 0.1);
    }
    case CaseKind::Hypergeometric: {
      const long long N = size_hint > 0 ? size_hint : 25;
      const long long n = rng.unif_int(1, N);
      const long long step = std::max<long long>(1, 2 * N / (n + 1));
      std::vector<double> lower(n + 1), upper(n + 1);
      lower[0] = static_cast<double>(rng.unif_int(-1, 1));
      upper[0] = lower[0] + static_cast<double>(rng.unif_int(0, step + 1));
      for (long long k = 1; k <= n; ++k) {
        lower[k] = lower[k - 1] + static_cast<double>(rng.unif_int(0, step));
        upper[k] = std::max(upper[k - 1], lower[k]) +
                   static_cast<double>(rng.unif_int(0, step));
      }
      RandomCase rc;
      rc.spec = DistributionSpec::hypergeometric(N, n);
      rc.proc = IntervalProcedure::from_table(std::move(lower),
                                              std::move(upper),
                                              Direction::NonDecreasing);
      rc.a = static_cast<double>(rng.unif_int(0, N - 1));
      rc.b = static_cast<double>(
          rng.unif_int(static_cast<long long>(rc.a) + 1, N));
      return rc;
    }
  }
  throw ValidationError("random_coverage_case: unknown kind");
}

bool check_unimodal_between(const std::vector<double>& values, double tol) {
  if (values.size() < 2)
    throw ValidationError("check_unimodal_between: need >= 2 values");
  std::size_t p = 0;
  while (p + 1 < values.size() && values[p + 1] >= values[p] - tol) ++p;
  std::size_t s = values.size() - 1;
  while (s > 0 && values[s] <= values[s - 1] + tol) --s;
  return s <= p;
}

OracleVerdict check_hypergeom_identities(long long population,
                                         long long draws,
                                         TWeightFault fault) {
  const long long N = population;
  const long long n = draws;
  if (!(0 < n && n <= N))
    throw ValidationError("check_hypergeom_identities: requires 0 < n <= N");
  if (N > 300)
    throw ValidationError(
        "check_hypergeom_identities: resource guard rejects N > 300");

  const int bias = fault == TWeightFault::SecondArgOffByOne ? 1 : 0;
  const exact::HypergeomExact H(N, n);
  OracleVerdict verdict;

  auto note = [&](const std::string& what, const exact::BigInt& expected,
                  const exact::BigInt& got) {
    verdict.record_failure(what, expected.str(), got.str());
    const double d = exact::Rational(expected - got, H.denominator())
                         .convert_to<double>();
    verdict.worst_discrepancy = std::max(verdict.worst_discrepancy,
                                         std::abs(d));
  };

  // Precomputed numerator tables over the common denominator C(N, n):
  // T[k+2][M] for k in [-2, n+2], M in [0, N-1], and the cdf increment
  // D[M][x+2] = cdf(M, x) - cdf(M-1, x) for M in [1, N], x in [-2, n+2].
  std::vector<std::vector<exact::BigInt>> T(
      static_cast<std::size_t>(n + 5),
      std::vector<exact::BigInt>(static_cast<std::size_t>(N)));
  for (long long k = -2; k <= n + 2; ++k)
    for (long long M = 0; M < N; ++M)
      T[static_cast<std::size_t>(k + 2)][static_cast<std::size_t>(M)] =
          H.t_num(k, M, bias);
  std::vector<std::vector<exact::BigInt>> D(
      static_cast<std::size_t>(N + 1),
      std::vector<exact::BigInt>(static_cast<std::size_t>(n + 5)));
  for (long long M = 1; M <= N; ++M)
    for (long long x = -2; x <= n + 2; ++x)
      D[static_cast<std::size_t>(M)][static_cast<std::size_t>(x + 2)] =
          H.cdf_num(M, x) - H.cdf_num(M - 1, x);
  auto t_at = [&](long long k, long long M) -> const exact::BigInt& {
    return T[static_cast<std::size_t>(k + 2)][static_cast<std::size_t>(M)];
  };
  auto d_at = [&](long long M, long long x) -> const exact::BigInt& {
    return D[static_cast<std::size_t>(M)][static_cast<std::size_t>(x + 2)];
  };

  // (a) cdf decrement: P{K <= k | M} - P{K <= k | M+1} = T(k, M, N, n).
  {
    exact::BigInt lhs;
    for (long long M = 0; M < N; ++M) {
      for (long long k = -2; k <= n + 2; ++k) {
        lhs = H.cdf_num(M, k);
        lhs -= H.cdf_num(M + 1, k);
        if (lhs != t_at(k, M)) {
          std::ostringstream os;
          os << "cdf-decrement N=" << N << " n=" << n << " M=" << M
             << " k=" << k;
          note(os.str(), lhs, t_at(k, M));
        }
      }
    }
  }

  // (b) interval difference:
  // P{k<=K<=l | M} - P{k<=K<=l | M-1} = T(k-1, M-1) - T(l, M-1).
  {
    exact::BigInt lhs, rhs;
    for (long long M = 1; M <= N; ++M) {
      for (long long k = -1; k <= n + 1; ++k) {
        for (long long l = k; l <= n + 1; ++l) {
          lhs = d_at(M, l);
          lhs -= d_at(M, k - 1);
          rhs = t_at(k - 1, M - 1);
          rhs -= t_at(l, M - 1);
          if (lhs != rhs) {
            std::ostringstream os;
            os << "interval-difference N=" << N << " n=" << n << " M=" << M
               << " k=" << k << " l=" << l;
            note(os.str(), lhs, rhs);
          }
        }
      }
    }
  }

  // (c) floor bounds; their derivation divides by n - 1, so n = 1 is
  // outside the statement and skipped.
  if (n >= 2) {
    for (long long l = 0; l <= n + 2; ++l) {
      const long long m_from = 1 + floor_div(N * l, n - 1);
      for (long long M = std::max<long long>(m_from, 0); M <= N; ++M) {
        if (floor_div(n * M, N + 1) < l) {
          std::ostringstream os;
          os << "floor-bound-lower N=" << N << " n=" << n << " l=" << l
             << " M=" << M;
          verdict.record_failure(os.str(), "floor(nM/(N+1)) >= l",
                                 std::to_string(floor_div(n * M, N + 1)));
        }
      }
    }
    for (long long k = -2; k < n; ++k) {
      const long long m_to = 1 + floor_div(N * (k - 1), n - 1);
      for (long long M = 0; M <= std::min(m_to, N); ++M) {
        if (floor_div(n * M, N + 1) > k - 1) {
          std::ostringstream os;
          os << "floor-bound-upper N=" << N << " n=" << n << " k=" << k
             << " M=" << M;
          verdict.record_failure(os.str(), "floor(nM/(N+1)) <= k-1",
                                 std::to_string(floor_div(n * M, N + 1)));
        }
      }
    }
  }

  // (d) T monotone in r on each side of floor(nM/(N+1)), and in M on each
  // side of 1 + floor(Nr/(n-1)) (the latter skipped for n = 1).
  for (long long M = 1; M <= N; ++M) {
    const long long peak = floor_div(n * M, N + 1);
    for (long long r = 1; r <= std::min(peak, n); ++r) {
      if (t_at(r - 1, M - 1) > t_at(r, M - 1)) {
        std::ostringstream os;
        os << "t-monotone-rising N=" << N << " n=" << n << " M=" << M
           << " r=" << r;
        note(os.str(), t_at(r, M - 1), t_at(r - 1, M - 1));
      }
    }
    for (long long r = std::max<long long>(peak, 0); r <= n - 1; ++r) {
      if (t_at(r + 1, M - 1) > t_at(r, M - 1)) {
        std::ostringstream os;
        os << "t-monotone-falling N=" << N << " n=" << n << " M=" << M
           << " r=" << r;
        note(os.str(), t_at(r, M - 1), t_at(r + 1, M - 1));
      }
    }
  }
  if (n >= 2) {
    for (long long r = 0; r <= n; ++r) {
      const long long thresh = 1 + floor_div(N * r, n - 1);
      for (long long M = 2; M <= std::min(thresh, N); ++M) {
        if (t_at(r, M - 2) > t_at(r, M - 1)) {
          std::ostringstream os;
          os << "t-monotone-in-M-rising N=" << N << " n=" << n << " r=" << r
             << " M=" << M;
          note(os.str(), t_at(r, M - 1), t_at(r, M - 2));
        }
      }
      for (long long M = std::max<long long>(thresh, 1); M <= N - 1; ++M) {
        if (t_at(r, M) > t_at(r, M - 1)) {
          std::ostringstream os;
          os << "t-monotone-in-M-falling N=" << N << " n=" << n
             << " r=" << r << " M=" << M;
          note(os.str(), t_at(r, M - 1), t_at(r, M));
        }
      }
    }
  }

  // (e) interval probabilities unimodal in M (exact comparisons).
  {
    exact::BigInt prev, cur;
    for (long long k = 0; k <= n; ++k) {
      for (long long l = k; l <= n; ++l) {
        bool descended = false;
        prev = H.interval_num(0, k, l);
        for (long long M = 1; M <= N; ++M) {
          cur = H.cdf_num(M, l);
          cur -= H.cdf_num(M, k - 1);
          if (cur < prev) descended = true;
          if (cur > prev && descended) {
            std::ostringstream os;
            os << "unimodality N=" << N << " n=" << n << " k=" << k
               << " l=" << l << " ascends at M=" << M << " after a descent";
            note(os.str(), prev, cur);
            break;
          }
          prev.swap(cur);
        }
      }
    }
  }

  // (f) shift inequalities.  Empty right-hand events make both trivially
  // true, so only g <= h is exercised.
  {
    exact::BigInt lhs, rhs;
    for (long long g = -1; g <= n + 1; ++g) {
      for (long long h = g; h <= n + 1; ++h) {
        for (long long M = 0; M < N; ++M) {
          lhs = H.cdf_num(M + 1, h + 1);
          lhs -= H.cdf_num(M + 1, g - 1);
          rhs = H.cdf_num(M, h);
          rhs -= H.cdf_num(M, g - 1);
          if (lhs < rhs) {
            std::ostringstream os;
            os << "shift-up N=" << N << " n=" << n << " g=" << g
               << " h=" << h << " M=" << M;
            note(os.str(), rhs, lhs);
          }
        }
        for (long long M = 1; M <= N; ++M) {
          lhs = H.cdf_num(M - 1, h);
          lhs -= H.cdf_num(M - 1, g - 2);
          rhs = H.cdf_num(M, h);
          rhs -= H.cdf_num(M, g - 1);
          if (lhs < rhs) {
            std::ostringstream os;
            os << "shift-down N=" << N << " n=" << n << " g=" << g
               << " h=" << h << " M=" << M;
            note(os.str(), rhs, lhs);
          }
        }
      }
    }
  }

  return verdict;
}

}  // namespace covint::oracle
