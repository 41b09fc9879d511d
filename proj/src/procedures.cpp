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

#include "covint/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "covint/errors.hpp"

namespace covint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponential bracketing on rule procedures gives up past this index.
constexpr long long kRuleSearchCap = 1LL << 48;

void validate_tables(const std::vector<double>& lower,
                     const std::vector<double>& upper, Direction direction) {
  if (lower.size() != upper.size())
    throw ValidationError("procedure tables: lower has " +
                          std::to_string(lower.size()) + " entries, upper " +
                          std::to_string(upper.size()));
  if (lower.empty())
    throw ValidationError("procedure tables: need at least one entry");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(lower[k] <= upper[k]))
      throw ValidationError("procedure tables: L(" + std::to_string(k) +
                            ") > U(" + std::to_string(k) + ")");
  }
  for (std::size_t k = 0; k + 1 < lower.size(); ++k) {
    const bool ok =
        direction == Direction::NonDecreasing
            ? (lower[k] <= lower[k + 1] && upper[k] <= upper[k + 1])
            : (lower[k] >= lower[k + 1] && upper[k] >= upper[k + 1]);
    if (!ok)
      throw ValidationError("procedure tables: not " +
                            direction_name(direction) + " between k=" +
                            std::to_string(k) + " and k=" +
                            std::to_string(k + 1));
  }
}

double bisect_monotone(const std::function<double(double)>& f, double lo,
                       double hi, double target, bool increasing) {
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    const bool go_right = increasing ? (v < target) : (v > target);
    if (go_right)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double garwood_lower_bound(long long n_samples, double delta, long long k) {
  if (k == 0) return 0.0;
  const DistributionSpec spec = DistributionSpec::poisson(n_samples);
  const double hi =
      (static_cast<double>(k) + 40.0 * std::sqrt(static_cast<double>(k) + 1.0) +
       40.0) /
      static_cast<double>(n_samples);
  return bisect_monotone(
      [&](double lam) {
        return interval_prob(spec, lam, KIndexInterval::at_least(k));
      },
      0.0, hi, delta / 2.0, /*increasing=*/true);
}

double garwood_upper_bound(long long n_samples, double delta, long long k) {
  const DistributionSpec spec = DistributionSpec::poisson(n_samples);
  const double hi =
      (static_cast<double>(k) + 40.0 * std::sqrt(static_cast<double>(k) + 1.0) +
       40.0) /
      static_cast<double>(n_samples);
  return bisect_monotone(
      [&](double lam) {
        return interval_prob(spec, lam, KIndexInterval::bounded(0, k));
      },
      0.0, hi, delta / 2.0, /*increasing=*/false);
}

enum class Cmp { LT, LE, GT, GE };

bool apply_cmp(double v, Cmp cmp, double theta) {
  switch (cmp) {
    case Cmp::LT: return v < theta;
    case Cmp::LE: return v <= theta;
    case Cmp::GT: return v > theta;
    case Cmp::GE: return v >= theta;
  }
  return false;
}

Cmp mirror_cmp(Cmp cmp) {
  switch (cmp) {
    case Cmp::LT: return Cmp::GT;
    case Cmp::LE: return Cmp::GE;
    case Cmp::GT: return Cmp::LT;
    case Cmp::GE: return Cmp::LE;
  }
  return cmp;
}

/// The set {k : B(k) cmp theta} for one monotone bound, as a prefix/suffix
/// of the k domain.
struct MonoSet {
  enum class Kind { Empty, All, Prefix, Suffix } kind = Kind::Empty;
  long long k = 0;  // prefix: [0..k]; suffix: [k..domain end]
};

/// Resolves the set for a nondecreasing accessor.  `eval` must accept any
/// k in [0, table_k_max] (tables) or any k >= 0 (rules, table_k_max < 0).
/// `limit` is the tail limit (ignored for finite support, unbounded=false).
MonoSet solve_nondecreasing(const std::function<double(long long)>& eval,
                            bool unbounded, long long table_k_max,
                            double limit, Cmp cmp, double theta) {
  const bool prefix_type = (cmp == Cmp::LT || cmp == Cmp::LE);
  const bool rule = unbounded && table_k_max < 0;
  auto pred = [&](long long k) { return apply_cmp(eval(k), cmp, theta); };

  // Whether the tail limit settles every k beyond the table: values of a
  // nondecreasing sequence never exceed their limit.
  auto tail_all_true = [&]() -> bool {
    if (prefix_type) return cmp == Cmp::LE ? limit <= theta : limit < theta;
    return false;  // a suffix comparison cannot be true of the whole tail
                   // unless some finite k already satisfies it
  };
  auto tail_all_false = [&]() -> bool {
    if (!prefix_type) return cmp == Cmp::GE ? limit < theta : limit <= theta;
    return false;
  };

  if (prefix_type) {
    // True on a (possibly empty) prefix; find its last element.
    if (!pred(0)) return {MonoSet::Kind::Empty, 0};
    if (!unbounded) {
      if (pred(table_k_max)) return {MonoSet::Kind::All, 0};
      long long lo = 0, hi = table_k_max;  // pred(lo) true, pred(hi) false
      while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (pred(mid) ? lo : hi) = mid;
      }
      return {MonoSet::Kind::Prefix, lo};
    }
    if (tail_all_true()) return {MonoSet::Kind::All, 0};
    if (!rule) {
      // Truncated table: a crossing must be visible inside the table.
      if (pred(table_k_max))
        throw CertificationError(
            "truncated table cannot certify where the lower comparison "
            "stops holding (tail limit does not settle it)");
      long long lo = 0, hi = table_k_max;
      while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (pred(mid) ? lo : hi) = mid;
      }
      return {MonoSet::Kind::Prefix, lo};
    }
    long long hi = 1;
    while (pred(hi)) {
      if (hi > kRuleSearchCap)
        throw CertificationError(
            "bound search exceeded the index cap; tail limit equals the "
            "query value");
      hi *= 2;
    }
    long long lo = hi / 2;  // pred(lo) true
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (pred(mid) ? lo : hi) = mid;
    }
    return {MonoSet::Kind::Prefix, lo};
  }

  // Suffix type: true from the first satisfying k onward.
  if (pred(0)) return {MonoSet::Kind::All, 0};
  if (!unbounded) {
    if (!pred(table_k_max)) return {MonoSet::Kind::Empty, 0};
    long long lo = 0, hi = table_k_max;  // pred(lo) false, pred(hi) true
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (pred(mid) ? hi : lo) = mid;
    }
    return {MonoSet::Kind::Suffix, hi};
  }
  if (!rule) {
    if (pred(table_k_max)) {
      long long lo = 0, hi = table_k_max;
      while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (pred(mid) ? hi : lo) = mid;
      }
      return {MonoSet::Kind::Suffix, hi};
    }
    if (tail_all_false()) return {MonoSet::Kind::Empty, 0};
    throw CertificationError(
        "truncated table cannot certify where the upper comparison starts "
        "holding (crossing lies beyond the table)");
  }
  if (tail_all_false()) return {MonoSet::Kind::Empty, 0};
  long long hi = 1;
  while (!pred(hi)) {
    if (hi > kRuleSearchCap)
      throw CertificationError(
          "bound search exceeded the index cap; tail limit equals the "
          "query value");
    hi *= 2;
  }
  long long lo = hi / 2;  // pred(lo) false
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return {MonoSet::Kind::Suffix, hi};
}

/// Set for one bound of the procedure, mirroring NonIncreasing procedures
/// through negation (exact on doubles).
MonoSet bound_set(const IntervalProcedure& proc, bool lower_bound, Cmp cmp,
                  double theta) {
  const bool mirror = proc.direction() == Direction::NonIncreasing;
  auto eval = [&proc, lower_bound, mirror](long long k) {
    const double v = lower_bound ? proc.lower(k) : proc.upper(k);
    return mirror ? -v : v;
  };
  const double raw_limit =
      lower_bound ? proc.lower_tail_limit() : proc.upper_tail_limit();
  return solve_nondecreasing(eval, proc.unbounded_support(),
                             proc.table_k_max(), mirror ? -raw_limit : raw_limit,
                             mirror ? mirror_cmp(cmp) : cmp,
                             mirror ? -theta : theta);
}

}  // namespace

std::string direction_name(Direction d) {
  return d == Direction::NonDecreasing ? "nondecreasing" : "nonincreasing";
}

std::string bounds_mode_name(BoundsMode m) {
  switch (m) {
    case BoundsMode::OpenOpen: return "open";
    case BoundsMode::ClosedClosed: return "closed";
    case BoundsMode::ClosedOpen: return "closed-open";
    case BoundsMode::OpenClosed: return "open-closed";
  }
  return "?";
}

IntervalProcedure IntervalProcedure::from_table(std::vector<double> lower,
                                                std::vector<double> upper,
                                                Direction direction) {
  validate_tables(lower, upper, direction);
  IntervalProcedure p;
  p.kind_ = Kind::FiniteTable;
  p.direction_ = direction;
  p.table_k_max_ = static_cast<long long>(lower.size()) - 1;
  p.lower_table_ = std::move(lower);
  p.upper_table_ = std::move(upper);
  return p;
}

IntervalProcedure IntervalProcedure::truncated_table(
    std::vector<double> lower, std::vector<double> upper, Direction direction,
    double lower_tail_limit, double upper_tail_limit) {
  validate_tables(lower, upper, direction);
  const bool limits_ok =
      direction == Direction::NonDecreasing
          ? (lower_tail_limit >= lower.back() &&
             upper_tail_limit >= upper.back())
          : (lower_tail_limit <= lower.back() &&
             upper_tail_limit <= upper.back());
  if (!limits_ok)
    throw ValidationError(
        "truncated table: tail limits must continue the declared direction "
        "past the last tabulated value");
  IntervalProcedure p;
  p.kind_ = Kind::TruncatedTable;
  p.direction_ = direction;
  p.table_k_max_ = static_cast<long long>(lower.size()) - 1;
  p.lower_table_ = std::move(lower);
  p.upper_table_ = std::move(upper);
  p.lower_limit_ = lower_tail_limit;
  p.upper_limit_ = upper_tail_limit;
  return p;
}

IntervalProcedure IntervalProcedure::from_rule(
    std::function<double(long long)> lower,
    std::function<double(long long)> upper, Direction direction,
    double lower_tail_limit, double upper_tail_limit,
    long long validate_up_to) {
  if (!lower || !upper)
    throw ValidationError("rule procedure: both bound rules are required");
  for (long long k = 0; k <= validate_up_to; ++k) {
    const double l = lower(k);
    const double u = upper(k);
    if (!(l <= u))
      throw ValidationError("rule procedure: L(" + std::to_string(k) +
                            ") > U(" + std::to_string(k) + ")");
    if (k > 0) {
      const double lp = lower(k - 1);
      const double up = upper(k - 1);
      const bool ok = direction == Direction::NonDecreasing
                          ? (lp <= l && up <= u)
                          : (lp >= l && up >= u);
      if (!ok)
        throw ValidationError("rule procedure: not " +
                              direction_name(direction) + " at k=" +
                              std::to_string(k));
    }
  }
  IntervalProcedure p;
  p.kind_ = Kind::Rule;
  p.direction_ = direction;
  p.lower_rule_ = std::move(lower);
  p.upper_rule_ = std::move(upper);
  p.lower_limit_ = lower_tail_limit;
  p.upper_limit_ = upper_tail_limit;
  return p;
}

IntervalProcedure IntervalProcedure::clopper_pearson(long long n_trials,
                                                     double delta) {
  if (n_trials < 1)
    throw ValidationError("clopper_pearson: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("clopper_pearson: delta must lie in (0, 1)");
  const DistributionSpec spec = DistributionSpec::binomial(n_trials);
  const double half = delta / 2.0;
  std::vector<double> lower(n_trials + 1, 0.0);
  std::vector<double> upper(n_trials + 1, 1.0);
  for (long long k = 1; k <= n_trials; ++k) {
    lower[k] = bisect_monotone(
        [&](double p) {
          return interval_prob(spec, p, KIndexInterval::bounded(k, n_trials));
        },
        0.0, 1.0, half, /*increasing=*/true);
  }
  for (long long k = 0; k < n_trials; ++k) {
    upper[k] = bisect_monotone(
        [&](double p) {
          return interval_prob(spec, p, KIndexInterval::bounded(0, k));
        },
        0.0, 1.0, half, /*increasing=*/false);
  }
  IntervalProcedure p = from_table(std::move(lower), std::move(upper),
                                   Direction::NonDecreasing);
  std::ostringstream label;
  label << "clopper-pearson(n=" << n_trials << ", delta=" << delta << ")";
  p.label_ = label.str();
  return p;
}

IntervalProcedure IntervalProcedure::garwood_poisson(long long n_samples,
                                                     double delta) {
  if (n_samples < 1)
    throw ValidationError("garwood_poisson: n_samples must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("garwood_poisson: delta must lie in (0, 1)");
  IntervalProcedure p = from_rule(
      [n_samples, delta](long long k) {
        return garwood_lower_bound(n_samples, delta, k);
      },
      [n_samples, delta](long long k) {
        return garwood_upper_bound(n_samples, delta, k);
      },
      Direction::NonDecreasing, kInf, kInf, /*validate_up_to=*/200);
  std::ostringstream label;
  label << "garwood(n=" << n_samples << ", delta=" << delta << ")";
  p.label_ = label.str();
  return p;
}

double IntervalProcedure::lower(long long k) const {
  if (k < 0) throw DomainError("procedure bounds: k must be >= 0");
  if (kind_ == Kind::Rule) return lower_rule_(k);
  if (k > table_k_max_) {
    if (kind_ == Kind::FiniteTable)
      throw DomainError("procedure bounds: k past the support");
    throw CertificationError("truncated table: L(k) unknown past the table");
  }
  return lower_table_[static_cast<std::size_t>(k)];
}

double IntervalProcedure::upper(long long k) const {
  if (k < 0) throw DomainError("procedure bounds: k must be >= 0");
  if (kind_ == Kind::Rule) return upper_rule_(k);
  if (k > table_k_max_) {
    if (kind_ == Kind::FiniteTable)
      throw DomainError("procedure bounds: k past the support");
    throw CertificationError("truncated table: U(k) unknown past the table");
  }
  return upper_table_[static_cast<std::size_t>(k)];
}

bool IntervalProcedure::integer_valued() const {
  if (kind_ == Kind::Rule) return false;
  auto integral = [](double v) { return std::isfinite(v) && std::floor(v) == v; };
  return std::all_of(lower_table_.begin(), lower_table_.end(), integral) &&
         std::all_of(upper_table_.begin(), upper_table_.end(), integral);
}

std::string IntervalProcedure::summary() const {
  if (!label_.empty()) return label_;
  std::ostringstream os;
  switch (kind_) {
    case Kind::FiniteTable:
      os << "table[k=0.." << table_k_max_ << "]";
      break;
    case Kind::TruncatedTable:
      os << "truncated-table[k=0.." << table_k_max_ << ", tail=("
         << lower_limit_ << ", " << upper_limit_ << ")]";
      break;
    case Kind::Rule:
      os << "rule";
      break;
  }
  os << " " << direction_name(direction_);
  return os.str();
}

void require_support_match(const DistributionSpec& spec,
                           const IntervalProcedure& proc) {
  if (spec.unbounded_support()) {
    if (!proc.unbounded_support())
      throw ValidationError(family_name(spec.family) +
                            ": needs an unbounded-support procedure (tail "
                            "limits or a rule)");
    return;
  }
  if (proc.kind() != IntervalProcedure::Kind::FiniteTable ||
      proc.table_k_max() != spec.support_max())
    throw ValidationError(
        family_name(spec.family) + ": procedure must tabulate exactly k=0.." +
        std::to_string(spec.support_max()));
}

KIndexInterval k_interval_for(const IntervalProcedure& proc, double theta,
                              BoundsMode mode) {
  const Cmp lower_cmp =
      (mode == BoundsMode::OpenOpen || mode == BoundsMode::OpenClosed)
          ? Cmp::LT
          : Cmp::LE;
  const Cmp upper_cmp =
      (mode == BoundsMode::OpenOpen || mode == BoundsMode::ClosedOpen)
          ? Cmp::GT
          : Cmp::GE;

  // An uncertifiable side is forgiven when the other side already empties
  // the event.
  MonoSet lset, uset;
  std::exception_ptr deferred;
  try {
    lset = bound_set(proc, /*lower_bound=*/true, lower_cmp, theta);
  } catch (const CertificationError&) {
    deferred = std::current_exception();
  }
  if (!deferred && lset.kind == MonoSet::Kind::Empty)
    return KIndexInterval::empty_range();
  uset = bound_set(proc, /*lower_bound=*/false, upper_cmp, theta);
  if (uset.kind == MonoSet::Kind::Empty) return KIndexInterval::empty_range();
  if (deferred) std::rethrow_exception(deferred);

  // With NonDecreasing bounds the L-set is a prefix and the U-set a suffix;
  // mirrored procedures come back the other way around.  Either way each
  // set is [lo, hi] with at most one side constrained.
  long long lo = 0;
  std::optional<long long> hi;
  if (!proc.unbounded_support()) hi = proc.table_k_max();
  for (const MonoSet& s : {lset, uset}) {
    if (s.kind == MonoSet::Kind::Prefix) hi = hi ? std::min(*hi, s.k) : s.k;
    if (s.kind == MonoSet::Kind::Suffix) lo = std::max(lo, s.k);
  }
  if (hi) {
    if (*hi < lo) return KIndexInterval::empty_range();
    return KIndexInterval::bounded(lo, *hi);
  }
  return KIndexInterval::at_least(lo);
}

}  // namespace covint
