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

#ifndef COVINT_PROCEDURES_HPP
#define COVINT_PROCEDURES_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "covint/dist_core.hpp"
#include "covint/k_interval.hpp"

namespace covint {

enum class Direction { NonDecreasing, NonIncreasing };

/// Which comparisons define the coverage event:
///   OpenOpen     {L <  theta <  U}
///   ClosedClosed {L <= theta <= U}
///   ClosedOpen   {L <= theta <  U}   (C_U)
///   OpenClosed   {L <  theta <= U}   (C_L)
enum class BoundsMode { OpenOpen, ClosedClosed, ClosedOpen, OpenClosed };

std::string direction_name(Direction d);
std::string bounds_mode_name(BoundsMode m);

/// The map k -> (L(k), U(k)) defining a random interval, with a declared
/// monotone direction shared by both bounds.  Three storage forms:
///
///  - finite table over {0..k_max} (binomial, hypergeometric),
///  - truncated table over {0..k_max} plus tail limits, standing in for an
///    unbounded-support procedure whose values beyond the table are only
///    known to approach the limits monotonically,
///  - evaluation rule (any k on demand) with tail limits, for built-ins on
///    unbounded supports.
///
/// Monotonicity and L <= U are validated at construction, not assumed.
class IntervalProcedure {
 public:
  enum class Kind { FiniteTable, TruncatedTable, Rule };

  /// Finite-support procedure from explicit tables.
  /// Throws ValidationError with the offending index on any violation.
  static IntervalProcedure from_table(std::vector<double> lower,
                                      std::vector<double> upper,
                                      Direction direction);

  /// Unbounded-support procedure known only up to the end of the tables;
  /// the declared limits of L and U as k -> inf (possibly +inf) bound the
  /// unseen values.
  static IntervalProcedure truncated_table(std::vector<double> lower,
                                           std::vector<double> upper,
                                           Direction direction,
                                           double lower_tail_limit,
                                           double upper_tail_limit);

  /// Unbounded-support procedure evaluated on demand.  The rule is assumed
  /// pure; monotonicity is validated for k <= validate_up_to.
  static IntervalProcedure from_rule(std::function<double(long long)> lower,
                                     std::function<double(long long)> upper,
                                     Direction direction,
                                     double lower_tail_limit,
                                     double upper_tail_limit,
                                     long long validate_up_to = 64);

  /// Exact equal-tailed binomial bounds at confidence 1 - delta:
  /// L(k) solves P{K >= k | n, L} = delta/2 (L(0) = 0) and U(k) solves
  /// P{K <= k | n, U} = delta/2 (U(n) = 1); bisection to 1e-12.
  static IntervalProcedure clopper_pearson(long long n_trials, double delta);

  /// Exact equal-tailed Poisson bounds on lambda (K ~ Poisson(n * lambda)):
  /// L(k) solves P{K >= k | n lambda} = delta/2 (L(0) = 0) and U(k) solves
  /// P{K <= k | n lambda} = delta/2; unbounded support, tail limits +inf.
  static IntervalProcedure garwood_poisson(long long n_samples, double delta);

  Kind kind() const { return kind_; }
  Direction direction() const { return direction_; }
  bool unbounded_support() const { return kind_ != Kind::FiniteTable; }

  /// Last tabulated k (FiniteTable / TruncatedTable); -1 for rules.
  long long table_k_max() const { return table_k_max_; }

  /// L(k), U(k).  For truncated tables, k past the table throws
  /// CertificationError; rules evaluate any k >= 0.
  double lower(long long k) const;
  double upper(long long k) const;

  /// Tail limits; only meaningful on unbounded supports.
  double lower_tail_limit() const { return lower_limit_; }
  double upper_tail_limit() const { return upper_limit_; }

  /// True when every tabulated bound is an exact integer (hypergeometric
  /// procedures require this).  Always false for rules.
  bool integer_valued() const;

  std::string summary() const;

  /// Placeholder (no entries); every real procedure comes from a factory.
  IntervalProcedure() = default;

 private:
  Kind kind_ = Kind::FiniteTable;
  Direction direction_ = Direction::NonDecreasing;
  std::vector<double> lower_table_;
  std::vector<double> upper_table_;
  std::function<double(long long)> lower_rule_;
  std::function<double(long long)> upper_rule_;
  long long table_k_max_ = -1;
  double lower_limit_ = 0.0;
  double upper_limit_ = 0.0;
  std::string label_;
};

/// A coverage analysis needs the procedure's k domain to match the
/// distribution's support: unbounded families pair with unbounded-support
/// procedures, bounded families with finite tables over exactly {0..k_max}.
/// Throws ValidationError otherwise.
void require_support_match(const DistributionSpec& spec,
                           const IntervalProcedure& proc);

/// The maximal contiguous set {k : L(k) <> theta <> U(k)} with comparisons
/// chosen by `mode`, intersected with the support {0,1,...}.  Contiguity is
/// guaranteed by the declared monotone direction; the ends are located by
/// binary search (exponential bracketing on unbounded supports).
///
/// Comparisons use exact floating-point equality against the values the
/// procedure returns; critical sets store those exact values, so equality
/// at breakpoints is well defined.
///
/// Throws CertificationError when a truncated table cannot decide the event.
KIndexInterval k_interval_for(const IntervalProcedure& proc, double theta,
                              BoundsMode mode);

/// A procedure table file bound to the distribution it describes.
struct LoadedProcedure {
  DistributionSpec spec;
  IntervalProcedure proc;
};

/// Parses the procedure-table text format:
///   # family=<binomial|poisson|negbinomial|hypergeometric> n=<int>
///     [N=<int>] [r=<real>] direction=<nondecreasing|nonincreasing>
///   k,L,U          (ascending k with no gaps from 0)
///   tail,<L|inf>,<U|inf>   (required for unbounded-support families)
/// Diagnostics name the offending line.
LoadedProcedure parse_procedure_table(std::istream& in);
LoadedProcedure load_procedure_table(const std::string& path);

/// Writes a table-backed procedure in the same format (17 significant
/// digits, so a round trip reproduces the exact doubles).
void write_procedure_table(std::ostream& out, const DistributionSpec& spec,
                           const IntervalProcedure& proc);

}  // namespace covint

#endif  // COVINT_PROCEDURES_HPP
