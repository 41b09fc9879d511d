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

#ifndef COVINT_DIST_CORE_HPP
#define COVINT_DIST_CORE_HPP

#include <string>
#include <vector>

#include "covint/k_interval.hpp"

namespace covint {

enum class Family { Binomial, Poisson, NegBinomial, Hypergeometric };

std::string family_name(Family f);

/// One of the four supported discrete families with its nuisance parameters
/// fixed.  The free parameter (p, lambda, p, or M) is passed separately to
/// each operation.
///
/// For Poisson, K is the sum of n_samples i.i.d. Poisson(lambda) variables,
/// so K ~ Poisson(n_samples * lambda) and bounds/breakpoints live in
/// lambda-space.
struct DistributionSpec {
  Family family = Family::Binomial;
  long long n_samples = 1;    // trials / sample count / draws; 1 for NegBinomial
  double r = 0.0;             // negative-binomial shape (r = 1: geometric)
  long long population = 0;   // hypergeometric N

  static DistributionSpec binomial(long long n_trials);
  static DistributionSpec poisson(long long n_samples);
  static DistributionSpec neg_binomial(double r);
  static DistributionSpec hypergeometric(long long population, long long draws);

  /// Throws ValidationError if the fields are inconsistent.
  void validate() const;

  bool unbounded_support() const {
    return family == Family::Poisson || family == Family::NegBinomial;
  }

  /// Largest k with positive probability at any parameter value.
  /// Only defined for bounded-support families.
  long long support_max() const;

  std::string str() const;
};

/// Throws DomainError if theta is outside the family's legal parameter range.
/// Binomial accepts the closed range [0,1] and Poisson accepts lambda = 0
/// (degenerate point masses); NegBinomial requires p strictly inside (0,1);
/// Hypergeometric requires an integer M in [0, N].
void validate_param(const DistributionSpec& spec, double theta);

/// P{K = k | theta}.  Zero outside the support.  Evaluated in log space via
/// log-gamma; relative error <= 1e-13 for probabilities >= 1e-300.
double pmf(const DistributionSpec& spec, double theta, long long k);

/// P{K <= k | theta}.  Absolute error <= 1e-13.  For unbounded supports the
/// sum is truncated past the point where the remaining tail is < 1e-16.
double cdf(const DistributionSpec& spec, double theta, long long k);

/// P{k_lo <= K <= k_hi | theta} for a contiguous range, empty range -> 0.
/// Summation runs outward from the distribution mode.  An unbounded upper
/// end (legal only for Poisson / NegBinomial) is computed through the cdf
/// complement.  Absolute error <= 1e-13.
double interval_prob(const DistributionSpec& spec, double theta,
                     const KIndexInterval& range);

/// pmf values for k in [k_lo, k_hi], anchored at the mode and extended by
/// the one-term recurrence.  Shared by interval_prob and the brute-force
/// oracle (which re-derives events but not the kernels).
std::vector<double> pmf_window(const DistributionSpec& spec, double theta,
                               long long k_lo, long long k_hi);

/// Hypergeometric weight T(k, M, N, n) = C(M,k) C(N-M-1, n-k-1) / C(N,n),
/// with out-of-range binomial coefficients equal to zero.  Requires
/// 0 <= M < N and 0 < n <= N; k may be any integer.
double t_weight(long long k, long long M, long long N, long long n);

namespace detail {
/// log(k!) with long-double internal precision.
long double log_factorial(long long k);
/// log C(n, k); -inf when the coefficient is zero by convention.
long double log_choose(long long n, long long k);
/// Mode of the distribution (clamped to the support).
long long distribution_mode(const DistributionSpec& spec, double theta);
/// First k beyond which the upper tail is provably < 1e-16.
long long tail_guard(const DistributionSpec& spec, double theta);
}  // namespace detail

}  // namespace covint

#endif  // COVINT_DIST_CORE_HPP
