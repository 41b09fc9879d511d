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

#include "covint/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "covint/errors.hpp"

namespace covint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long double kInfL = std::numeric_limits<long double>::infinity();

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

/// Point-mass families: binomial at p in {0,1}, Poisson at lambda 0.
bool degenerate_atom(const DistributionSpec& spec, double theta,
                     long long* atom) {
  if (spec.family == Family::Binomial && theta == 0.0) {
    *atom = 0;
    return true;
  }
  if (spec.family == Family::Binomial && theta == 1.0) {
    *atom = spec.n_samples;
    return true;
  }
  if (spec.family == Family::Poisson && theta == 0.0) {
    *atom = 0;
    return true;
  }
  return false;
}

long long hypergeom_support_min(const DistributionSpec& spec, long long M) {
  return std::max<long long>(0, spec.n_samples - (spec.population - M));
}

long long hypergeom_support_max(const DistributionSpec& spec, long long M) {
  return std::min(spec.n_samples, M);
}

long double log_pmf(const DistributionSpec& spec, double theta, long long k) {
  using detail::log_choose;
  using detail::log_factorial;
  switch (spec.family) {
    case Family::Binomial: {
      const long long n = spec.n_samples;
      if (k < 0 || k > n) return -kInfL;
      return log_choose(n, k) + static_cast<long double>(k) * logl(theta) +
             static_cast<long double>(n - k) * log1pl(-theta);
    }
    case Family::Poisson: {
      if (k < 0) return -kInfL;
      const long double mu =
          static_cast<long double>(spec.n_samples) * theta;
      return static_cast<long double>(k) * logl(mu) - mu - log_factorial(k);
    }
    case Family::NegBinomial: {
      if (k < 0) return -kInfL;
      const long double kr = static_cast<long double>(k) + spec.r;
      return lgammal(kr) - lgammal(static_cast<long double>(spec.r)) -
             log_factorial(k) +
             static_cast<long double>(spec.r) * logl(theta) +
             static_cast<long double>(k) * log1pl(-theta);
    }
    case Family::Hypergeometric: {
      const long long M = llround(theta);
      const long double t = log_choose(M, k) +
                            log_choose(spec.population - M, spec.n_samples - k);
      if (t == -kInfL) return -kInfL;
      return t - log_choose(spec.population, spec.n_samples);
    }
  }
  return -kInfL;
}

double pmf_unchecked(const DistributionSpec& spec, double theta, long long k) {
  long long atom = 0;
  if (degenerate_atom(spec, theta, &atom)) return k == atom ? 1.0 : 0.0;
  const long double lp = log_pmf(spec, theta, k);
  if (lp == -kInfL) return 0.0;
  return static_cast<double>(expl(lp));
}

/// pmf(k+1) / pmf(k), valid when both k and k+1 are inside the support.
double ratio_up(const DistributionSpec& spec, double theta, long long k) {
  switch (spec.family) {
    case Family::Binomial:
      return (static_cast<double>(spec.n_samples - k) / (k + 1)) *
             (theta / (1.0 - theta));
    case Family::Poisson:
      return (static_cast<double>(spec.n_samples) * theta) / (k + 1);
    case Family::NegBinomial:
      return ((k + spec.r) / (k + 1)) * (1.0 - theta);
    case Family::Hypergeometric: {
      const long long M = llround(theta);
      const long long N = spec.population;
      const long long n = spec.n_samples;
      return (static_cast<double>(M - k) * (n - k)) /
             (static_cast<double>(k + 1) * (N - M - n + k + 1));
    }
  }
  return 0.0;
}

/// pmf(k-1) / pmf(k), valid when both k and k-1 are inside the support.
double ratio_down(const DistributionSpec& spec, double theta, long long k) {
  switch (spec.family) {
    case Family::Binomial:
      return (static_cast<double>(k) / (spec.n_samples - k + 1)) *
             ((1.0 - theta) / theta);
    case Family::Poisson:
      return static_cast<double>(k) /
             (static_cast<double>(spec.n_samples) * theta);
    case Family::NegBinomial:
      return static_cast<double>(k) / ((k - 1 + spec.r) * (1.0 - theta));
    case Family::Hypergeometric: {
      const long long M = llround(theta);
      const long long N = spec.population;
      const long long n = spec.n_samples;
      return (static_cast<double>(k) * (N - M - n + k)) /
             (static_cast<double>(M - k + 1) * (n - k + 1));
    }
  }
  return 0.0;
}

struct SupportWindow {
  long long lo = 0;
  long long hi = -1;  // empty when hi < lo
};

/// Intersection of [lo, hi] with the support at theta.
SupportWindow clip_to_support(const DistributionSpec& spec, double theta,
                              long long lo, long long hi) {
  SupportWindow w;
  w.lo = std::max<long long>(lo, 0);
  w.hi = hi;
  if (spec.family == Family::Binomial) {
    w.hi = std::min(w.hi, spec.n_samples);
  } else if (spec.family == Family::Hypergeometric) {
    const long long M = llround(theta);
    w.lo = std::max(w.lo, hypergeom_support_min(spec, M));
    w.hi = std::min(w.hi, hypergeom_support_max(spec, M));
  }
  return w;
}

/// Kahan-compensated sum of pmf over [lo, hi] (assumed inside the support),
/// walking outward from the mode.  Terms decrease away from the mode, so
/// once a term falls below acc * 1e-17 on a side, the rest of that side is
/// dropped; the neglected remainder is below the 1e-13 absolute contract.
double window_sum(const DistributionSpec& spec, double theta, long long lo,
                  long long hi) {
  if (hi < lo) return 0.0;
  long long atom = 0;
  if (degenerate_atom(spec, theta, &atom))
    return (lo <= atom && atom <= hi) ? 1.0 : 0.0;

  const long long anchor =
      std::clamp(detail::distribution_mode(spec, theta), lo, hi);
  const double anchor_p = pmf_unchecked(spec, theta, anchor);

  double sum = anchor_p;
  double comp = 0.0;
  auto add = [&sum, &comp](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };

  double term = anchor_p;
  for (long long k = anchor + 1; k <= hi; ++k) {
    term *= ratio_up(spec, theta, k - 1);
    if (term <= 0.0) break;
    add(term);
    if (term < sum * 1e-17) break;
  }
  term = anchor_p;
  for (long long k = anchor - 1; k >= lo; --k) {
    term *= ratio_down(spec, theta, k + 1);
    if (term <= 0.0) break;
    add(term);
    if (term < sum * 1e-17) break;
  }
  return clamp01(sum);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Binomial: return "binomial";
    case Family::Poisson: return "poisson";
    case Family::NegBinomial: return "negbinomial";
    case Family::Hypergeometric: return "hypergeometric";
  }
  return "?";
}

DistributionSpec DistributionSpec::binomial(long long n_trials) {
  DistributionSpec s;
  s.family = Family::Binomial;
  s.n_samples = n_trials;
  s.validate();
  return s;
}

DistributionSpec DistributionSpec::poisson(long long n_samples) {
  DistributionSpec s;
  s.family = Family::Poisson;
  s.n_samples = n_samples;
  s.validate();
  return s;
}

DistributionSpec DistributionSpec::neg_binomial(double r) {
  DistributionSpec s;
  s.family = Family::NegBinomial;
  s.n_samples = 1;
  s.r = r;
  s.validate();
  return s;
}

DistributionSpec DistributionSpec::hypergeometric(long long population,
                                                  long long draws) {
  DistributionSpec s;
  s.family = Family::Hypergeometric;
  s.population = population;
  s.n_samples = draws;
  s.validate();
  return s;
}

void DistributionSpec::validate() const {
  switch (family) {
    case Family::Binomial:
    case Family::Poisson:
      if (n_samples < 1)
        throw ValidationError(family_name(family) +
                              ": n_samples must be >= 1");
      return;
    case Family::NegBinomial:
      if (!(r > 0.0) || !std::isfinite(r))
        throw ValidationError("negbinomial: r must be a positive real");
      if (n_samples != 1)
        throw ValidationError("negbinomial: n_samples is fixed at 1");
      return;
    case Family::Hypergeometric:
      if (population < 1)
        throw ValidationError("hypergeometric: population must be >= 1");
      if (n_samples < 1 || n_samples > population)
        throw ValidationError(
            "hypergeometric: draws must satisfy 0 < n <= N");
      return;
  }
  throw ValidationError("unknown family");
}

long long DistributionSpec::support_max() const {
  if (unbounded_support())
    throw DomainError(family_name(family) + ": support is unbounded");
  return n_samples;
}

std::string DistributionSpec::str() const {
  std::ostringstream os;
  os << family_name(family);
  switch (family) {
    case Family::Binomial:
    case Family::Poisson:
      os << "(n=" << n_samples << ")";
      break;
    case Family::NegBinomial:
      os << "(r=" << r << ")";
      break;
    case Family::Hypergeometric:
      os << "(N=" << population << ", n=" << n_samples << ")";
      break;
  }
  return os.str();
}

void validate_param(const DistributionSpec& spec, double theta) {
  switch (spec.family) {
    case Family::Binomial:
      if (!(theta >= 0.0 && theta <= 1.0))
        throw DomainError("binomial: p must lie in [0, 1]");
      return;
    case Family::Poisson:
      if (!(theta >= 0.0) || !std::isfinite(theta))
        throw DomainError("poisson: lambda must be a finite value >= 0");
      return;
    case Family::NegBinomial:
      if (!(theta > 0.0 && theta < 1.0))
        throw DomainError("negbinomial: p must lie strictly inside (0, 1)");
      return;
    case Family::Hypergeometric: {
      if (!(theta >= 0.0 && theta <= static_cast<double>(spec.population)))
        throw DomainError("hypergeometric: M must lie in [0, N]");
      if (theta != std::floor(theta))
        throw DomainError("hypergeometric: M must be an integer");
      return;
    }
  }
}

namespace detail {

long double log_factorial(long long k) {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(4096);
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = lgammal(static_cast<long double>(i) + 1.0L);
    return t;
  }();
  if (k < 0) return kInfL;  // never a valid argument; keeps callers honest
  if (static_cast<std::size_t>(k) < table.size()) return table[k];
  return lgammal(static_cast<long double>(k) + 1.0L);
}

long double log_choose(long long n, long long k) {
  if (k < 0 || k > n || n < 0) return -kInfL;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

long long distribution_mode(const DistributionSpec& spec, double theta) {
  switch (spec.family) {
    case Family::Binomial: {
      const long long m = static_cast<long long>(
          std::floor((spec.n_samples + 1) * theta));
      return std::clamp<long long>(m, 0, spec.n_samples);
    }
    case Family::Poisson:
      return static_cast<long long>(
          std::floor(static_cast<double>(spec.n_samples) * theta));
    case Family::NegBinomial:
      if (spec.r <= 1.0) return 0;
      return static_cast<long long>(
          std::floor((spec.r - 1.0) * (1.0 - theta) / theta));
    case Family::Hypergeometric: {
      const long long M = llround(theta);
      const long long m = static_cast<long long>(std::floor(
          (static_cast<double>(spec.n_samples) + 1) * (static_cast<double>(M) + 1) /
          (static_cast<double>(spec.population) + 2)));
      return std::clamp(m, hypergeom_support_min(spec, M),
                        hypergeom_support_max(spec, M));
    }
  }
  return 0;
}

long long tail_guard(const DistributionSpec& spec, double theta) {
  // P{K > guard} < 1e-16: 40 standard deviations past the mode, plus a
  // constant that covers the small-mean regime, plus a geometric-envelope
  // term for the negative binomial where p is small.
  switch (spec.family) {
    case Family::Binomial:
      return spec.n_samples;
    case Family::Poisson: {
      const double mu = static_cast<double>(spec.n_samples) * theta;
      return distribution_mode(spec, theta) +
             static_cast<long long>(std::ceil(40.0 * std::sqrt(mu))) + 30;
    }
    case Family::NegBinomial: {
      const double sigma = std::sqrt(spec.r * (1.0 - theta)) / theta;
      const double geom = 46.0 / -std::log1p(-theta);
      return distribution_mode(spec, theta) +
             static_cast<long long>(std::ceil(std::max(40.0 * sigma, geom))) +
             30;
    }
    case Family::Hypergeometric:
      return spec.n_samples;
  }
  return 0;
}

}  // namespace detail

double pmf(const DistributionSpec& spec, double theta, long long k) {
  spec.validate();
  validate_param(spec, theta);
  return pmf_unchecked(spec, theta, k);
}

double cdf(const DistributionSpec& spec, double theta, long long k) {
  spec.validate();
  validate_param(spec, theta);
  if (k < 0) return 0.0;
  long long hi = k;
  if (spec.unbounded_support()) {
    const long long guard = detail::tail_guard(spec, theta);
    if (k >= guard) return 1.0;  // remaining tail < 1e-16
  }
  const SupportWindow w = clip_to_support(spec, theta, 0, hi);
  return window_sum(spec, theta, w.lo, w.hi);
}

double interval_prob(const DistributionSpec& spec, double theta,
                     const KIndexInterval& range) {
  spec.validate();
  validate_param(spec, theta);
  if (range.empty()) return 0.0;
  if (!range.lo())
    throw DomainError("interval_prob: unbounded lower end (the support is "
                      "bounded below)");
  if (!range.hi() && !spec.unbounded_support())
    throw DomainError("interval_prob: unbounded range on bounded-support "
                      "family " + family_name(spec.family));

  const long long lo = *range.lo();
  if (!range.hi()) {
    // P{K >= lo} = 1 - cdf(lo - 1); when lo sits past the mode the
    // complement cancels badly, so the tail is summed directly instead.
    if (lo <= 0) return 1.0;
    long long atom = 0;
    if (degenerate_atom(spec, theta, &atom)) return lo <= atom ? 1.0 : 0.0;
    const long long mode = detail::distribution_mode(spec, theta);
    if (lo - 1 <= mode) return clamp01(1.0 - cdf(spec, theta, lo - 1));
    const long long stop = std::max(detail::tail_guard(spec, theta), lo) + 128;
    return window_sum(spec, theta, lo, stop);
  }

  long long hi = *range.hi();
  if (hi < lo) throw ValidationError("interval_prob: k_lo > k_hi");
  if (spec.unbounded_support())
    hi = std::min(hi, std::max(detail::tail_guard(spec, theta), lo) + 128);
  const SupportWindow w = clip_to_support(spec, theta, lo, hi);
  if (!spec.unbounded_support()) {
    // a range swallowing the whole support has probability exactly one
    const SupportWindow full =
        clip_to_support(spec, theta, 0, spec.support_max());
    if (w.lo <= full.lo && w.hi >= full.hi) return 1.0;
  }
  return window_sum(spec, theta, w.lo, w.hi);
}

std::vector<double> pmf_window(const DistributionSpec& spec, double theta,
                               long long k_lo, long long k_hi) {
  spec.validate();
  validate_param(spec, theta);
  if (k_hi < k_lo) return {};
  std::vector<double> out(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);

  long long atom = 0;
  if (degenerate_atom(spec, theta, &atom)) {
    if (k_lo <= atom && atom <= k_hi) out[atom - k_lo] = 1.0;
    return out;
  }

  const SupportWindow w = clip_to_support(spec, theta, k_lo, k_hi);
  if (w.hi < w.lo) return out;
  const long long anchor =
      std::clamp(detail::distribution_mode(spec, theta), w.lo, w.hi);
  const double anchor_p = pmf_unchecked(spec, theta, anchor);
  out[anchor - k_lo] = anchor_p;
  double term = anchor_p;
  for (long long k = anchor + 1; k <= w.hi && term > 0.0; ++k) {
    term *= ratio_up(spec, theta, k - 1);
    out[k - k_lo] = term;
  }
  term = anchor_p;
  for (long long k = anchor - 1; k >= w.lo && term > 0.0; --k) {
    term *= ratio_down(spec, theta, k + 1);
    out[k - k_lo] = term;
  }
  return out;
}

double t_weight(long long k, long long M, long long N, long long n) {
  if (!(0 <= M && M < N))
    throw DomainError("t_weight: requires 0 <= M < N");
  if (!(0 < n && n <= N))
    throw DomainError("t_weight: requires 0 < n <= N");
  const long double t = detail::log_choose(M, k) +
                        detail::log_choose(N - M - 1, n - k - 1);
  if (t == -kInfL) return 0.0;
  return static_cast<double>(expl(t - detail::log_choose(N, n)));
}

}  // namespace covint
