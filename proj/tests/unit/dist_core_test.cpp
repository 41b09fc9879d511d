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
#include <random>

#include <doctest.h>

#include "covint/dist_core.hpp"
#include "covint/errors.hpp"
#include "covint/hypergeom_exact.hpp"

using namespace covint;

namespace {

double unif(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Independent Poisson upper-tail: every term evaluated from scratch in
/// long double, summed until it stops mattering at 1e-15 relative.
double poisson_tail_series(double mu, long long k_from) {
  long double sum = 0.0L;
  for (long long k = k_from;; ++k) {
    const long double term =
        expl(static_cast<long double>(k) * logl(static_cast<long double>(mu)) -
             static_cast<long double>(mu) -
             lgammal(static_cast<long double>(k) + 1.0L));
    sum += term;
    if (k > static_cast<long long>(mu) && term < sum * 1e-15L) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("pmf matches hand values") {
  CHECK(pmf(DistributionSpec::binomial(2), 0.5, 1) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // degenerate p = 0 and p = 1 are exact point masses
  const auto b10 = DistributionSpec::binomial(10);
  CHECK(pmf(b10, 0.0, 0) == 1.0);
  CHECK(pmf(b10, 0.0, 3) == 0.0);
  CHECK(pmf(b10, 1.0, 10) == 1.0);
  CHECK(pmf(b10, 1.0, 9) == 0.0);
  CHECK(pmf(DistributionSpec::poisson(3), 0.0, 0) == 1.0);
  CHECK(pmf(DistributionSpec::poisson(3), 0.0, 1) == 0.0);

  // C(2,1) C(2,1) / C(4,2) = 4/6
  CHECK(pmf(DistributionSpec::hypergeometric(4, 2), 2.0, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // outside the support
  CHECK(pmf(b10, 0.4, -1) == 0.0);
  CHECK(pmf(b10, 0.4, 11) == 0.0);
  CHECK(pmf(DistributionSpec::hypergeometric(10, 4), 2.0, 3) == 0.0);
}

TEST_CASE("pmf relative accuracy against exact rationals") {
  using exact::BigInt;
  using exact::Rational;

  // binomial n = 1000 with dyadic p, exact by rational powers
  const long long n = 1000;
  const auto spec = DistributionSpec::binomial(n);
  const Rational p(403, 1024);
  const Rational q = 1 - p;
  for (long long k : {0LL, 5LL, 250LL, 500LL, 900LL, 1000LL}) {
    Rational v = Rational(exact::binom(n, k));
    for (long long i = 0; i < k; ++i) v *= p;
    for (long long i = 0; i < n - k; ++i) v *= q;
    const double want = v.convert_to<double>();
    const double got = pmf(spec, 403.0 / 1024.0, k);
    if (want >= 1e-300) {
      CHECK(std::abs(got - want) <= 1e-13 * want);
    }
  }

  // hypergeometric N = 300
  const auto hg = DistributionSpec::hypergeometric(300, 150);
  const exact::HypergeomExact H(300, 150);
  for (long long k : {0LL, 30LL, 58LL, 80LL, 117LL}) {
    const double want = H.pmf(117, k).convert_to<double>();
    const double got = pmf(hg, 117.0, k);
    if (want >= 1e-300) CHECK(std::abs(got - want) <= 1e-13 * want);
  }
}

TEST_CASE("interval_prob basics") {
  const auto b5 = DistributionSpec::binomial(5);
  CHECK(interval_prob(b5, 0.3, KIndexInterval::empty_range()) == 0.0);
  CHECK(interval_prob(b5, 0.3, KIndexInterval::bounded(0, 5)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(interval_prob(b5, 0.3, KIndexInterval::bounded(2, 2)) ==
        doctest::Approx(pmf(b5, 0.3, 2)).epsilon(1e-14));

  // P{K >= 4 | mu = 3} through the cdf complement vs a direct series
  const auto po = DistributionSpec::poisson(2);
  const double got = interval_prob(po, 1.5, KIndexInterval::at_least(4));
  CHECK(std::abs(got - poisson_tail_series(3.0, 4)) <= 1e-13);

  // unbounded range on a bounded support is a domain error
  CHECK_THROWS_AS(interval_prob(b5, 0.3, KIndexInterval::at_least(1)),
                  DomainError);
  CHECK_THROWS_AS(
      interval_prob(DistributionSpec::hypergeometric(6, 3), 2.0,
                    KIndexInterval::at_least(0)),
      DomainError);
}

TEST_CASE("poisson deep tails stay accurate") {
  const auto po = DistributionSpec::poisson(1);
  for (double lam : {0.05, 1.0, 7.5, 40.0}) {
    for (long long k : {1LL, 3LL, 10LL, 60LL, 120LL}) {
      const double got = interval_prob(po, lam, KIndexInterval::at_least(k));
      const double want = poisson_tail_series(lam, k);
      CHECK(std::abs(got - want) <= 1e-12);
      if (want > 1e-250) CHECK(std::abs(got - want) <= 1e-12 * std::max(want, 1e-30));
    }
  }
}

TEST_CASE("normalization and cdf monotonicity on random specs") {
  std::mt19937_64 g(20260809);
  for (int trial = 0; trial < 120; ++trial) {
    DistributionSpec spec;
    double theta = 0.0;
    switch (trial % 4) {
      case 0:
        spec = DistributionSpec::binomial(1 + static_cast<long long>(unif(g) * 400));
        theta = unif(g);
        break;
      case 1:
        spec = DistributionSpec::poisson(1 + static_cast<long long>(unif(g) * 4));
        theta = 25.0 * unif(g);
        break;
      case 2:
        spec = DistributionSpec::neg_binomial(0.2 + 5.0 * unif(g));
        theta = 0.05 + 0.9 * unif(g);
        break;
      default: {
        const long long N = 1 + static_cast<long long>(unif(g) * 200);
        const long long n = 1 + static_cast<long long>(unif(g) * N);
        spec = DistributionSpec::hypergeometric(N, std::min(n, N));
        theta = std::floor(unif(g) * (N + 1));
        break;
      }
    }
    const long long hi = spec.unbounded_support()
                             ? detail::tail_guard(spec, theta)
                             : spec.support_max();
    double total = 0.0;
    for (double v : pmf_window(spec, theta, 0, hi)) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-12);

    double prev = -1.0;
    for (long long k = 0; k <= std::min<long long>(hi, 64); ++k) {
      const double c = cdf(spec, theta, k);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
    CHECK(cdf(spec, theta, hi) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("t_weight convention and values") {
  CHECK(t_weight(-1, 2, 10, 3) == 0.0);
  CHECK(t_weight(5, 2, 10, 3) == 0.0);  // k > M
  // C(0,0) C(9,2) / C(10,3) = 36/120
  CHECK(t_weight(0, 0, 10, 3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK_THROWS_AS(t_weight(1, 10, 10, 3), DomainError);  // M < N required
  CHECK_THROWS_AS(t_weight(1, 2, 10, 0), DomainError);
}

TEST_CASE("t_weight equals the cdf decrement (exact oracle, N=20 n=6)") {
  const long long N = 20, n = 6;
  const exact::HypergeomExact H(N, n);
  const auto spec = DistributionSpec::hypergeometric(N, n);
  for (long long M = 0; M < N; ++M) {
    for (long long k = -1; k <= n + 1; ++k) {
      const exact::BigInt exact_t = H.cdf_num(M, k) - H.cdf_num(M + 1, k);
      const double want =
          exact::Rational(exact_t, H.denominator()).convert_to<double>();
      CHECK(std::abs(t_weight(k, M, N, n) - want) <= 1e-12);
      const double via_cdf = cdf(spec, static_cast<double>(M), k) -
                             cdf(spec, static_cast<double>(M + 1), k);
      CHECK(std::abs(via_cdf - t_weight(k, M, N, n)) <= 1e-12);
    }
  }
}

TEST_CASE("float kernels satisfy both interval identities up to N = 100") {
  long long bad = 0;
  std::string first;
  for (long long N = 1; N <= 100 && bad == 0; ++N) {
    for (long long n = 1; n <= N; ++n) {
      const auto spec = DistributionSpec::hypergeometric(N, n);

      // cdf over k = 0..n for every M, one window pass each
      std::vector<std::vector<double>> cdf_tab(N + 1);
      for (long long M = 0; M <= N; ++M) {
        const auto win = pmf_window(spec, static_cast<double>(M), 0, n);
        cdf_tab[M].resize(n + 1);
        double acc = 0.0;
        for (long long k = 0; k <= n; ++k) {
          acc += win[k];
          cdf_tab[M][k] = acc;
        }
      }
      auto cdf_at = [&](long long M, long long k) {
        if (k < 0) return 0.0;
        return cdf_tab[M][std::min(k, n)];
      };
      // t_weight table: k in [-2, n+2], M in [0, N-1]
      std::vector<std::vector<double>> t_tab(n + 5,
                                             std::vector<double>(N));
      for (long long k = -2; k <= n + 2; ++k)
        for (long long M = 0; M < N; ++M)
          t_tab[k + 2][M] = t_weight(k, M, N, n);

      for (long long M = 0; M < N && bad == 0; ++M) {
        for (long long k = -1; k <= n + 1; ++k) {
          const double lhs = cdf_at(M, k) - cdf_at(M + 1, k);
          if (std::abs(lhs - t_tab[k + 2][M]) > 1e-12) {
            ++bad;
            first = "cdf-shift N=" + std::to_string(N) +
                    " n=" + std::to_string(n) + " M=" + std::to_string(M) +
                    " k=" + std::to_string(k);
            break;
          }
        }
      }
      for (long long M = 1; M <= N && bad == 0; ++M) {
        for (long long k = -1; k <= n + 1 && bad == 0; ++k) {
          const double base = cdf_at(M, k - 1) - cdf_at(M - 1, k - 1);
          for (long long l = k; l <= n + 1; ++l) {
            const double lhs = (cdf_at(M, l) - cdf_at(M - 1, l)) - base;
            const double rhs = t_tab[k + 1][M - 1] - t_tab[l + 2][M - 1];
            if (std::abs(lhs - rhs) > 1e-12) {
              ++bad;
              first = "interval-difference N=" + std::to_string(N) +
                      " n=" + std::to_string(n) + " M=" + std::to_string(M) +
                      " k=" + std::to_string(k) + " l=" + std::to_string(l);
              break;
            }
          }
        }
      }
    }
  }
  CHECK_MESSAGE(bad == 0, first);
}

TEST_CASE("spec and parameter validation") {
  CHECK_THROWS_AS(DistributionSpec::binomial(0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::neg_binomial(0.0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::hypergeometric(5, 6), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::hypergeometric(5, 0), ValidationError);

  const auto nb = DistributionSpec::neg_binomial(2.0);
  CHECK_THROWS_AS(validate_param(nb, 0.0), DomainError);
  CHECK_THROWS_AS(validate_param(nb, 1.0), DomainError);
  validate_param(nb, 0.5);

  const auto hg = DistributionSpec::hypergeometric(10, 4);
  CHECK_THROWS_AS(validate_param(hg, 2.5), DomainError);
  CHECK_THROWS_AS(validate_param(hg, 11.0), DomainError);
  validate_param(hg, 10.0);

  CHECK_THROWS_AS(validate_param(DistributionSpec::binomial(3), 1.5),
                  DomainError);
  CHECK_THROWS_AS(validate_param(DistributionSpec::poisson(1), -0.1),
                  DomainError);
}
