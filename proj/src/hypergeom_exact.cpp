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

#include "covint/hypergeom_exact.hpp"

#include "covint/errors.hpp"

namespace covint::exact {

BigInt binom(long long n, long long k) {
  if (k < 0 || k > n || n < 0) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: a product of i consecutive integers is divisible by i!
  }
  return r;
}

HypergeomExact::HypergeomExact(long long population, long long draws)
    : N_(population), n_(draws), zero_(0) {
  if (!(0 < n_ && n_ <= N_))
    throw ValidationError("HypergeomExact: requires 0 < n <= N");

  choose_.resize(N_ + 1);
  for (long long m = 0; m <= N_; ++m) {
    choose_[m].assign(m + 1, BigInt(0));
    choose_[m][0] = 1;
    for (long long z = 1; z <= m; ++z)
      choose_[m][z] =
          choose_[m - 1][z - 1] + (z <= m - 1 ? choose_[m - 1][z] : BigInt(0));
  }
  denom_ = choose_[N_][n_];

  pmf_num_.resize(N_ + 1);
  cdf_num_.resize(N_ + 1);
  for (long long M = 0; M <= N_; ++M) {
    pmf_num_[M].assign(n_ + 1, BigInt(0));
    cdf_num_[M].assign(n_ + 1, BigInt(0));
    BigInt acc = 0;
    for (long long k = 0; k <= n_; ++k) {
      if (k <= M && n_ - k <= N_ - M)
        pmf_num_[M][k] = choose_[M][k] * choose_[N_ - M][n_ - k];
      acc += pmf_num_[M][k];
      cdf_num_[M][k] = acc;
    }
    if (cdf_num_[M][n_] != denom_)
      throw Error("HypergeomExact: pmf numerators do not sum to C(N, n)");
  }
}

const BigInt& HypergeomExact::pmf_num(long long M, long long k) const {
  if (k < 0 || k > n_) return zero_;
  return pmf_num_[M][k];
}

const BigInt& HypergeomExact::cdf_num(long long M, long long k) const {
  if (k < 0) return zero_;
  if (k > n_) k = n_;
  return cdf_num_[M][k];
}

BigInt HypergeomExact::interval_num(long long M, long long k,
                                    long long l) const {
  if (k > l) return BigInt(0);
  return cdf_num(M, l) - cdf_num(M, k - 1);
}

BigInt HypergeomExact::t_num(long long k, long long M,
                             int second_arg_bias) const {
  if (M < 0 || M >= N_) return BigInt(0);
  if (k < 0 || k > M) return BigInt(0);
  const long long m2 = N_ - M - 1;
  const long long z2 = n_ - k - 1 + second_arg_bias;
  if (z2 < 0 || z2 > m2) return BigInt(0);
  return choose_[M][k] * choose_[m2][z2];
}

Rational HypergeomExact::pmf(long long M, long long k) const {
  return Rational(pmf_num(M, k), denom_);
}

Rational HypergeomExact::interval_prob(long long M, long long k,
                                       long long l) const {
  return Rational(interval_num(M, k, l), denom_);
}

}  // namespace covint::exact
