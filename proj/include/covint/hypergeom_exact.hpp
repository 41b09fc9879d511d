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

#ifndef COVINT_HYPERGEOM_EXACT_HPP
#define COVINT_HYPERGEOM_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace covint::exact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C(n, k) with the zero convention for k < 0 or k > n.
BigInt binom(long long n, long long k);

/// Exact hypergeometric arithmetic for one (N, n), used only by oracle and
/// test suites (N <= 300 by the resource guard of check_hypergeom_identities; larger
/// N merely costs time and memory).
///
/// Every probability is represented by its integer numerator over the
/// common denominator C(N, n), so identities and comparisons are exact
/// integer statements.
class HypergeomExact {
 public:
  HypergeomExact(long long population, long long draws);

  long long population() const { return N_; }
  long long draws() const { return n_; }

  const BigInt& denominator() const { return denom_; }

  /// Numerator of P{K = k | M}: C(M,k) C(N-M, n-k), zero off support.
  const BigInt& pmf_num(long long M, long long k) const;

  /// Numerator of P{K <= k | M}; 0 for k < 0, C(N,n) for k >= n.
  const BigInt& cdf_num(long long M, long long k) const;

  /// Numerator of P{k <= K <= l | M}; zero when k > l.
  BigInt interval_num(long long M, long long k, long long l) const;

  /// Numerator of T(k, M, N, n) = C(M,k) C(N-M-1, n-k-1) / C(N,n) for
  /// 0 <= M < N, any integer k.  `second_arg_bias` shifts the second
  /// binomial's lower argument; nonzero only for fault-injection tests.
  BigInt t_num(long long k, long long M, int second_arg_bias = 0) const;

  Rational pmf(long long M, long long k) const;
  Rational interval_prob(long long M, long long k, long long l) const;

 private:
  long long N_;
  long long n_;
  BigInt denom_;
  BigInt zero_;
  std::vector<std::vector<BigInt>> choose_;   // C(m, z), m <= N
  std::vector<std::vector<BigInt>> pmf_num_;  // [M][k]
  std::vector<std::vector<BigInt>> cdf_num_;  // [M][k]
};

}  // namespace covint::exact

#endif  // COVINT_HYPERGEOM_EXACT_HPP
