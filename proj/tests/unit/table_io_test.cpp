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
#include <sstream>
#include <string>

#include <doctest.h>

#include "covint/errors.hpp"
#include "covint/procedures.hpp"

using namespace covint;

namespace {

LoadedProcedure parse(const std::string& text) {
  std::istringstream in(text);
  return parse_procedure_table(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parses a binomial table") {
  const auto loaded = parse(
      "# family=binomial n=2 direction=nondecreasing\n"
      "0,0.0,0.5\n"
      "1,0.2,0.7\n"
      "2,0.4,1.0\n");
  CHECK(loaded.spec.family == Family::Binomial);
  CHECK(loaded.spec.n_samples == 2);
  CHECK(loaded.proc.table_k_max() == 2);
  CHECK(loaded.proc.lower(1) == 0.2);
  CHECK(!loaded.proc.unbounded_support());
}

TEST_CASE("parses a poisson table with a tail line") {
  const auto loaded = parse(
      "# family=poisson n=2 direction=nondecreasing\n"
      "0,0.0,1.5\n"
      "1,0.3,2.5\n"
      "2,0.8,3.5\n"
      "tail,inf,inf\n");
  CHECK(loaded.spec.family == Family::Poisson);
  CHECK(loaded.proc.unbounded_support());
  CHECK(std::isinf(loaded.proc.lower_tail_limit()));
}

TEST_CASE("parse diagnostics name the offending line") {
  CHECK(error_of("") .find("header") != std::string::npos);
  CHECK(error_of("family=binomial n=1 direction=nondecreasing\n0,0,1\n1,0,1\n")
            .find("'#'") != std::string::npos);
  CHECK(error_of("# family=binomial direction=nondecreasing\n0,0,1\n")
            .find("missing n=") != std::string::npos);
  CHECK(error_of("# family=weibull n=2 direction=nondecreasing\n0,0,1\n")
            .find("unknown family") != std::string::npos);

  // k must ascend from 0 with no gaps; the message carries the line number
  const std::string gap = error_of(
      "# family=binomial n=2 direction=nondecreasing\n"
      "0,0.0,0.5\n"
      "2,0.4,1.0\n");
  CHECK(gap.find("line 3") != std::string::npos);
  CHECK(gap.find("k out of order") != std::string::npos);

  CHECK(error_of("# family=binomial n=2 direction=nondecreasing\n"
                 "0,0.0,0.5\n1,0.2,0.7\n2,x,1.0\n")
            .find("line 4") != std::string::npos);

  // row count must match the support
  CHECK(error_of("# family=binomial n=3 direction=nondecreasing\n"
                 "0,0.0,0.5\n1,0.2,0.7\n2,0.4,1.0\n")
            .find("4 data rows") != std::string::npos);

  // tail rules
  CHECK(error_of("# family=poisson n=1 direction=nondecreasing\n0,0.0,1.5\n")
            .find("tail") != std::string::npos);
  CHECK(error_of("# family=binomial n=1 direction=nondecreasing\n"
                 "0,0.0,0.5\n1,0.2,0.7\ntail,inf,inf\n")
            .find("tail") != std::string::npos);

  // hypergeometric bounds must be integers
  CHECK(error_of("# family=hypergeometric N=6 n=2 direction=nondecreasing\n"
                 "0,0.5,3\n1,1,4\n2,2,5\n")
            .find("integer") != std::string::npos);

  // table invariants surface as validation errors too
  CHECK(error_of("# family=binomial n=1 direction=nondecreasing\n"
                 "0,0.3,0.2\n1,0.4,0.5\n")
            .find("L(0) > U(0)") != std::string::npos);
}

TEST_CASE("negbinomial header needs r") {
  CHECK(error_of("# family=negbinomial n=1 direction=nondecreasing\n"
                 "0,0.1,0.5\ntail,1,1\n")
            .find("missing r=") != std::string::npos);
  const auto loaded = parse(
      "# family=negbinomial n=1 r=2.5 direction=nondecreasing\n"
      "0,0.1,0.5\n"
      "1,0.2,0.6\n"
      "tail,1,1\n");
  CHECK(loaded.spec.family == Family::NegBinomial);
  CHECK(loaded.spec.r == 2.5);
}

TEST_CASE("write then parse reproduces the exact doubles") {
  const auto spec = DistributionSpec::binomial(6);
  const auto cp = IntervalProcedure::clopper_pearson(6, 0.05);
  std::ostringstream out;
  write_procedure_table(out, spec, cp);
  const auto loaded = parse(out.str());
  CHECK(loaded.spec.family == Family::Binomial);
  CHECK(loaded.spec.n_samples == 6);
  for (long long k = 0; k <= 6; ++k) {
    CHECK(loaded.proc.lower(k) == cp.lower(k));
    CHECK(loaded.proc.upper(k) == cp.upper(k));
  }
}

TEST_CASE("load_procedure_table reports the path") {
  try {
    load_procedure_table("/nonexistent/proc.csv");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/proc.csv") !=
          std::string::npos);
  }
}
