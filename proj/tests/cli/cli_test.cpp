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

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "covint/critical_set.hpp"
#include "covint/procedures.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string cli_path() {
  const char* p = std::getenv("COVINT_CLI");
  REQUIRE_MESSAGE(p != nullptr, "COVINT_CLI must point at the binary");
  return p;
}

RunResult run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

/// Value of the first "key: value" line with the given key.
std::string field(const std::string& output, const std::string& key) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return "";
}

int count_lines_with_prefix(const std::string& output,
                            const std::string& prefix) {
  std::istringstream in(output);
  std::string line;
  int n = 0;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("analyze clopper-pearson reports a valid infimum") {
  const auto r = run(
      "analyze --family binomial --n 10 --method clopper-pearson "
      "--delta 0.05 --range 0.01:0.99 --bounds closed");
  CHECK(r.exit_code == 0);
  CHECK(field(r.output, "family") == "binomial(n=10)");
  CHECK(field(r.output, "bounds") == "closed");
  const double inf = std::stod(field(r.output, "infimum"));
  CHECK(inf >= 0.95);
  CHECK(field(r.output, "attained") != "");
}

TEST_CASE("analyze rejects a reversed range with exit 2") {
  const auto r = run(
      "analyze --family binomial --n 5 --method clopper-pearson "
      "--range 0.9:0.1");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("range: a must be < b") != std::string::npos);
}

TEST_CASE("analyze a hypergeometric table lists the critical set") {
  const std::string path = "/tmp/covint_cli_hg.csv";
  {
    std::ofstream f(path);
    f << "# family=hypergeometric N=10 n=4 direction=nondecreasing\n"
         "0,0,3\n1,1,5\n2,3,7\n3,5,9\n4,7,10\n";
  }
  const auto r = run("analyze --family hypergeometric --N 10 --n 4 --table " +
                     path + " --range 0:10 --bounds open");
  CHECK(r.exit_code == 0);
  CHECK(field(r.output, "critical_points") == "7");
  CHECK(r.output.find("theta=1 provenance=L(1)") != std::string::npos);
  CHECK(r.output.find("theta=9 provenance=U(3)") != std::string::npos);

  // decimals are rejected for the integer parameter
  const auto bad = run("analyze --table " + path + " --range 0.5:10");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("integer") != std::string::npos);
}

TEST_CASE("analyze --bounds both emits two blocks") {
  const auto r = run(
      "analyze --family binomial --n 6 --method clopper-pearson "
      "--delta 0.1 --range 0.05:0.95 --bounds both");
  CHECK(r.exit_code == 0);
  CHECK(count_lines_with_prefix(r.output, "bounds: ") == 2);
  CHECK(count_lines_with_prefix(r.output, "infimum: ") == 2);
}

TEST_CASE("table round trip reproduces the built-in verdict") {
  const std::string path = "/tmp/covint_cli_cp8.csv";
  {
    const auto spec = covint::DistributionSpec::binomial(8);
    const auto cp = covint::IntervalProcedure::clopper_pearson(8, 0.05);
    std::ofstream f(path);
    covint::write_procedure_table(f, spec, cp);
  }
  const auto via_table =
      run("analyze --table " + path + " --range 0.02:0.98 --bounds both");
  const auto via_builtin = run(
      "analyze --family binomial --n 8 --method clopper-pearson "
      "--delta 0.05 --range 0.02:0.98 --bounds both");
  CHECK(via_table.exit_code == 0);
  CHECK(via_builtin.exit_code == 0);
  // identical infima, witnesses and critical points; only the procedure
  // label differs
  std::istringstream a(via_table.output), b(via_builtin.output);
  std::string la, lb;
  while (std::getline(a, la) && std::getline(b, lb)) {
    if (la.rfind("procedure: ", 0) == 0) continue;
    CHECK(la == lb);
  }
}

TEST_CASE("flag / table conflicts are rejected") {
  const std::string path = "/tmp/covint_cli_b3.csv";
  {
    std::ofstream f(path);
    f << "# family=binomial n=3 direction=nondecreasing\n"
         "0,0.0,0.4\n1,0.1,0.6\n2,0.2,0.8\n3,0.3,1.0\n";
  }
  CHECK(run("analyze --table " + path + " --range 0.1:0.9").exit_code == 0);
  const auto r = run("analyze --family poisson --table " + path +
                     " --range 0.1:0.9");
  CHECK(r.exit_code == 2);
  CHECK(run("analyze --n 4 --table " + path + " --range 0.1:0.9").exit_code ==
        2);
  CHECK(run("analyze --range 0.1:0.9").exit_code == 2);
  CHECK(run("analyze --table " + path +
            " --method clopper-pearson --range 0.1:0.9")
            .exit_code == 2);
}

TEST_CASE("incomplete tail tables exit 3") {
  const std::string path = "/tmp/covint_cli_po.csv";
  {
    std::ofstream f(path);
    f << "# family=poisson n=1 direction=nondecreasing\n"
         "0,0.0,1.0\n1,0.2,2.0\n2,0.5,3.0\ntail,inf,inf\n";
  }
  // range reaching past L(2) = 0.5 cannot be certified
  const auto r = run("analyze --table " + path + " --range 0.1:2.5");
  CHECK(r.exit_code == 3);
  // inside the certified region everything works
  CHECK(run("analyze --table " + path + " --range 0.1:0.45").exit_code == 0);
}

TEST_CASE("curve output matches its contract") {
  const std::string out = "/tmp/covint_cli_curve.csv";
  const auto r = run(
      "curve --family binomial --n 6 --method clopper-pearson --delta 0.1 "
      "--range 0.05:0.95 --points 50 --out " + out);
  CHECK(r.exit_code == 0);

  std::ifstream f(out);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "theta,coverage,breakpoint");
  std::vector<std::string> rows;
  std::string line;
  double min_cov = 2.0;
  while (std::getline(f, line)) {
    rows.push_back(line);
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    min_cov = std::min(min_cov, std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  // 50 uniform points plus deduplicated interior critical points
  const auto cp = covint::IntervalProcedure::clopper_pearson(6, 0.1);
  const auto cs = covint::breakpoints_continuous(cp, 0.05, 0.95);
  CHECK(rows.size() == 50 + cs.points.size() - 2);

  const auto analyzed = run(
      "analyze --family binomial --n 6 --method clopper-pearson --delta 0.1 "
      "--range 0.05:0.95 --bounds closed");
  const double inf = std::stod(field(analyzed.output, "infimum"));
  CHECK(min_cov >= inf - 1e-12);

  const auto bad = run(
      "curve --family binomial --n 6 --method clopper-pearson "
      "--range 0.05:0.95 --out /nonexistent-dir/x.csv");
  CHECK(bad.exit_code == 4);
}

TEST_CASE("verify is deterministic and catches injected faults") {
  const auto r1 = run("verify --seed 42 --cases 25");
  const auto r2 = run("verify --seed 42 --cases 25");
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
  CHECK(r1.output.find("result: PASS") != std::string::npos);

  const auto faulty = run("verify --seed 42 --cases 25 --inject-fault");
  CHECK(faulty.exit_code == 1);
  CHECK(faulty.output.find("result: FAIL") != std::string::npos);
}

TEST_CASE("point query a == b") {
  const auto r = run(
      "analyze --family binomial --n 4 --method clopper-pearson "
      "--range 0.3:0.3 --bounds both");
  CHECK(r.exit_code == 0);
  CHECK(count_lines_with_prefix(r.output, "infimum: ") == 2);
}
