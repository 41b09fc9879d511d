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

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "covint/errors.hpp"
#include "covint/procedures.hpp"

namespace covint {

namespace {

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line_no) + ": " + msg);
}

double parse_real(const std::string& tok, int line_no, const char* what) {
  if (tok == "inf" || tok == "+inf")
    return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(line_no, std::string("cannot parse ") + what + " '" + tok + "'");
  }
}

long long parse_int(const std::string& tok, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(line_no, std::string("cannot parse ") + what + " '" + tok + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

LoadedProcedure parse_procedure_table(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) fail(1, "empty file; expected a header line");
  ++line_no;
  if (line.rfind("#", 0) != 0)
    fail(line_no, "header must start with '#'");

  std::map<std::string, std::string> kv;
  {
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        fail(line_no, "header token '" + tok + "' is not key=value");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  auto need = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end())
      fail(line_no, std::string("header is missing ") + key + "=");
    return it->second;
  };

  const std::string fam = need("family");
  const std::string dir_s = need("direction");
  Direction direction;
  if (dir_s == "nondecreasing")
    direction = Direction::NonDecreasing;
  else if (dir_s == "nonincreasing")
    direction = Direction::NonIncreasing;
  else
    fail(line_no, "direction must be nondecreasing or nonincreasing");

  DistributionSpec spec;
  try {
    if (fam == "binomial") {
      spec = DistributionSpec::binomial(parse_int(need("n"), line_no, "n"));
    } else if (fam == "poisson") {
      spec = DistributionSpec::poisson(parse_int(need("n"), line_no, "n"));
    } else if (fam == "negbinomial") {
      spec = DistributionSpec::neg_binomial(
          parse_real(need("r"), line_no, "r"));
      if (kv.count("n") && parse_int(kv["n"], line_no, "n") != 1)
        fail(line_no, "negbinomial uses a single sample; n must be 1");
    } else if (fam == "hypergeometric") {
      spec = DistributionSpec::hypergeometric(
          parse_int(need("N"), line_no, "N"),
          parse_int(need("n"), line_no, "n"));
    } else {
      fail(line_no, "unknown family '" + fam + "'");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    fail(line_no, e.what());
  }

  std::vector<double> lower, upper;
  bool saw_tail = false;
  double tail_lower = 0.0, tail_upper = 0.0;
  long long expect_k = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 3)
      fail(line_no, "expected 'k,L,U' (3 comma-separated fields), got " +
                        std::to_string(cols.size()));
    if (cols[0] == "tail") {
      if (saw_tail) fail(line_no, "duplicate tail line");
      tail_lower = parse_real(cols[1], line_no, "tail L limit");
      tail_upper = parse_real(cols[2], line_no, "tail U limit");
      saw_tail = true;
      continue;
    }
    if (saw_tail) fail(line_no, "data after the tail line");
    const long long k = parse_int(cols[0], line_no, "k");
    if (k != expect_k)
      fail(line_no, "k out of order: expected " + std::to_string(expect_k) +
                        ", got " + std::to_string(k));
    ++expect_k;
    lower.push_back(parse_real(cols[1], line_no, "L"));
    upper.push_back(parse_real(cols[2], line_no, "U"));
  }
  if (lower.empty()) fail(line_no + 1, "no data rows");

  LoadedProcedure out;
  out.spec = spec;
  try {
    if (spec.unbounded_support()) {
      if (!saw_tail)
        fail(line_no + 1,
             "unbounded-support family needs a trailing 'tail,L,U' line");
      out.proc = IntervalProcedure::truncated_table(
          std::move(lower), std::move(upper), direction, tail_lower,
          tail_upper);
    } else {
      if (saw_tail)
        fail(line_no,
             "tail line is only valid for unbounded-support families");
      const long long rows = spec.support_max() + 1;
      if (static_cast<long long>(lower.size()) != rows)
        fail(line_no + 1, "expected " + std::to_string(rows) +
                              " data rows for " + spec.str() + ", got " +
                              std::to_string(lower.size()));
      out.proc = IntervalProcedure::from_table(std::move(lower),
                                               std::move(upper), direction);
      if (spec.family == Family::Hypergeometric &&
          !out.proc.integer_valued())
        throw ValidationError(
            "hypergeometric bounds must be integer-valued");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  return out;
}

LoadedProcedure load_procedure_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open");
  try {
    return parse_procedure_table(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_procedure_table(std::ostream& out, const DistributionSpec& spec,
                           const IntervalProcedure& proc) {
  require_support_match(spec, proc);
  if (proc.kind() == IntervalProcedure::Kind::Rule)
    throw ValidationError(
        "write_procedure_table: only table-backed procedures can be dumped");
  out << "# family=" << family_name(spec.family);
  if (spec.family == Family::Hypergeometric)
    out << " N=" << spec.population;
  out << " n=" << spec.n_samples;
  if (spec.family == Family::NegBinomial) out << " r=" << fmt17(spec.r);
  out << " direction=" << direction_name(proc.direction()) << "\n";
  for (long long k = 0; k <= proc.table_k_max(); ++k)
    out << k << "," << fmt17(proc.lower(k)) << "," << fmt17(proc.upper(k))
        << "\n";
  if (proc.kind() == IntervalProcedure::Kind::TruncatedTable)
    out << "tail," << fmt17(proc.lower_tail_limit()) << ","
        << fmt17(proc.upper_tail_limit()) << "\n";
}

}  // namespace covint
