#pragma once

#include "fldx/driver/report.hpp"

namespace fldx {

/// One analysis of the benchmark suite: a corpus file under one scenario.
struct BenchCase {
  std::string name;
  std::string path;
  Scenario scenario;
  /// Variable whose error bound is reported; the returned value otherwise.
  std::string variable;
  /// Published bound for comparison, when known.
  std::optional<Rational> reference;
  std::string note;
};

struct BenchRow {
  BenchCase c;
  /// "ok", "timeout", or "error: ...".
  std::string status = "ok";
  double seconds = 0;
  std::optional<Rational> bound;
  int alarms = 0;
  int assertions_valid = 0;
  int assertions = 0;
  int samples = 0;
  int violations = 0;
  std::string first_violation;
  /// Largest concrete error of the variable seen by the oracle.
  std::optional<Rational> witness;
};

struct BenchOptions {
  AnalysisConfig config;
  int jobs = 1;
  double timeout_seconds = 30;
  int samples = 200;
  std::uint64_t seed = 1;
};

/// Every scenario of every .c file of `dir`. `dir/expected.json` may give,
/// per file name, {"variable", "reference", "note"}.
std::vector<BenchCase> load_corpus(const std::string &dir);

/// Analysis plus soundness sampling of one case, in this process.
BenchRow run_case(const BenchCase &c, const BenchOptions &opt);

/// All cases in up to `jobs` worker processes, each killed after the
/// timeout. Rows come back in case order.
std::vector<BenchRow> run_bench(const std::vector<BenchCase> &cases, const BenchOptions &opt);

nlohmann::json bench_json(const std::vector<BenchRow> &rows);
std::string bench_table(const std::vector<BenchRow> &rows);

} // namespace fldx
