#include "fldx/driver/bench.hpp"
#include "fldx/driver/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace fldx;

namespace {

enum Exit { Ok = 0, Alarms = 1, Usage = 2, ParseFail = 3, TypeFail = 4, InstrumentFail = 5, ValidateFail = 6,
            ExecuteFail = 7 };

int stage_exit(Stage s) {
  switch (s) {
  case Stage::Parse: return ParseFail;
  case Stage::Typecheck: return TypeFail;
  case Stage::Instrument: return InstrumentFail;
  case Stage::Validate: return ValidateFail;
  case Stage::Execute: return ExecuteFail;
  }
  return ExecuteFail;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw UsageError("cannot write " + path);
  out << text;
}

struct Common {
  std::string file;
  std::string format;
  std::vector<std::string> inputs;
  std::string scenario;
  std::size_t max_noise = 64;
  int path_budget = 256;
  int subdiv = 1;
  std::string threshold = "0.05";
  std::string entry = "main";
};

void add_common(CLI::App *app, Common &c) {
  app->add_option("--format", c.format, "binary32, binary64, toy or custom:BETA,P,EMIN,EMAX (float and double)");
  app->add_option("--input", c.inputs, "name=[lo,hi]~[err_lo,err_hi]; repeatable");
  app->add_option("--scenario", c.scenario, "use the inputs of a Scenario line of the file (label or 1-based index)");
  app->add_option("--max-noise", c.max_noise, "noise symbols kept per value before condensing");
  app->add_option("--path-budget", c.path_budget, "paths explored per section execution");
  app->add_option("--subdiv", c.subdiv, "pieces each ranged input is cut into");
  app->add_option("--threshold", c.threshold, "relative gain needed to substitute a noise symbol");
  app->add_option("--entry", c.entry, "entry function");
}

AnalysisConfig make_config(const Common &c, const std::string &source) {
  AnalysisConfig cfg;
  if (!c.format.empty())
    cfg.exec.format = parse_format(c.format);
  cfg.exec.max_syms = c.max_noise;
  cfg.exec.path_budget = c.path_budget;
  cfg.exec.entry = c.entry;
  try {
    cfg.exec.threshold = Rational::parse(c.threshold);
  } catch (const std::exception &) {
    throw UsageError("bad threshold '" + c.threshold + "'");
  }
  cfg.subdiv = c.subdiv;
  if (!c.scenario.empty()) {
    cfg.inputs = pick_scenario(source, c.scenario).inputs;
  }
  for (const auto &i : c.inputs)
    cfg.inputs.insert_or_assign(parse_input(i).first, parse_input(i).second);
  cfg.validate();
  return cfg;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Floating-point accuracy and robustness analyzer for a C subset"};
  app.require_subcommand(1);

  Common an;
  std::string report = "text", emit, output;
  bool trace = false;
  auto *analyze_cmd = app.add_subcommand("analyze", "analyze a program and report assertion verdicts and bounds");
  analyze_cmd->add_option("file", an.file, "source file")->required();
  add_common(analyze_cmd, an);
  analyze_cmd->add_option("--report", report, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--emit-instrumented", emit, "write the instrumented source to a file ('-' for stdout)");
  analyze_cmd->add_option("-o,--output", output, "write the report to a file");
  analyze_cmd->add_flag("--trace", trace, "print section entries, decisions and merges to stderr");

  std::string inst_file, inst_out;
  auto *instrument_cmd = app.add_subcommand("instrument", "print the program with split/merge sections");
  instrument_cmd->add_option("file", inst_file, "source file")->required();
  instrument_cmd->add_option("-o,--output", inst_out, "output file");

  std::string tc_file;
  auto *typecheck_cmd = app.add_subcommand("typecheck", "print the typing of every annotation");
  typecheck_cmd->add_option("file", tc_file, "source file")->required();

  Common bc;
  std::string bench_dir, bench_report = "text";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double timeout = 30;
  int samples = 200;
  auto *bench_cmd = app.add_subcommand("bench", "analyze every scenario of a corpus directory");
  bench_cmd->add_option("dir", bench_dir, "corpus directory")->required();
  bench_cmd->add_option("--format", bc.format, "float format override");
  bench_cmd->add_option("--max-noise", bc.max_noise, "noise symbols kept per value");
  bench_cmd->add_option("--path-budget", bc.path_budget, "paths explored per section execution");
  bench_cmd->add_option("--subdiv", bc.subdiv, "pieces each ranged input is cut into");
  bench_cmd->add_option("--jobs", jobs, "parallel workers");
  bench_cmd->add_option("--timeout", timeout, "seconds per example");
  bench_cmd->add_option("--samples", samples, "oracle samples per example");
  bench_cmd->add_option("--report", bench_report, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*analyze_cmd) {
      const std::string source = slurp(an.file);
      AnalysisConfig cfg = make_config(an, source);
      cfg.exec.trace = trace;
      Analysis a = analyze(source, cfg);
      if (!emit.empty())
        write_out(emit, a.prepared.instrumented);
      if (trace)
        for (const auto &line : a.result.trace)
          std::cerr << line << "\n";
      ReportMeta meta{an.file, an.scenario, cfg};
      write_out(output, report == "json" ? report_json(a, meta).dump(2) + "\n" : report_text(a, meta));
      return a.result.alarms.empty() ? Ok : Alarms;
    }
    if (*instrument_cmd) {
      Prepared p = prepare(slurp(inst_file));
      for (const auto &w : p.compile.warnings)
        std::cerr << "warning: " << w << "\n";
      write_out(inst_out, p.instrumented);
      return Ok;
    }
    if (*typecheck_cmd) {
      std::cout << typing_text(typecheck_source(slurp(tc_file)));
      return Ok;
    }
    if (*bench_cmd) {
      BenchOptions opt;
      bc.file = bench_dir;
      opt.config = make_config(bc, "");
      opt.jobs = jobs;
      opt.timeout_seconds = timeout;
      opt.samples = samples;
      auto rows = run_bench(load_corpus(bench_dir), opt);
      if (bench_report == "json")
        std::cout << bench_json(rows).dump(2) << "\n";
      else
        std::cout << bench_table(rows);
      bool clean = std::all_of(rows.begin(), rows.end(),
                               [](const BenchRow &r) { return r.status == "ok" && r.violations == 0; });
      return clean ? Ok : Alarms;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const StageError &e) {
    std::cerr << to_string(e.stage()) << " error: " << e.what() << "\n";
    return stage_exit(e.stage());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExecuteFail;
  }
  return Ok;
}
