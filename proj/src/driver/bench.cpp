#include "fldx/driver/bench.hpp"

#include "fldx/oracle/soundness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fldx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Rational> opt_rational(const json &j) {
  if (j.is_null())
    return std::nullopt;
  if (j.is_string())
    return Rational::parse(j.get<std::string>());
  return Rational(BigInt::from_string(j.at("num").get<std::string>()),
                  BigInt::from_string(j.at("den").get<std::string>()));
}

json opt_json(const std::optional<Rational> &r) { return r ? rational_json(*r) : json(nullptr); }

json row_json(const BenchRow &r) {
  return json{{"name", r.c.name},
              {"file", r.c.path},
              {"scenario", r.c.scenario.label},
              {"variable", r.c.variable},
              {"reference", opt_json(r.c.reference)},
              {"note", r.c.note},
              {"status", r.status},
              {"seconds", r.seconds},
              {"bound", opt_json(r.bound)},
              {"alarms", r.alarms},
              {"assertions", r.assertions},
              {"assertions_valid", r.assertions_valid},
              {"samples", r.samples},
              {"violations", r.violations},
              {"first_violation", r.first_violation},
              {"witness", opt_json(r.witness)}};
}

void row_from_json(BenchRow &r, const json &j) {
  r.status = j.at("status");
  r.seconds = j.at("seconds");
  r.bound = opt_rational(j.at("bound"));
  r.alarms = j.at("alarms");
  r.assertions = j.at("assertions");
  r.assertions_valid = j.at("assertions_valid");
  r.samples = j.at("samples");
  r.violations = j.at("violations");
  r.first_violation = j.at("first_violation");
  r.witness = opt_rational(j.at("witness"));
}

std::string sci(const std::optional<Rational> &r) {
  if (!r)
    return "-";
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << r->to_double();
  return os.str();
}

} // namespace

std::vector<BenchCase> load_corpus(const std::string &dir) {
  json expected = json::object();
  if (fs::exists(fs::path(dir) / "expected.json"))
    expected = json::parse(slurp((fs::path(dir) / "expected.json").string()));
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.path().extension() == ".c")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<BenchCase> out;
  for (const auto &f : files) {
    const std::string file = f.filename().string();
    std::vector<Scenario> scenarios = scenarios_of(slurp(f.string()));
    if (scenarios.empty())
      scenarios.push_back(Scenario{"no inputs", {}});
    json meta = expected.contains(file) ? expected[file] : json::object();
    for (const auto &s : scenarios) {
      BenchCase c;
      c.name = f.stem().string();
      c.path = f.string();
      c.scenario = s;
      c.variable = meta.value("variable", "");
      if (meta.contains("reference"))
        c.reference = opt_rational(meta["reference"]);
      c.note = meta.value("note", "");
      out.push_back(std::move(c));
    }
  }
  return out;
}

BenchRow run_case(const BenchCase &c, const BenchOptions &opt) {
  BenchRow row;
  row.c = c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    AnalysisConfig cfg = opt.config;
    for (const auto &[k, v] : c.scenario.inputs)
      cfg.inputs[k] = v;
    Analysis a = analyze(slurp(c.path), cfg);
    const ExecResult &r = a.result;
    row.alarms = static_cast<int>(r.alarms.size());
    row.assertions = static_cast<int>(r.assertions.size());
    for (const auto &rec : r.assertions) {
      if (rec.verdict == Verdict::Valid)
        ++row.assertions_valid;
      if (auto it = rec.values.find(c.variable); it != rec.values.end()) {
        Rational m = magnitude(it->second.err_iv);
        if (!row.bound || m > *row.bound)
          row.bound = m;
      }
    }
    if (c.variable.empty() && r.result)
      row.bound = magnitude(r.result->err_iv);
    SoundnessReport s = check_soundness(a.prepared.program, a.prepared.info, cfg.inputs, r, cfg.exec, opt.samples,
                                        opt.seed);
    row.samples = s.samples - s.failed_runs;
    row.violations = static_cast<int>(s.violations.size());
    if (!s.violations.empty())
      row.first_violation = s.violations.front();
    if (auto it = s.max_err.find(c.variable); it != s.max_err.end())
      row.witness = it->second;
  } catch (const StageError &e) {
    row.status = "error: " + to_string(e.stage()) + ": " + e.what();
  } catch (const std::exception &e) {
    row.status = std::string("error: ") + e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchCase> &cases, const BenchOptions &opt) {
  using Clock = std::chrono::steady_clock;
  struct Worker {
    std::size_t index;
    pid_t pid;
    int fd;
    Clock::time_point start;
    std::string data;
  };
  std::vector<BenchRow> rows(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i)
    rows[i].c = cases[i];
  std::vector<Worker> running;
  std::size_t next = 0;
  const int jobs = std::max(1, opt.jobs);

  auto finish = [&](Worker &w, bool timed_out) {
    BenchRow &row = rows[w.index];
    if (timed_out) {
      kill(w.pid, SIGKILL);
      row.status = "timeout";
      row.seconds = opt.timeout_seconds;
    }
    int status = 0;
    waitpid(w.pid, &status, 0);
    close(w.fd);
    if (timed_out)
      return;
    try {
      row_from_json(row, json::parse(w.data));
    } catch (const std::exception &) {
      row.status = "error: worker exited with status " + std::to_string(status);
    }
  };

  while (next < cases.size() || !running.empty()) {
    while (next < cases.size() && static_cast<int>(running.size()) < jobs) {
      int fds[2];
      if (pipe(fds) != 0)
        throw std::runtime_error("pipe failed");
      std::fflush(nullptr);
      pid_t pid = fork();
      if (pid < 0)
        throw std::runtime_error("fork failed");
      if (pid == 0) {
        close(fds[0]);
        std::string out = row_json(run_case(cases[next], opt)).dump();
        std::size_t off = 0;
        while (off < out.size()) {
          ssize_t n = write(fds[1], out.data() + off, out.size() - off);
          if (n <= 0)
            break;
          off += static_cast<std::size_t>(n);
        }
        close(fds[1]);
        _exit(0);
      }
      close(fds[1]);
      running.push_back({next++, pid, fds[0], Clock::now(), {}});
    }
    std::vector<pollfd> pfds;
    for (const auto &w : running)
      pfds.push_back({w.fd, POLLIN, 0});
    poll(pfds.data(), pfds.size(), 50);
    for (std::size_t i = running.size(); i-- > 0;) {
      Worker &w = running[i];
      bool done = false;
      if (pfds[i].revents & (POLLIN | POLLHUP)) {
        char buf[4096];
        ssize_t n = read(w.fd, buf, sizeof buf);
        if (n > 0)
          w.data.append(buf, static_cast<std::size_t>(n));
        else
          done = true;
      }
      const bool late = std::chrono::duration<double>(Clock::now() - w.start).count() > opt.timeout_seconds;
      if (done || late) {
        finish(w, !done);
        running.erase(running.begin() + static_cast<long>(i));
      }
    }
  }
  return rows;
}

json bench_json(const std::vector<BenchRow> &rows) {
  json out = json::array();
  for (const auto &r : rows)
    out.push_back(row_json(r));
  return out;
}

std::string bench_table(const std::vector<BenchRow> &rows) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "example" << std::setw(26) << "scenario" << std::setw(10) << "variable"
     << std::setw(12) << "bound" << std::setw(24) << "reference" << std::setw(8) << "alarms" << std::setw(14)
     << "oracle" << std::setw(9) << "time(s)" << "status\n";
  for (const auto &r : rows) {
    std::string oracle = r.status != "ok"   ? "-"
                         : r.violations     ? std::to_string(r.violations) + " unsound"
                                            : "sound/" + std::to_string(r.samples);
    std::string ref = sci(r.c.reference);
    if (!r.c.note.empty())
      ref += " " + r.c.note;
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << r.seconds;
    os << std::left << std::setw(22) << r.c.name << std::setw(26) << r.c.scenario.label << std::setw(10)
       << (r.c.variable.empty() ? "result" : r.c.variable) << std::setw(12) << sci(r.bound) << std::setw(24) << ref
       << std::setw(8) << r.alarms << std::setw(14) << oracle << std::setw(9) << t.str() << r.status << "\n";
  }
  return os.str();
}

} // namespace fldx
