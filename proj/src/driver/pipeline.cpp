#include "fldx/driver/pipeline.hpp"

#include "fldx/frontend/parser.hpp"
#include "fldx/frontend/printer.hpp"
#include "fldx/spec/typing.hpp"

#include <algorithm>

namespace fldx {

std::string to_string(Stage s) {
  switch (s) {
  case Stage::Parse: return "parse";
  case Stage::Typecheck: return "typecheck";
  case Stage::Instrument: return "instrument";
  case Stage::Validate: return "validate";
  case Stage::Execute: return "execute";
  }
  return "?";
}

Prepared typecheck_source(const std::string &source) {
  Prepared out;
  try {
    out.program = parse_program(source);
  } catch (const FrontendError &e) {
    throw StageError(Stage::Parse, e.what());
  }
  try {
    out.info = check_program(out.program);
    for (const Function &f : out.program.functions) {
      const FunctionScope &scope = out.info.scopes.at(f.name);
      walk_stmts(f.body, [&](const StmtPtr &s) {
        if (s->kind == StmtKind::Assert)
          type_pred(*s->pred, scope);
      });
    }
  } catch (const FrontendError &e) {
    throw StageError(Stage::Typecheck, e.what());
  }
  return out;
}

Prepared prepare(const std::string &source) {
  Prepared out = typecheck_source(source);
  try {
    out.compile = compile_sections(out.program, out.info);
    out.info = check_program(out.program);
    out.instrumented = print_program(out.program);
  } catch (const FrontendError &e) {
    throw StageError(Stage::Instrument, e.what());
  }
  std::vector<Violation> bad = validate_sections(out.program, out.info);
  if (!bad.empty()) {
    std::string msg = "placement check failed:";
    for (const auto &v : bad)
      msg += "\n  section " + std::to_string(v.section) + ", criterion " + std::to_string(v.criterion) + ": " +
             v.message;
    throw StageError(Stage::Validate, msg);
  }
  return out;
}

std::vector<std::map<std::string, InputSpec>> subdivide(const std::map<std::string, InputSpec> &inputs,
                                                         const Function &entry, int k) {
  std::vector<std::map<std::string, InputSpec>> cells{inputs};
  if (k <= 1)
    return cells;
  for (const Param &pa : entry.params) {
    auto it = inputs.find(pa.name);
    if (!pa.type.is_float() || it == inputs.end() || it->second.value.is_point())
      continue;
    const RInterval &v = it->second.value;
    const Rational step = v.width() / Rational(k);
    std::vector<std::map<std::string, InputSpec>> next;
    for (const auto &c : cells)
      for (int i = 0; i < k; ++i) {
        auto piece = c;
        const Rational lo = v.lo() + step * Rational(i);
        const Rational hi = i == k - 1 ? v.hi() : lo + step;
        piece[pa.name].value = RInterval(lo, hi);
        next.push_back(std::move(piece));
      }
    cells = std::move(next);
    if (cells.size() > 65536)
      throw UsageError("subdivision produces more than 65536 runs");
  }
  return cells;
}

namespace {

void join_bounds(std::map<std::string, Bounds> &acc, const std::map<std::string, Bounds> &r) {
  for (const auto &[k, b] : r) {
    auto [it, fresh] = acc.emplace(k, b);
    if (!fresh)
      it->second.join(b);
  }
}

Verdict join_verdict(Verdict a, Verdict b) {
  if (a == Verdict::Invalid || b == Verdict::Invalid)
    return Verdict::Invalid;
  if (a == Verdict::Unknown || b == Verdict::Unknown)
    return Verdict::Unknown;
  return Verdict::Valid;
}

bool same_loc(const Loc &a, const Loc &b) { return a.line == b.line && a.col == b.col; }

} // namespace

void join_results(ExecResult &acc, const ExecResult &r) {
  for (const auto &a : r.assertions) {
    auto it = std::find_if(acc.assertions.begin(), acc.assertions.end(),
                           [&](const AssertionRecord &x) { return same_loc(x.loc, a.loc); });
    if (it == acc.assertions.end()) {
      acc.assertions.push_back(a);
      continue;
    }
    it->verdict = join_verdict(it->verdict, a.verdict);
    it->evaluations += a.evaluations;
    join_bounds(it->values, a.values);
  }
  std::sort(acc.assertions.begin(), acc.assertions.end(), [](const AssertionRecord &x, const AssertionRecord &y) {
    return std::pair(x.loc.line, x.loc.col) < std::pair(y.loc.line, y.loc.col);
  });
  for (const auto &a : r.alarms) {
    bool seen = std::any_of(acc.alarms.begin(), acc.alarms.end(), [&](const Alarm &x) {
      return x.kind == a.kind && same_loc(x.loc, a.loc) && x.message == a.message;
    });
    if (!seen)
      acc.alarms.push_back(a);
  }
  for (const auto &w : r.warnings)
    if (std::find(acc.warnings.begin(), acc.warnings.end(), w) == acc.warnings.end())
      acc.warnings.push_back(w);
  acc.prints.insert(acc.prints.end(), r.prints.begin(), r.prints.end());
  for (const auto &[id, s] : r.sections) {
    auto [it, fresh] = acc.sections.emplace(id, s);
    if (fresh)
      continue;
    it->second.executions += s.executions;
    it->second.paths += s.paths;
    it->second.abandoned += s.abandoned;
    it->second.divergent += s.divergent;
    it->second.budget_hit = it->second.budget_hit || s.budget_hit;
  }
  if (r.result) {
    if (acc.result)
      acc.result->join(*r.result);
    else
      acc.result = r.result;
  }
  // Integer results differing across cells have no single value.
  if (acc.int_result != r.int_result)
    acc.int_result.reset();
  join_bounds(acc.finals, r.finals);
  acc.completed = acc.completed && r.completed;
  acc.trace.insert(acc.trace.end(), r.trace.begin(), r.trace.end());
}

Analysis analyze(const std::string &source, const AnalysisConfig &cfg) {
  cfg.validate();
  Analysis out;
  out.prepared = prepare(source);
  const Function *entry = out.prepared.program.find(cfg.exec.entry);
  if (!entry)
    throw UsageError("no function '" + cfg.exec.entry + "'");
  auto cells = subdivide(cfg.inputs, *entry, cfg.subdiv);
  bool first = true;
  for (const auto &in : cells) {
    ExecResult r;
    try {
      r = execute(out.prepared.program, out.prepared.info, in, cfg.exec);
    } catch (const FrontendError &e) {
      throw UsageError(e.what());
    } catch (const std::logic_error &e) {
      throw StageError(Stage::Execute, e.what());
    }
    ++out.runs;
    if (first)
      out.result = std::move(r);
    else
      join_results(out.result, r);
    first = false;
  }
  return out;
}

} // namespace fldx
