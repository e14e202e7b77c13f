#include "fldx/driver/report.hpp"
#include "fldx/frontend/printer.hpp"
#include "fldx/spec/typing.hpp"

#include <functional>

#include <sstream>

namespace fldx {

using nlohmann::json;

json rational_json(const Rational &r) {
  if (auto d = r.exact_decimal(40))
    return *d;
  return json{{"num", r.num().str()}, {"den", r.den().str()}};
}

json interval_json(const RInterval &r) { return json::array({rational_json(r.lo()), rational_json(r.hi())}); }

json bounds_json(const Bounds &b) {
  return json{{"float", interval_json(b.float_iv)},
              {"real", interval_json(b.real_iv)},
              {"err", interval_json(b.err_iv)},
              {"rel", b.rel ? interval_json(*b.rel) : json(nullptr)}};
}

Rational magnitude(const RInterval &r) { return std::max(r.lo().abs(), r.hi().abs()); }

namespace {

json format_json(Scalar s, const ExecConfig &cfg) {
  FloatFormat f = format_of(s, cfg);
  return json{{"beta", f.beta}, {"p", f.p}, {"e_min", f.e_min}, {"e_max", f.e_max}};
}

json input_json(const InputSpec &s) {
  return json{{"value", interval_json(s.value)}, {"err", s.err ? interval_json(*s.err) : json(nullptr)}};
}

} // namespace

json report_json(const Analysis &a, const ReportMeta &meta) {
  const ExecResult &r = a.result;
  const ExecConfig &cfg = meta.config.exec;
  json j;
  j["schema"] = kReportSchema;
  j["file"] = meta.file;
  j["scenario"] = meta.scenario;
  json inputs = json::object();
  for (const auto &[k, v] : meta.config.inputs)
    inputs[k] = input_json(v);
  j["config"] = json{{"float", format_json(Scalar::Float, cfg)},
                     {"double", format_json(Scalar::Double, cfg)},
                     {"inputs", inputs},
                     {"max_noise", cfg.max_syms},
                     {"path_budget", cfg.path_budget},
                     {"subdiv", meta.config.subdiv},
                     {"threshold", rational_json(cfg.threshold)}};
  j["completed"] = r.completed;
  j["runs"] = a.runs;

  json asserts = json::array();
  for (const auto &rec : r.assertions) {
    json values = json::object();
    for (const auto &[k, b] : rec.values)
      values[k] = bounds_json(b);
    asserts.push_back(json{{"location", rec.loc.str()},
                           {"function", rec.function},
                           {"verdict", to_string(rec.verdict)},
                           {"evaluations", rec.evaluations},
                           {"values", values}});
  }
  j["assertions"] = asserts;

  json alarms = json::array();
  for (const auto &al : r.alarms)
    alarms.push_back(json{{"kind", to_string(al.kind)}, {"location", al.loc.str()}, {"message", al.message}});
  j["alarms"] = alarms;
  j["warnings"] = r.warnings;
  for (const auto &w : a.prepared.compile.warnings)
    j["warnings"].push_back(w);

  json sections = json::array();
  int paths = 0, abandoned = 0, divergent = 0;
  for (const auto &rec : a.prepared.compile.sections) {
    json s{{"id", rec.id},
           {"function", rec.function},
           {"split", rec.split_loc.str()},
           {"merge", rec.merge_loc.str()},
           {"save_list", rec.save_list},
           {"merge_list", rec.merge_list},
           {"executions", 0},
           {"paths", 0},
           {"abandoned", 0},
           {"divergent", 0},
           {"budget_hit", false}};
    if (auto it = r.sections.find(rec.id); it != r.sections.end()) {
      s["executions"] = it->second.executions;
      s["paths"] = it->second.paths;
      s["abandoned"] = it->second.abandoned;
      s["divergent"] = it->second.divergent;
      s["budget_hit"] = it->second.budget_hit;
    }
    sections.push_back(s);
  }
  for (const auto &[id, st] : r.sections) {
    paths += st.paths;
    abandoned += st.abandoned;
    divergent += st.divergent;
  }
  j["sections"] = sections;
  j["paths"] = json{{"total", paths}, {"abandoned", abandoned}, {"divergent", divergent}};

  json prints = json::array();
  for (const auto &p : r.prints) {
    prints.push_back(json{{"location", p.loc.str()},
                          {"variable", p.variable},
                          {"float", interval_json(p.float_iv)},
                          {"real", interval_json(p.real_iv)},
                          {"err", interval_json(p.err_iv)},
                          {"rel", p.rel ? interval_json(*p.rel) : json(nullptr)},
                          {"real_form", p.real_form},
                          {"err_form", p.err_form}});
  }
  j["prints"] = prints;
  j["result"] = r.result ? bounds_json(*r.result) : json(nullptr);
  j["int_result"] = r.int_result ? rational_json(*r.int_result) : json(nullptr);
  json finals = json::object();
  for (const auto &[k, b] : r.finals)
    finals[k] = bounds_json(b);
  j["finals"] = finals;
  return j;
}

namespace {

std::string iv(const RInterval &r) { return "[" + r.lo().approx(6) + ", " + r.hi().approx(6) + "]"; }

void bounds_text(std::ostream &os, const std::string &name, const Bounds &b, const char *indent) {
  os << indent << name << ": float " << iv(b.float_iv) << "  real " << iv(b.real_iv) << "  err " << iv(b.err_iv);
  if (b.rel)
    os << "  rel " << iv(*b.rel);
  os << "\n";
}

} // namespace

std::string report_text(const Analysis &a, const ReportMeta &meta) {
  const ExecResult &r = a.result;
  std::ostringstream os;
  os << meta.file;
  if (!meta.scenario.empty())
    os << " (" << meta.scenario << ")";
  os << ": " << (r.alarms.empty() ? "no alarms" : std::to_string(r.alarms.size()) + " alarm(s)");
  if (!r.completed)
    os << ", stopped early";
  os << "\n";
  for (const auto &rec : r.assertions) {
    os << "assertion " << rec.loc.str() << " in " << rec.function << ": " << to_string(rec.verdict) << " ("
       << rec.evaluations << " evaluation(s))\n";
    for (const auto &[k, b] : rec.values)
      bounds_text(os, k, b, "  ");
  }
  for (const auto &al : r.alarms)
    os << "alarm " << to_string(al.kind) << " at " << al.loc.str() << ": " << al.message << "\n";
  for (const auto &w : a.prepared.compile.warnings)
    os << "warning: " << w << "\n";
  for (const auto &w : r.warnings)
    os << "warning: " << w << "\n";
  for (const auto &rec : a.prepared.compile.sections) {
    os << "section " << rec.id << " in " << rec.function << ": split " << rec.split_loc.str() << ", merge "
       << rec.merge_loc.str();
    if (auto it = r.sections.find(rec.id); it != r.sections.end())
      os << ", " << it->second.paths << " path(s), " << it->second.abandoned << " abandoned, "
         << it->second.divergent << " divergent" << (it->second.budget_hit ? ", budget hit" : "");
    os << "\n";
  }
  for (const auto &p : r.prints)
    os << "print " << p.loc.str() << " " << p.variable << ": float " << iv(p.float_iv) << "  err " << iv(p.err_iv)
       << "\n";
  if (r.result)
    bounds_text(os, "result", *r.result, "");
  if (a.runs > 1)
    os << a.runs << " subdivision runs hulled\n";
  return os.str();
}

namespace {

void print_pred_typing(std::ostream &os, const Pred &p, const TypedPred &t) {
  std::function<void(const Term &, int)> term = [&](const Term &x, int depth) {
    auto it = t.terms.find(x.id);
    if (it != t.terms.end())
      os << std::string(static_cast<std::size_t>(4 + 2 * depth), ' ') << print_term(x) << " : " << it->second.kind.str()
         << ", computed in " << it->second.compute.str() << ", carried in " << it->second.carry.str() << "\n";
    for (const auto &a : x.args)
      term(*a, depth + 1);
  };
  std::function<void(const Pred &)> walk = [&](const Pred &q) {
    if (auto it = t.comparisons.find(&q); it != t.comparisons.end()) {
      os << "  relation " << print_pred(q) << " decided in " << it->second.str() << "\n";
    }
    for (const auto &x : q.terms)
      term(*x, 0);
    for (const auto &sub : q.preds)
      walk(*sub);
  };
  walk(p);
}

} // namespace

std::string typing_text(const Prepared &p) {
  std::ostringstream os;
  for (const Function &f : p.program.functions)
    walk_stmts(f.body, [&](const StmtPtr &s) {
      if (s->kind != StmtKind::Assert)
        return;
      os << "assertion " << s->loc.str() << " in " << f.name << ": " << print_pred(*s->pred) << "\n";
      print_pred_typing(os, *s->pred, type_pred(*s->pred, p.info.scopes.at(f.name)));
    });
  return os.str();
}

} // namespace fldx
