#include "fldx/exec/executor.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace fldx {

Bounds Bounds::of(const AbstractFloat &v, const SymbolRanges &ranges) {
  Bounds b;
  b.float_iv = v.float_iv;
  b.real_iv = v.real_range(ranges);
  b.err_iv = v.err_range(ranges);
  if (!b.real_iv.contains_zero())
    b.rel = b.err_iv / b.real_iv;
  return b;
}

void Bounds::join(const Bounds &o) {
  float_iv = float_iv.join(o.float_iv);
  real_iv = real_iv.join(o.real_iv);
  err_iv = err_iv.join(o.err_iv);
  if (rel && o.rel)
    rel = rel->join(*o.rel);
  else
    rel.reset();
}

FloatFormat format_of(Scalar s, const ExecConfig &cfg) {
  if (cfg.format)
    return *cfg.format;
  return s == Scalar::Float ? FloatFormat::binary32() : FloatFormat::binary64();
}

namespace {

/// Results of the paths of one section execution whose float and real
/// control diverged at the same decision: the paths that followed the
/// machine branch and those that followed the real branch.
struct DivergentGroup {
  std::optional<Memory> float_side;
  std::optional<Memory> real_side;
};

struct SectionRun {
  const Stmt *stmt = nullptr;
  PathExplorer explorer;
  Mode entry_mode = Mode::Both;
  std::set<std::string> writes;
};

std::string write_key(const ArrayRef &at) { return std::to_string(at.frame) + ":" + at.name; }

void collect_lvals(const Term &t, std::vector<const Term *> &out) {
  if (t.kind == TermKind::LVal)
    out.push_back(&t);
  for (const auto &a : t.args)
    collect_lvals(*a, out);
}

void collect_lvals(const Pred &p, std::vector<const Term *> &out) {
  for (const auto &t : p.terms)
    collect_lvals(*t, out);
  for (const auto &q : p.preds)
    collect_lvals(*q, out);
}

class Executor {
public:
  Executor(const Program &p, const ProgramInfo &info, const ExecConfig &cfg)
      : p_(p), info_(info), cfg_(cfg), ctx_{table_, mem_.ranges, cfg.max_syms, cfg.threshold} {}

  ExecResult run(const std::map<std::string, InputSpec> &inputs) {
    const Function *entry = p_.find(cfg_.entry);
    if (!entry)
      throw FrontendError(Loc{}, "entry function '" + cfg_.entry + "' not found");
    for (const auto &[name, spec] : inputs) {
      bool known = std::any_of(entry->params.begin(), entry->params.end(), [&](const Param &pa) { return pa.name == name; });
      if (!known)
        throw FrontendError(entry->loc, "input '" + name + "' is not a parameter of " + entry->name);
    }
    std::vector<Value> args;
    for (const auto &pa : entry->params) {
      if (pa.type.is_array())
        throw FrontendError(pa.loc, "array parameter '" + pa.name + "' of the entry function cannot be bound");
      auto it = inputs.find(pa.name);
      if (it == inputs.end())
        throw FrontendError(pa.loc, "no input binding for parameter '" + pa.name + "'");
      args.push_back(input_value(pa, it->second));
    }
    try {
      for (const auto &g : p_.globals)
        declare(*g, true);
      Value r = call_function(*entry, args, {});
      const Frame &done = last_frame_;
      for (const auto &[name, v] : done.vars)
        if (v.type.is_float() && v.cells[0].tag == Cell::Tag::Float)
          out_.finals[name] = Bounds::of(v.cells[0].f, mem_.ranges);
      if (entry->ret.scalar != Scalar::Void) {
        if (r.is_float())
          out_.result = Bounds::of(r.f, mem_.ranges);
        else
          out_.int_result = r.i;
      }
      out_.completed = true;
    } catch (const InfeasiblePath &e) {
      alarm(AlarmKind::NoFeasibleExecution, e.what());
    } catch (const DomainAlarm &a) {
      alarm(a.kind(), a.what());
    }
    for (auto &[id, rec] : asserts_)
      out_.assertions.push_back(std::move(rec));
    std::sort(out_.assertions.begin(), out_.assertions.end(), [](const AssertionRecord &a, const AssertionRecord &b) {
      return std::tie(a.loc.line, a.loc.col) < std::tie(b.loc.line, b.loc.col);
    });
    return std::move(out_);
  }

private:
  // ---- alarms and trace

  void add_alarm(const Alarm &a) {
    for (const auto &b : out_.alarms)
      if (b.kind == a.kind && b.loc.line == a.loc.line && b.loc.col == a.loc.col && b.message == a.message)
        return;
    out_.alarms.push_back(a);
  }

  void alarm(AlarmKind k, const std::string &msg) { add_alarm({k, loc_, msg}); }

  void trace(const std::string &line) {
    if (cfg_.trace)
      out_.trace.push_back(line);
  }

  void warn(const std::string &w) {
    if (std::find(out_.warnings.begin(), out_.warnings.end(), w) == out_.warnings.end())
      out_.warnings.push_back(w);
  }

  [[noreturn]] void raise(AlarmKind k, const std::string &msg) { throw DomainAlarm(k, msg); }

  // ---- values

  Value input_value(const Param &pa, const InputSpec &spec) {
    if (pa.type.is_integral()) {
      if (!spec.value.is_point() || !spec.value.lo().is_integer() || (spec.err && !spec.err->is_point()))
        throw FrontendError(pa.loc, "integer input '" + pa.name + "' must be a single integer");
      return Value::of_int(pa.type.scalar, spec.value.lo());
    }
    const FloatFormat fmt = format_of(pa.type.scalar, cfg_);
    try {
      if (spec.err)
        return Value::of_float(pa.type.scalar, AbstractFloat::with_error(spec.value, *spec.err, fmt, table_));
      return Value::of_float(pa.type.scalar, AbstractFloat::from_real(spec.value, fmt, table_));
    } catch (const NumericError &e) {
      throw FrontendError(pa.loc, "input '" + pa.name + "': " + e.what());
    }
  }

  Value read(const Cell &c, Scalar type, const std::string &name) {
    switch (c.tag) {
    case Cell::Tag::Uninit: raise(AlarmKind::Uninitialized, "'" + name + "' is read before being written");
    case Cell::Tag::Poison:
      raise(AlarmKind::InstrumentationGap, "'" + name + "' differs between merged paths but is not merged");
    case Cell::Tag::Int: return Value::of_int(type, c.i);
    case Cell::Tag::Float: return Value::of_float(type, c.f);
    }
    throw std::logic_error("bad cell");
  }

  Cell to_cell(const Value &v) { return v.is_float() ? Cell::of_float(v.f) : Cell::of_int(v.i); }

  Rational int_result(const Rational &v, Scalar t) {
    if (v >= int_min(t) && v <= int_max(t))
      return v;
    if (is_unsigned(t))
      return machine_int_op(BinOp::Add, v, Rational(0), t);
    raise(AlarmKind::Overflow, "value " + v.str() + " overflows " + to_string(t));
  }

  Value convert(Value v, Scalar to, int site, Cell *origin = nullptr) {
    if (to == v.type)
      return v;
    if (!is_float(to)) {
      if (!v.is_float())
        return Value::of_int(to, int_result(v.i, to));
      return Value::of_int(to, int_result(Rational(cast_decision(site, v, to, origin)), to));
    }
    const FloatFormat fmt = format_of(to, cfg_);
    if (!v.is_float()) {
      try {
        return Value::of_float(to, AbstractFloat::constant(v.i, fmt));
      } catch (const OverflowError &e) {
        raise(AlarmKind::Overflow, e.what());
      }
    }
    return Value::of_float(to, abs_convert(v.f, fmt, ctx_));
  }

  // ---- decisions

  SectionRun *active() { return sections_.empty() ? nullptr : sections_.back(); }

  std::vector<AbstractFloat *> env_with(std::initializer_list<AbstractFloat *> extra) {
    auto env = mem_.floats();
    env.insert(env.end(), extra.begin(), extra.end());
    return env;
  }

  /// Feasible options among `candidates`, each tried on a copy of memory.
  template <class Apply> std::vector<Flow> feasible(const std::vector<Flow> &candidates, Apply apply) {
    std::vector<Flow> out;
    for (const Flow &f : candidates) {
      Memory copy = mem_;
      DomainContext c{table_, copy.ranges, cfg_.max_syms, cfg_.threshold};
      try {
        apply(f, copy, c);
        out.push_back(f);
      } catch (const InfeasiblePath &) {
      }
    }
    return out;
  }

  /// Chooses the flow at a test site: replayed inside a section, recorded on
  /// first visit, and required to be unique outside any section.
  template <class Apply>
  Flow choose(int site, const std::vector<Flow> &candidates, Apply apply, bool is_cast, const std::string &what) {
    SectionRun *sec = active();
    Flow f;
    if (sec && sec->explorer.replaying()) {
      const Decision &d = sec->explorer.replay(site);
      f = d.options[d.choice];
    } else {
      std::vector<Flow> options = candidates.size() == 1 ? candidates : feasible(candidates, apply);
      if (options.empty())
        throw InfeasiblePath("no feasible outcome for " + what);
      if (!sec && options.size() > 1)
        raise(AlarmKind::InstrumentationGap, what + " has " + std::to_string(options.size()) +
                                                 " feasible outcomes outside any split-merge section");
      if (sec) {
        const Decision &d = sec->explorer.record(site, std::move(options));
        f = d.options[0];
      } else {
        f = options[0];
      }
    }
    const std::size_t before = table_.size();
    apply(f, mem_, ctx_);
    mode_ = next_mode(mode_, f);
    if (sec)
      trace("section " + std::to_string(sec->stmt->section.id) + ": " + loc_.str() + " " + what + " -> " +
            f.str(is_cast) + (table_.size() > before ? ", " + std::to_string(table_.size() - before) + " new symbol(s)"
                                                     : std::string()));
    return f;
  }

  static Verdict kleene(BinOp op, const RInterval &a, const RInterval &b) {
    auto lt = [](const RInterval &x, const RInterval &y, bool strict) {
      if (strict ? x.hi() < y.lo() : x.hi() <= y.lo())
        return Verdict::Valid;
      if (strict ? x.lo() >= y.hi() : x.lo() > y.hi())
        return Verdict::Invalid;
      return Verdict::Unknown;
    };
    switch (op) {
    case BinOp::Lt: return lt(a, b, true);
    case BinOp::Le: return lt(a, b, false);
    case BinOp::Gt: return lt(b, a, true);
    case BinOp::Ge: return lt(b, a, false);
    case BinOp::Eq:
      if (a.is_point() && b.is_point() && a.lo() == b.lo())
        return Verdict::Valid;
      return a.meet(b) ? Verdict::Unknown : Verdict::Invalid;
    case BinOp::Ne: {
      Verdict v = kleene(BinOp::Eq, a, b);
      return v == Verdict::Valid ? Verdict::Invalid : v == Verdict::Invalid ? Verdict::Valid : Verdict::Unknown;
    }
    default: throw std::logic_error("not a comparison");
    }
  }

  /// Writes a narrowed operand back to the variable it was read from.
  static void write_back(Cell *cell, const AbstractFloat &v) {
    if (!cell || cell->tag != Cell::Tag::Float || !v.format.contains(cell->f.format))
      return;
    AbstractFloat w = v;
    w.format = cell->f.format;
    cell->f = std::move(w);
  }

  bool compare(int site, BinOp op, Value a, Value b, Cell *ca, Cell *cb) {
    const Scalar common = arith_result(a.type, b.type);
    if (!is_float(common)) {
      a = convert(a, common, site);
      b = convert(b, common, site);
      return kleene(op, a.i, b.i) == Verdict::Valid;
    }
    const bool exact_a = a.is_float() && format_of(common, cfg_).contains(a.f.format);
    const bool exact_b = b.is_float() && format_of(common, cfg_).contains(b.f.format);
    a = convert(a, common, site);
    b = convert(b, common, site);
    if (!exact_a)
      ca = nullptr;
    if (!exact_b)
      cb = nullptr;
    const Verdict vf = kleene(op, a.f.float_iv, b.f.float_iv);
    const Verdict vr = kleene(op, a.f.real_range(mem_.ranges), b.f.real_range(mem_.ranges));
    if (mode_ == Mode::FloatOnly && vf != Verdict::Unknown)
      return vf == Verdict::Valid;
    if (mode_ == Mode::RealOnly && vr != Verdict::Unknown)
      return vr == Verdict::Valid;
    if (mode_ == Mode::Both && vf != Verdict::Unknown && vf == vr)
      return vf == Verdict::Valid;
    const Mode m = mode_;
    auto apply = [&](const Flow &f, Memory &mem, DomainContext &c) {
      AbstractFloat x = a.f, y = b.f;
      auto env = mem.floats();
      env.push_back(&x);
      env.push_back(&y);
      apply_compare(f, op, x, y, env, m, c);
      if (&mem == &mem_) {
        a.f = x;
        b.f = y;
      }
    };
    Flow f = choose(site, compare_flows(m), apply, false, "test '" + to_string(op) + "'");
    write_back(ca, a.f);
    write_back(cb, b.f);
    return f.branch();
  }

  long cast_decision(int site, Value v, Scalar to, Cell *origin) {
    if (origin && !v.f.format.contains(origin->f.format))
      origin = nullptr;
    const Mode m = mode_;
    std::vector<Flow> candidates = cast_flows(v.f, to, m, mem_.ranges);
    auto apply = [&](const Flow &f, Memory &mem, DomainContext &c) {
      AbstractFloat x = v.f;
      auto env = mem.floats();
      env.push_back(&x);
      apply_cast(f, x, env, m, c);
      if (&mem == &mem_)
        v.f = x;
    };
    Flow f = choose(site, candidates, apply, true, "conversion to " + to_string(to));
    write_back(origin, v.f);
    return f.value();
  }

  bool truth(const ExprPtr &e) {
    if (e->kind == ExprKind::Binary && is_comparison(e->binop)) {
      auto [a, ca] = operand(e->args[0]);
      auto [b, cb] = operand(e->args[1]);
      loc_ = e->loc;
      return compare(e->id, e->binop, a, b, ca, cb);
    }
    if (e->kind == ExprKind::Binary && (e->binop == BinOp::And || e->binop == BinOp::Or)) {
      bool l = truth(e->args[0]);
      if (e->binop == BinOp::And ? !l : l)
        return l;
      return truth(e->args[1]);
    }
    if (e->kind == ExprKind::Unary && e->unop == UnOp::Not)
      return !truth(e->args[0]);
    auto [v, c] = operand(e);
    if (!v.is_float())
      return !v.i.is_zero();
    loc_ = e->loc;
    return compare(e->id, BinOp::Ne, v, Value::of_int(Scalar::Int, Rational(0)), c, nullptr);
  }

  // ---- expressions

  std::pair<Value, Cell *> operand(const ExprPtr &e) {
    if (e->kind == ExprKind::Var || e->kind == ExprKind::Index) {
      Cell &c = lvalue(e);
      return {read(c, e->type.scalar, e->name), &c};
    }
    return {eval(e), nullptr};
  }

  Cell &lvalue(const ExprPtr &e) {
    std::optional<long> index;
    if (e->kind == ExprKind::Index) {
      Value i = eval(e->args[0]);
      if (!i.i.is_integer() || !i.i.trunc().fits_i64())
        raise(AlarmKind::OutOfBounds, "index out of range");
      index = static_cast<long>(i.i.trunc().to_i64());
    }
    loc_ = e->loc;
    return mem_.cell(e->name, index);
  }

  void mark_written(const std::string &name) {
    if (sections_.empty())
      return;
    const std::string key = write_key(mem_.locate(name));
    for (SectionRun *s : sections_)
      s->writes.insert(key);
  }

  Value arith(BinOp op, const Value &a, const Value &b, Scalar t) {
    if (is_float(t)) {
      static const std::map<BinOp, AbsOp> ops{
          {BinOp::Add, AbsOp::Add}, {BinOp::Sub, AbsOp::Sub}, {BinOp::Mul, AbsOp::Mul}, {BinOp::Div, AbsOp::Div}};
      return Value::of_float(t, abs_op(ops.at(op), a.f, b.f, format_of(t, cfg_), ctx_));
    }
    if ((op == BinOp::Div || op == BinOp::Mod) && b.i.is_zero())
      raise(AlarmKind::DivisionByZero, "integer division by zero");
    if (is_unsigned(t))
      return Value::of_int(t, machine_int_op(op, a.i, b.i, t));
    Rational exact;
    switch (op) {
    case BinOp::Add: exact = a.i + b.i; break;
    case BinOp::Sub: exact = a.i - b.i; break;
    case BinOp::Mul: exact = a.i * b.i; break;
    case BinOp::Div: exact = Rational(a.i.num().div_trunc(b.i.num())); break;
    case BinOp::Mod: exact = Rational(a.i.num().rem_trunc(b.i.num())); break;
    default: throw std::logic_error("not arithmetic");
    }
    return Value::of_int(t, int_result(exact, t));
  }

  Value eval(const ExprPtr &e) {
    loc_ = e->loc;
    const Scalar t = e->type.scalar;
    switch (e->kind) {
    case ExprKind::IntLit: return Value::of_int(t, e->value);
    case ExprKind::FloatLit:
      try {
        return Value::of_float(t, AbstractFloat::constant(e->value, format_of(t, cfg_)));
      } catch (const OverflowError &err) {
        raise(AlarmKind::Overflow, err.what());
      }
    case ExprKind::Var:
    case ExprKind::Index: return operand(e).first;
    case ExprKind::Unary: {
      if (e->unop == UnOp::Not)
        return Value::of_int(Scalar::Int, Rational(truth(e->args[0]) ? 0 : 1));
      Value v = convert(eval(e->args[0]), t, e->id);
      if (e->unop == UnOp::Plus)
        return v;
      if (v.is_float())
        return Value::of_float(t, abs_neg(v.f));
      return Value::of_int(t, int_result(-v.i, t));
    }
    case ExprKind::Binary: {
      if (is_comparison(e->binop) || e->binop == BinOp::And || e->binop == BinOp::Or)
        return Value::of_int(Scalar::Int, Rational(truth(e) ? 1 : 0));
      Value a = convert(eval(e->args[0]), t, e->args[0]->id);
      Value b = convert(eval(e->args[1]), t, e->args[1]->id);
      loc_ = e->loc;
      return arith(e->binop, a, b, t);
    }
    case ExprKind::Cond: {
      const ExprPtr &chosen = truth(e->args[0]) ? e->args[1] : e->args[2];
      return convert(eval(chosen), t, chosen->id);
    }
    case ExprKind::Cast: {
      auto [v, c] = operand(e->args[0]);
      loc_ = e->loc;
      return convert(v, t, e->id, c);
    }
    case ExprKind::Call: return call(e);
    }
    throw std::logic_error("bad expression");
  }

  Rational literal(const ExprPtr &e) {
    if (e->kind == ExprKind::Unary)
      return -literal(e->args[0]);
    return e->value;
  }

  void assume(const ExprPtr &e) {
    if (e->kind == ExprKind::Binary && e->binop == BinOp::And) {
      assume(e->args[0]);
      assume(e->args[1]);
      return;
    }
    if (e->kind == ExprKind::Binary && is_comparison(e->binop)) {
      auto [a, ca] = operand(e->args[0]);
      auto [b, cb] = operand(e->args[1]);
      const Scalar common = arith_result(a.type, b.type);
      a = convert(a, common, e->id);
      b = convert(b, common, e->id);
      if (!is_float(common)) {
        if (kleene(e->binop, a.i, b.i) != Verdict::Valid)
          throw InfeasiblePath("assumption is false");
        return;
      }
      auto env = env_with({&a.f, &b.f});
      apply_compare(Flow{}, e->binop, a.f, b.f, env, mode_, ctx_);
      write_back(ca, a.f);
      write_back(cb, b.f);
      return;
    }
    Value v = eval(e);
    if (v.is_float())
      raise(AlarmKind::Unsupported, "__assume needs a comparison");
    if (v.i.is_zero())
      throw InfeasiblePath("assumption is false");
  }

  Value call(const ExprPtr &e) {
    if (e->name == "read_double" || e->name == "read_float") {
      const Scalar t = e->name == "read_double" ? Scalar::Double : Scalar::Float;
      RInterval value(literal(e->args[0]), literal(e->args[1]));
      RInterval err(literal(e->args[2]), literal(e->args[3]));
      return Value::of_float(t, AbstractFloat::with_error(value, err, format_of(t, cfg_), table_));
    }
    if (e->name == "__assume") {
      assume(e->args[0]);
      return Value::of_int(Scalar::Int, Rational(0));
    }
    const Function &f = *p_.find(e->name);
    std::vector<Value> args;
    std::vector<std::optional<ArrayRef>> refs;
    for (std::size_t i = 0; i < e->args.size(); ++i) {
      const Param &pa = f.params[i];
      if (pa.type.is_array()) {
        refs.push_back(mem_.locate(e->args[i]->name));
        args.emplace_back();
      } else {
        refs.emplace_back();
        args.push_back(convert(eval(e->args[i]), pa.type.scalar, e->args[i]->id));
      }
    }
    loc_ = e->loc;
    return call_function(f, args, refs);
  }

  Value call_function(const Function &f, const std::vector<Value> &args, std::vector<std::optional<ArrayRef>> refs) {
    Frame fr;
    fr.fn = &f;
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const Param &pa = f.params[i];
      Variable v;
      v.type = pa.type;
      if (i < refs.size() && refs[i]) {
        v.ref = refs[i];
      } else {
        v.cells.push_back(to_cell(args[i]));
      }
      fr.vars[pa.name] = std::move(v);
    }
    mem_.frames.push_back(std::move(fr));
    exec(*f.body);
    Frame done = std::move(mem_.frames.back());
    mem_.frames.pop_back();
    last_frame_ = done;
    if (f.ret.scalar == Scalar::Void)
      return Value{};
    if (!done.ret)
      raise(AlarmKind::Uninitialized, f.name + " ends without returning a value");
    return read(*done.ret, f.ret.scalar, "return value of " + f.name);
  }

  // ---- statements

  void declare(const Stmt &s, bool global) {
    Variable v;
    v.type = s.type;
    const std::size_t n = s.type.is_array() ? static_cast<std::size_t>(s.type.array) : 1;
    Cell zero = s.type.is_float() || (s.type.is_array() && is_float(s.type.scalar))
                    ? Cell::of_float(AbstractFloat::exact(Rational(0), format_of(s.type.scalar, cfg_)))
                    : Cell::of_int(Rational(0));
    v.cells.assign(n, global ? zero : Cell{});
    if (s.expr)
      v.cells[0] = to_cell(convert(eval(s.expr), s.type.scalar, s.expr->id));
    for (std::size_t i = 0; i < s.init_list.size() && i < n; ++i)
      v.cells[i] = to_cell(convert(eval(s.init_list[i]), s.type.scalar, s.init_list[i]->id));
    if (!s.init_list.empty())
      for (std::size_t i = s.init_list.size(); i < n; ++i)
        v.cells[i] = zero;
    if (global) {
      mem_.globals[s.name] = std::move(v);
    } else {
      mem_.frames.back().vars[s.name] = std::move(v);
      mark_written(s.name);
    }
  }

  void assign(const Stmt &s) {
    const Scalar t = s.target->type.scalar;
    Value rhs = eval(s.expr);
    if (s.compound) {
      auto [cur, c] = operand(s.target);
      const Scalar common = arith_result(cur.type, rhs.type);
      Value a = convert(cur, common, s.target->id);
      Value b = convert(rhs, common, s.expr->id);
      loc_ = s.loc;
      rhs = arith(*s.compound, a, b, common);
    }
    Value v = convert(rhs, t, s.expr->id);
    Cell &c = lvalue(s.target);
    c = to_cell(v);
    mark_written(s.target->name);
  }

  void loop_guard(long &n) {
    if (++n > cfg_.max_loop_iterations)
      raise(AlarmKind::Unsupported, "loop exceeds " + std::to_string(cfg_.max_loop_iterations) + " iterations");
  }

  void exec(const Stmt &s) {
    loc_ = s.loc;
    switch (s.kind) {
    case StmtKind::Block:
      for (const auto &c : s.body)
        exec(*c);
      break;
    case StmtKind::Decl: declare(s, false); break;
    case StmtKind::Assign: assign(s); break;
    case StmtKind::Call: eval(s.expr); break;
    case StmtKind::If:
      if (truth(s.expr))
        exec(*s.then_s);
      else if (s.else_s)
        exec(*s.else_s);
      break;
    case StmtKind::While: {
      long n = 0;
      while (truth(s.expr)) {
        loop_guard(n);
        exec(*s.then_s);
      }
      break;
    }
    case StmtKind::DoWhile: {
      long n = 0;
      do {
        loop_guard(n);
        exec(*s.then_s);
      } while (truth(s.expr));
      break;
    }
    case StmtKind::Return:
      if (s.expr) {
        const Scalar t = mem_.frames.back().fn->ret.scalar;
        mem_.frames.back().ret = to_cell(convert(eval(s.expr), t, s.expr->id));
      }
      break;
    case StmtKind::Assert: check(s); break;
    case StmtKind::Section: exec_section(s); break;
    }
  }

  // ---- annotations

  class PathSpecMemory : public SpecMemory {
  public:
    explicit PathSpecMemory(Executor &ex) : ex_(ex) {}
    RInterval int_value(const std::string &name, std::optional<long> index) override {
      Cell &c = ex_.mem_.cell(name, index);
      return RInterval(ex_.read(c, Scalar::Long, name).i);
    }
    AbstractFloat &float_cell(const std::string &name, std::optional<long> index) override {
      Cell &c = ex_.mem_.cell(name, index);
      ex_.read(c, Scalar::Double, name);
      return c.f;
    }
    DomainContext &context() override { return ex_.ctx_; }

  private:
    Executor &ex_;
  };

  void check(const Stmt &s) {
    const Frame &fr = mem_.frames.back();
    const FunctionScope &scope = info_.scopes.at(fr.fn->name);
    AssertionRecord &rec = asserts_[s.id];
    if (rec.evaluations == 0) {
      rec.loc = s.loc;
      rec.function = fr.fn->name;
    }
    ++rec.evaluations;
    auto merge_verdict = [&](Verdict v) {
      if (v == Verdict::Invalid || rec.verdict == Verdict::Invalid)
        rec.verdict = Verdict::Invalid;
      else if (v == Verdict::Unknown)
        rec.verdict = Verdict::Unknown;
    };
    if (mode_ == Mode::Both) {
      std::vector<const Term *> lvals;
      collect_lvals(*s.pred, lvals);
      for (const Term *t : lvals) {
        auto it = scope.vars.find(t->name);
        if (it == scope.vars.end() || !is_float(it->second.scalar))
          continue;
        std::optional<long> index;
        std::string key = t->name;
        if (!t->args.empty()) {
          if (t->args[0]->kind != TermKind::Int)
            continue;
          index = static_cast<long>(t->args[0]->value.trunc().to_i64());
          key += "[" + std::to_string(*index) + "]";
        }
        const Variable *var = mem_.find(t->name);
        if (!var || (index && (*index < 0 || *index >= static_cast<long>(var->cells.size()))))
          continue;
        const Cell &c = var->cells[static_cast<std::size_t>(index.value_or(0))];
        if (c.tag != Cell::Tag::Float)
          continue;
        Bounds b = Bounds::of(c.f, mem_.ranges);
        auto [pos, fresh] = rec.values.emplace(key, b);
        if (!fresh)
          pos->second.join(b);
      }
    }
    std::function<void(const Pred &)> enlarged = [&](const Pred &q) {
      if (q.kind == PredKind::Builtin && q.name.rfind("accuracy_enlarge", 0) == 0)
        mark_written(q.terms[0]->name);
      for (const auto &sub : q.preds)
        enlarged(*sub);
    };
    enlarged(*s.pred);
    PathSpecMemory sm(*this);
    EvalOutcome o = eval_pred(*s.pred, scope, sm);
    for (const auto &a : o.alarms)
      add_alarm({a.kind, a.loc, a.message});
    for (auto &pr : o.prints)
      out_.prints.push_back(std::move(pr));
    Verdict v = o.verdict;
    if (mode_ != Mode::Both && v != Verdict::Unknown) {
      v = Verdict::Unknown;
      add_alarm({AlarmKind::AssertionIndeterminate, s.loc,
                 "assertion reached on a flow where machine and real control diverge"});
    }
    merge_verdict(v);
    if (v == Verdict::Invalid)
      add_alarm({AlarmKind::AssertionFailed, s.loc, "assertion is invalid"});
    else if (v == Verdict::Unknown && o.alarms.empty())
      add_alarm({AlarmKind::AssertionIndeterminate, s.loc, "assertion cannot be decided"});
  }

  // ---- split-merge sections

  /// Joins two states reaching a merge. Merge-list variables are joined in
  /// the abstract domain; any other variable that differs falls back to its
  /// value at the split if no path wrote it, and is poisoned otherwise.
  void merge_into(std::optional<Memory> &sigma, const Memory &m, const SectionRun &sec, const Memory &saved) {
    if (!sigma) {
      sigma = m;
      return;
    }
    Memory &s = *sigma;
    const int depth = static_cast<int>(m.frames.size()) - 1;
    std::set<std::string> merged;
    for (const auto &name : sec.stmt->section.merge_list)
      merged.insert(write_key(m.locate(name)));

    auto join_var = [&](int frame, const std::string &name, Variable *sv, const Variable *mv, const Variable *old) {
      const std::string key = write_key({frame, name});
      if (!sv)
        return;
      if (!mv) {
        for (auto &c : sv->cells)
          c.tag = Cell::Tag::Poison;
        return;
      }
      if (sv->ref || mv->ref)
        return;
      const bool in_list = merged.count(key) != 0;
      const bool written = sec.writes.count(key) != 0;
      for (std::size_t i = 0; i < sv->cells.size() && i < mv->cells.size(); ++i) {
        Cell &a = sv->cells[i];
        const Cell &b = mv->cells[i];
        if (in_list && a.tag == Cell::Tag::Float && b.tag == Cell::Tag::Float) {
          a.f = union_of(a.f, s.ranges, b.f, m.ranges, table_);
          continue;
        }
        if (a.same_as(b))
          continue;
        if (!written && old && i < old->cells.size())
          a = old->cells[i];
        else
          a.tag = Cell::Tag::Poison;
      }
    };
    auto join_scope = [&](int frame, std::map<std::string, Variable> &sv, const std::map<std::string, Variable> &mv,
                          const std::map<std::string, Variable> *old) {
      for (auto &[name, v] : sv) {
        auto it = mv.find(name);
        const Variable *o = nullptr;
        if (old) {
          auto jt = old->find(name);
          if (jt != old->end())
            o = &jt->second;
        }
        join_var(frame, name, &v, it == mv.end() ? nullptr : &it->second, o);
      }
      for (const auto &[name, v] : mv)
        if (!sv.count(name)) {
          Variable p = v;
          for (auto &c : p.cells)
            c.tag = Cell::Tag::Poison;
          sv[name] = std::move(p);
        }
    };
    join_scope(-1, s.globals, m.globals, &saved.globals);
    for (int f = 0; f <= depth; ++f) {
      const auto fi = static_cast<std::size_t>(f);
      join_scope(f, s.frames[fi].vars, m.frames[fi].vars, &saved.frames[fi].vars);
      auto &ra = s.frames[fi].ret;
      const auto &rb = m.frames[fi].ret;
      if (ra && rb && ra->tag == Cell::Tag::Float && rb->tag == Cell::Tag::Float)
        ra->f = union_of(ra->f, s.ranges, rb->f, m.ranges, table_);
      else if (!(ra && rb && ra->same_as(*rb)) && (ra || rb)) {
        if (!ra)
          ra = *rb;
        ra->tag = Cell::Tag::Poison;
      }
    }
    s.ranges = s.ranges.join(m.ranges);
  }

  /// Key identifying the decision at which the current path's float and real
  /// control diverged, independent of which side it then followed.
  static std::string divergence_key(const std::vector<Decision> &taken) {
    std::string key;
    for (const auto &d : taken) {
      const Flow &f = d.options[d.choice];
      if (f.diverges())
        return key + "|" + std::to_string(d.site) + ":" + std::to_string(f.cf) + std::to_string(f.cr) + ":" +
               std::to_string(f.kf) + ":" + std::to_string(f.kr);
      key += std::to_string(d.choice) + ",";
    }
    throw std::logic_error("divergent path without a divergent decision");
  }

  /// Combines the machine side of one divergence with its real side for
  /// the merge-list variables: machine values come from the paths that
  /// followed the machine branch, real values from those that followed the
  /// real branch, and the error is their difference. Both sides describe the
  /// same concrete inputs, so symbols they share keep their correlation;
  /// symbols introduced on one side only are independent of the other.
  Memory combine(const DivergentGroup &g, const SectionRun &sec) {
    Memory c = *g.float_side;
    const Memory &r = *g.real_side;
    c.ranges = g.float_side->ranges.join(r.ranges);
    for (const auto &name : sec.stmt->section.merge_list) {
      Variable *fv = c.find(name);
      const Variable *rv = r.find(name);
      if (!fv || !rv)
        continue;
      for (std::size_t i = 0; i < fv->cells.size(); ++i) {
        Cell &a = fv->cells[i];
        const Cell *b = i < rv->cells.size() ? &rv->cells[i] : nullptr;
        if (a.tag != Cell::Tag::Float || !b || b->tag != Cell::Tag::Float) {
          a.tag = Cell::Tag::Poison;
          continue;
        }
        AbstractFloat v;
        v.format = a.f.format;
        v.float_iv = a.f.float_iv;
        v.real_iv = b->f.real_range(r.ranges);
        v.err_iv = v.float_iv - v.real_iv;
        v.real = b->f.real;
        v.err = (a.f.real + a.f.err) - b->f.real;
        try {
          v.refine(c.ranges);
        } catch (const InfeasiblePath &) {
          // No input reaches both sides; keep the interval combination.
          v.real_iv = b->f.real_range(r.ranges);
          v.err_iv = v.float_iv - v.real_iv;
          v.real = AffineForm::from_interval(v.real_iv, table_, SymbolOrigin::Merge);
          v.err = AffineForm::from_interval(v.err_iv, table_, SymbolOrigin::Merge);
          v.refine(SymbolRanges{});
        }
        a.f = std::move(v);
      }
    }
    return c;
  }

  void exec_section(const Stmt &s) {
    const int id = s.section.id;
    SectionStats &stats = out_.sections[id];
    stats.id = id;
    stats.function = mem_.frames.back().fn->name;
    ++stats.executions;

    SectionRun run{&s, PathExplorer(id), mode_, {}};
    const Memory saved = mem_;
    std::optional<Memory> sigma;
    std::map<std::string, DivergentGroup> groups;
    sections_.push_back(&run);
    trace("section " + std::to_string(id) + ": split at " + s.loc.str());
    int iterations = 0;
    bool more = true;
    while (more) {
      mem_ = saved;
      mode_ = run.entry_mode;
      ++iterations;
      ++stats.paths;
      try {
        for (const auto &c : s.body)
          exec(*c);
        if (mode_ != run.entry_mode) {
          ++stats.divergent;
          DivergentGroup &g = groups[divergence_key(run.explorer.taken())];
          merge_into(mode_ == Mode::FloatOnly ? g.float_side : g.real_side, mem_, run, saved);
        } else {
          merge_into(sigma, mem_, run, saved);
        }
        trace("section " + std::to_string(id) + ": path " + std::to_string(iterations) + " reached the merge");
      } catch (const InfeasiblePath &e) {
        ++stats.abandoned;
        trace("section " + std::to_string(id) + ": path " + std::to_string(iterations) + " abandoned: " + e.what());
      } catch (const DomainAlarm &a) {
        ++stats.abandoned;
        alarm(a.kind(), a.what());
        trace("section " + std::to_string(id) + ": path " + std::to_string(iterations) + " stopped by alarm");
      }
      more = run.explorer.next_path();
      if (more && iterations >= cfg_.path_budget) {
        stats.budget_hit = true;
        warn("section " + std::to_string(id) + " in " + stats.function + ": path budget of " +
             std::to_string(cfg_.path_budget) + " exhausted; the merged state covers explored paths only");
        more = false;
      }
    }
    for (const auto &[key, g] : groups) {
      if (g.float_side && g.real_side)
        merge_into(sigma, combine(g, run), run, saved);
      else
        trace("section " + std::to_string(id) + ": divergent flow without a feasible counterpart dropped");
    }
    sections_.pop_back();
    for (SectionRun *outer : sections_)
      outer->writes.insert(run.writes.begin(), run.writes.end());
    mode_ = run.entry_mode;
    if (!sigma) {
      trace("section " + std::to_string(id) + ": no feasible path, leaving to the enclosing section");
      mem_ = saved;
      throw InfeasiblePath("section " + std::to_string(id) + " has no feasible path");
    }
    mem_ = std::move(*sigma);
    trace("section " + std::to_string(id) + ": merged " + std::to_string(iterations) + " path(s)");
  }

  const Program &p_;
  const ProgramInfo &info_;
  ExecConfig cfg_;
  SymbolTable table_;
  Memory mem_;
  DomainContext ctx_;
  Mode mode_ = Mode::Both;
  std::vector<SectionRun *> sections_;
  Loc loc_;
  Frame last_frame_;
  std::map<int, AssertionRecord> asserts_;
  ExecResult out_;
};

} // namespace

ExecResult execute(const Program &p, const ProgramInfo &info, const std::map<std::string, InputSpec> &inputs,
                   const ExecConfig &cfg) {
  return Executor(p, info, cfg).run(inputs);
}

} // namespace fldx
