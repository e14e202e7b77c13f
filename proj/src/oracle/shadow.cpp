#include "fldx/oracle/shadow.hpp"

#include "fldx/spec/eval.hpp"

#include <memory>
#include <stdexcept>

namespace fldx {

namespace {

struct Stop : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Val {
  Scalar type = Scalar::Int;
  Rational v;
};

using Cells = std::vector<std::optional<Rational>>;

struct Var {
  Type type;
  std::shared_ptr<Cells> cells;
};

struct Frame {
  Scalar ret_type = Scalar::Void;
  std::map<std::string, Var> vars;
  std::optional<Val> ret;
};

class Interp {
public:
  Interp(const Program &p, Semantics sem, const DrawFn &draw, std::optional<FloatFormat> fmt)
      : p_(p), sem_(sem), draw_(draw), fmt_(fmt) {}

  ConcreteRun run(const std::map<std::string, ConcreteInput> &inputs, const std::string &entry) {
    try {
      for (const auto &g : p_.globals)
        declare(*g, true);
      const Function *f = p_.find(entry);
      if (!f)
        throw Stop("no function '" + entry + "'");
      std::vector<Val> args;
      for (const auto &pa : f->params) {
        auto it = inputs.find(pa.name);
        if (pa.type.is_array() || it == inputs.end())
          throw Stop("no input for '" + pa.name + "'");
        const Rational &x = sem_ == Semantics::Machine ? it->second.machine : it->second.real;
        args.push_back({pa.type.scalar, x});
      }
      std::optional<Val> r = call(*f, args, {});
      if (r && is_float(r->type))
        out_.result = r->v;
    } catch (const Stop &e) {
      out_.error = e.what();
    } catch (const NumericError &e) {
      out_.error = e.what();
    }
    return std::move(out_);
  }

private:
  FloatFormat format(Scalar s) const {
    if (fmt_)
      return *fmt_;
    return s == Scalar::Float ? FloatFormat::binary32() : FloatFormat::binary64();
  }

  Rational round(const Rational &x, Scalar t) const {
    return sem_ == Semantics::Machine ? round_nearest(x, format(t)).value() : x;
  }

  Rational int_fit(const Rational &v, Scalar t) const {
    if (v >= int_min(t) && v <= int_max(t))
      return v;
    if (is_unsigned(t))
      return machine_int_op(BinOp::Add, v, Rational(0), t);
    throw Stop("integer overflow in " + to_string(t));
  }

  Val convert(const Val &x, Scalar to) {
    if (x.type == to)
      return x;
    if (is_float(to))
      return {to, round(x.v, to)};
    if (!is_float(x.type))
      return {to, int_fit(x.v, to)};
    BigInt k = x.v.trunc();
    if (Rational(k) < int_min(to) || Rational(k) > int_max(to))
      throw Stop("cast out of range");
    out_.decisions.push_back(static_cast<long>(k.to_i64()));
    return {to, Rational(k)};
  }

  Var *find(const std::string &name) {
    if (!frames_.empty()) {
      auto it = frames_.back().vars.find(name);
      if (it != frames_.back().vars.end())
        return &it->second;
    }
    auto it = globals_.find(name);
    return it == globals_.end() ? nullptr : &it->second;
  }

  std::optional<Rational> &cell(const ExprPtr &e) {
    Var *v = find(e->name);
    if (!v)
      throw Stop("unknown variable '" + e->name + "'");
    std::size_t i = 0;
    if (e->kind == ExprKind::Index) {
      Val ix = eval(e->args[0]);
      if (ix.v < Rational(0) || ix.v >= Rational(static_cast<long>(v->cells->size())))
        throw Stop("index out of bounds");
      i = static_cast<std::size_t>(ix.v.trunc().to_i64());
    }
    return (*v->cells)[i];
  }

  Val read(const ExprPtr &e) {
    std::optional<Rational> &c = cell(e);
    if (!c)
      throw Stop("'" + e->name + "' read before being written");
    return {e->type.scalar, *c};
  }

  bool truth(const ExprPtr &e) {
    bool b = !eval(e).v.is_zero();
    if (e->kind == ExprKind::Binary && (e->binop == BinOp::And || e->binop == BinOp::Or))
      return b;
    if (e->kind == ExprKind::Unary && e->unop == UnOp::Not)
      return b;
    out_.decisions.push_back(b ? 1 : 0);
    return b;
  }

  static bool compare(BinOp op, const Rational &a, const Rational &b) {
    switch (op) {
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    default: throw std::logic_error("not a comparison");
    }
  }

  Val arith(BinOp op, const Val &a, const Val &b, Scalar t) {
    if ((op == BinOp::Div || op == BinOp::Mod) && b.v.is_zero())
      throw Stop("division by zero");
    if (!is_float(t)) {
      if (is_unsigned(t))
        return {t, machine_int_op(op, a.v, b.v, t)};
      Rational exact;
      switch (op) {
      case BinOp::Add: exact = a.v + b.v; break;
      case BinOp::Sub: exact = a.v - b.v; break;
      case BinOp::Mul: exact = a.v * b.v; break;
      default: return {t, int_fit(machine_int_op(op, a.v, b.v, Scalar::Long), t)};
      }
      return {t, int_fit(exact, t)};
    }
    Rational r;
    switch (op) {
    case BinOp::Add: r = a.v + b.v; break;
    case BinOp::Sub: r = a.v - b.v; break;
    case BinOp::Mul: r = a.v * b.v; break;
    case BinOp::Div: r = a.v / b.v; break;
    default: throw Stop("unsupported floating operator " + to_string(op));
    }
    return {t, round(r, t)};
  }

  static Rational literal(const ExprPtr &e) {
    if (e->kind == ExprKind::Unary)
      return -literal(e->args[0]);
    return e->value;
  }

  Val eval(const ExprPtr &e) {
    const Scalar t = e->type.scalar;
    switch (e->kind) {
    case ExprKind::IntLit: return {t, e->value};
    case ExprKind::FloatLit: return {t, round(e->value, t)};
    case ExprKind::Var:
    case ExprKind::Index: return read(e);
    case ExprKind::Unary: {
      if (e->unop == UnOp::Not)
        return {Scalar::Int, Rational(truth(e->args[0]) ? 0 : 1)};
      Val v = convert(eval(e->args[0]), t);
      if (e->unop == UnOp::Neg)
        v.v = is_float(t) ? -v.v : int_fit(-v.v, t);
      return v;
    }
    case ExprKind::Binary: {
      if (e->binop == BinOp::And || e->binop == BinOp::Or) {
        bool l = truth(e->args[0]);
        if (e->binop == BinOp::And ? !l : l)
          return {Scalar::Int, Rational(l ? 1 : 0)};
        return {Scalar::Int, Rational(truth(e->args[1]) ? 1 : 0)};
      }
      Val a = eval(e->args[0]);
      Val b = eval(e->args[1]);
      if (is_comparison(e->binop)) {
        const Scalar common = arith_result(a.type, b.type);
        a = convert(a, common);
        b = convert(b, common);
        return {Scalar::Int, Rational(compare(e->binop, a.v, b.v) ? 1 : 0)};
      }
      return arith(e->binop, convert(a, t), convert(b, t), t);
    }
    case ExprKind::Cond: return convert(eval(truth(e->args[0]) ? e->args[1] : e->args[2]), t);
    case ExprKind::Cast: return convert(eval(e->args[0]), t);
    case ExprKind::Call: {
      if (e->name == "read_double" || e->name == "read_float") {
        const Scalar rt = e->name == "read_double" ? Scalar::Double : Scalar::Float;
        RInterval range(literal(e->args[0]), literal(e->args[1]));
        RInterval err(literal(e->args[2]), literal(e->args[3]));
        ConcreteInput x = draw_(draws_++, rt, range, err);
        return {rt, sem_ == Semantics::Machine ? x.machine : x.real};
      }
      if (e->name == "__assume") {
        if (!truth(e->args[0]))
          throw Stop("assumption is false");
        return {Scalar::Int, Rational(0)};
      }
      const Function &f = *p_.find(e->name);
      std::vector<Val> args;
      std::vector<std::shared_ptr<Cells>> refs;
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (f.params[i].type.is_array()) {
          Var *v = find(e->args[i]->name);
          if (!v)
            throw Stop("unknown array '" + e->args[i]->name + "'");
          refs.push_back(v->cells);
          args.emplace_back();
        } else {
          refs.emplace_back();
          args.push_back(eval(e->args[i]));
        }
      }
      std::optional<Val> r = call(f, args, refs);
      return r ? *r : Val{};
    }
    }
    throw std::logic_error("bad expression");
  }

  std::optional<Val> call(const Function &f, const std::vector<Val> &args,
                          const std::vector<std::shared_ptr<Cells>> &refs) {
    Frame fr;
    fr.ret_type = f.ret.scalar;
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const Param &pa = f.params[i];
      Var v{pa.type, nullptr};
      if (i < refs.size() && refs[i])
        v.cells = refs[i];
      else
        v.cells = std::make_shared<Cells>(Cells{convert(args[i], pa.type.scalar).v});
      fr.vars[pa.name] = v;
    }
    frames_.push_back(std::move(fr));
    exec(*f.body);
    std::optional<Val> r = frames_.back().ret;
    frames_.pop_back();
    if (f.ret.scalar != Scalar::Void && !r)
      throw Stop(f.name + " ends without returning a value");
    return r;
  }

  void declare(const Stmt &s, bool global) {
    const std::size_t n = s.type.is_array() ? static_cast<std::size_t>(s.type.array) : 1;
    auto cells = std::make_shared<Cells>(n, global ? std::optional<Rational>(Rational(0)) : std::nullopt);
    if (s.expr)
      (*cells)[0] = convert(eval(s.expr), s.type.scalar).v;
    for (std::size_t i = 0; i < n && (i < s.init_list.size() || !s.init_list.empty()); ++i)
      (*cells)[i] = i < s.init_list.size() ? convert(eval(s.init_list[i]), s.type.scalar).v : Rational(0);
    // Initializers may call functions, so the scope is looked up afterwards.
    (global ? globals_ : frames_.back().vars)[s.name] = Var{s.type, cells};
  }

  void visit(const Stmt &s) {
    ConcreteVisit v;
    v.loc = s.loc;
    v.decisions = out_.decisions;
    auto add = [&](const std::map<std::string, Var> &vars) {
      for (const auto &[name, var] : vars) {
        if (!is_float(var.type.scalar))
          continue;
        if (!var.type.is_array()) {
          if ((*var.cells)[0] && !v.floats.count(name))
            v.floats[name] = *(*var.cells)[0];
          continue;
        }
        for (std::size_t i = 0; i < var.cells->size(); ++i) {
          std::string key = name + "[" + std::to_string(i) + "]";
          if ((*var.cells)[i] && !v.floats.count(key))
            v.floats[key] = *(*var.cells)[i];
        }
      }
    };
    add(frames_.back().vars);
    add(globals_);
    out_.visits.push_back(std::move(v));
  }

  void exec(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Block:
    case StmtKind::Section:
      for (const auto &c : s.body)
        exec(*c);
      break;
    case StmtKind::Decl: declare(s, false); break;
    case StmtKind::Assign: {
      const Scalar t = s.target->type.scalar;
      Val rhs = eval(s.expr);
      if (s.compound) {
        Val cur = read(s.target);
        const Scalar common = arith_result(cur.type, rhs.type);
        rhs = arith(*s.compound, convert(cur, common), convert(rhs, common), common);
      }
      Rational v = convert(rhs, t).v;
      cell(s.target) = v;
      break;
    }
    case StmtKind::Call: eval(s.expr); break;
    case StmtKind::If:
      if (truth(s.expr))
        exec(*s.then_s);
      else if (s.else_s)
        exec(*s.else_s);
      break;
    case StmtKind::While: {
      long n = 0;
      while (truth(s.expr))
        guard(n), exec(*s.then_s);
      break;
    }
    case StmtKind::DoWhile: {
      long n = 0;
      do
        guard(n), exec(*s.then_s);
      while (truth(s.expr));
      break;
    }
    case StmtKind::Return:
      if (s.expr)
        frames_.back().ret = convert(eval(s.expr), frames_.back().ret_type);
      break;
    case StmtKind::Assert: visit(s); break;
    }
  }

  static void guard(long &n) {
    if (++n > 100000000)
      throw Stop("loop bound exceeded");
  }

  const Program &p_;
  Semantics sem_;
  const DrawFn &draw_;
  std::optional<FloatFormat> fmt_;
  std::map<std::string, Var> globals_;
  std::vector<Frame> frames_;
  std::size_t draws_ = 0;
  ConcreteRun out_;
};

} // namespace

ConcreteRun run_concrete(const Program &p, const ProgramInfo &, Semantics sem,
                         const std::map<std::string, ConcreteInput> &inputs, const DrawFn &draw,
                         std::optional<FloatFormat> format, const std::string &entry) {
  return Interp(p, sem, draw, format).run(inputs, entry);
}

ShadowRun run_shadow(const Program &p, const ProgramInfo &info, const std::map<std::string, ConcreteInput> &inputs,
                     const DrawFn &draw, std::optional<FloatFormat> format, const std::string &entry) {
  std::map<std::size_t, ConcreteInput> memo;
  DrawFn shared = [&](std::size_t n, Scalar t, const RInterval &range, const RInterval &err) {
    auto it = memo.find(n);
    if (it == memo.end())
      it = memo.emplace(n, draw(n, t, range, err)).first;
    return it->second;
  };
  ConcreteRun m = run_concrete(p, info, Semantics::Machine, inputs, shared, format, entry);
  ConcreteRun r = run_concrete(p, info, Semantics::Real, inputs, shared, format, entry);
  ShadowRun out;
  out.error = !m.error.empty() ? "machine run: " + m.error : !r.error.empty() ? "real run: " + r.error : "";
  for (std::size_t i = 0; i < m.visits.size() && i < r.visits.size(); ++i) {
    const ConcreteVisit &a = m.visits[i];
    const ConcreteVisit &b = r.visits[i];
    if (a.loc.line != b.loc.line || a.loc.col != b.loc.col)
      break;
    ShadowVisit v;
    v.loc = a.loc;
    v.agreed = a.decisions == b.decisions;
    for (const auto &[name, x] : a.floats) {
      auto it = b.floats.find(name);
      if (it != b.floats.end())
        v.values[name] = {x, it->second};
    }
    out.visits.push_back(std::move(v));
  }
  if (m.result && r.result)
    out.result = ShadowValue{*m.result, *r.result};
  return out;
}

} // namespace fldx
