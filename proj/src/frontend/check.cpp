#include "fldx/frontend/check.hpp"

#include <functional>
#include <set>

namespace fldx {

namespace {

Scalar promote(Scalar s) {
  switch (s) {
  case Scalar::Char:
  case Scalar::UChar:
  case Scalar::Short:
  case Scalar::UShort: return Scalar::Int;
  default: return s;
  }
}

class Checker {
public:
  explicit Checker(Program &p) : prog_(p) {}

  ProgramInfo run() {
    std::set<std::string> fnames;
    for (const auto &f : prog_.functions) {
      if (is_intrinsic(f.name))
        throw FrontendError(f.loc, "'" + f.name + "' is reserved");
      if (!fnames.insert(f.name).second)
        throw FrontendError(f.loc, "function '" + f.name + "' redefined");
    }
    // Globals.
    std::vector<std::map<std::string, Type>> scopes(1);
    scopes_ = &scopes;
    FunctionScope global_scope;
    for (const auto &g : prog_.globals) {
      if (fnames.count(g->name))
        throw FrontendError(g->loc, "'" + g->name + "' names a function");
      declare(*g, global_scope);
      global_scope.globals.push_back(g->name);
      for (const auto &e : g->init_list)
        require_constant(e);
      if (g->expr)
        require_constant(g->expr);
    }
    for (auto &f : prog_.functions) {
      FunctionScope fs = global_scope;
      current_ = &f;
      scopes.resize(1);
      scopes.emplace_back();
      for (const auto &pa : f.params) {
        if (fs.vars.count(pa.name) || fnames.count(pa.name))
          throw FrontendError(pa.loc, "parameter '" + pa.name + "' redeclares a visible name");
        fs.vars[pa.name] = pa.type;
        scopes.back()[pa.name] = pa.type;
      }
      fs_ = &fs;
      stmt_list(f.body->body);
      info_.scopes[f.name] = fs;
    }
    order_functions();
    return info_;
  }

private:
  void require_constant(const ExprPtr &e) {
    bool ok = true;
    walk_exprs(e, [&](const ExprPtr &x) {
      if (x->kind == ExprKind::Var || x->kind == ExprKind::Index || x->kind == ExprKind::Call)
        ok = false;
    });
    if (!ok)
      throw FrontendError(e->loc, "global initializer must be constant");
  }

  void declare(const Stmt &d, FunctionScope &fs) {
    if (fs.vars.count(d.name))
      throw FrontendError(d.loc, "'" + d.name + "' is already declared in this function");
    if (d.type.is_array() && d.type.array == 0)
      throw FrontendError(d.loc, "array '" + d.name + "' needs a size");
    if (d.expr)
      convertible(type_expr(d.expr), d.type, d.expr->loc);
    for (const auto &e : d.init_list)
      convertible(type_expr(e), Type{d.type.scalar}, e->loc);
    fs.vars[d.name] = d.type;
    scopes_->back()[d.name] = d.type;
  }

  void stmt_list(const std::vector<StmtPtr> &list) {
    scopes_->emplace_back();
    for (const auto &s : list)
      stmt(*s);
    scopes_->pop_back();
  }

  void stmt(Stmt &s) {
    switch (s.kind) {
    case StmtKind::Block: stmt_list(s.body); break;
    case StmtKind::Section:
      // Sections do not open a scope.
      for (const auto &c : s.body)
        stmt(*c);
      break;
    case StmtKind::Decl: declare(s, *fs_); break;
    case StmtKind::Assign: {
      Type t = type_expr(s.target);
      if (t.is_array())
        throw FrontendError(s.loc, "cannot assign an array");
      Type r = type_expr(s.expr);
      if (s.compound) {
        if (*s.compound == BinOp::Mod && (!t.is_integral() || !r.is_integral()))
          throw FrontendError(s.loc, "'%=' needs integer operands");
      }
      convertible(r, t, s.expr->loc);
      break;
    }
    case StmtKind::Call: {
      Type t = type_expr(s.expr);
      (void)t;
      break;
    }
    case StmtKind::If:
      condition(s.expr);
      stmt(*s.then_s);
      if (s.else_s)
        stmt(*s.else_s);
      break;
    case StmtKind::While:
    case StmtKind::DoWhile:
      condition(s.expr);
      stmt(*s.then_s);
      break;
    case StmtKind::Return:
      if (s.expr) {
        if (current_->ret.scalar == Scalar::Void)
          throw FrontendError(s.loc, "void function returns a value");
        convertible(type_expr(s.expr), current_->ret, s.expr->loc);
      } else if (current_->ret.scalar != Scalar::Void && current_->name != "main") {
        throw FrontendError(s.loc, "missing return value");
      }
      break;
    case StmtKind::Assert: pred(*s.pred); break;
    }
  }

  void condition(const ExprPtr &e) {
    Type t = type_expr(e);
    if (t.is_array() || t.scalar == Scalar::Void)
      throw FrontendError(e->loc, "condition must be scalar");
  }

  void convertible(const Type &from, const Type &to, Loc loc) {
    if (from.is_array() || to.is_array() || from.scalar == Scalar::Void)
      throw FrontendError(loc, "cannot convert " + from.str() + " to " + to.str());
  }

  const Type *lookup(const std::string &name) const {
    for (auto it = scopes_->rbegin(); it != scopes_->rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return &f->second;
    }
    return nullptr;
  }

  Type type_expr(const ExprPtr &e) {
    Type t;
    switch (e->kind) {
    case ExprKind::IntLit: {
      const std::string &txt = e->text;
      bool uns = txt.find_first_of("uU") != std::string::npos;
      bool lng = txt.find_first_of("lL") != std::string::npos;
      Scalar s = uns ? (lng ? Scalar::ULong : Scalar::UInt) : (lng ? Scalar::Long : Scalar::Int);
      if (e->value > int_max(s))
        s = uns || e->value > int_max(Scalar::Long) ? Scalar::ULong : Scalar::Long;
      if (e->value > int_max(Scalar::ULong))
        throw FrontendError(e->loc, "integer constant too large");
      t.scalar = s;
      break;
    }
    case ExprKind::FloatLit:
      t.scalar = (e->text.back() == 'f' || e->text.back() == 'F') ? Scalar::Float : Scalar::Double;
      break;
    case ExprKind::Var: {
      const Type *v = lookup(e->name);
      if (!v)
        throw FrontendError(e->loc, "'" + e->name + "' is not declared");
      t = *v;
      break;
    }
    case ExprKind::Index: {
      const Type *v = lookup(e->name);
      if (!v)
        throw FrontendError(e->loc, "'" + e->name + "' is not declared");
      if (!v->is_array())
        throw FrontendError(e->loc, "'" + e->name + "' is not an array");
      Type i = type_expr(e->args[0]);
      if (!i.is_integral())
        throw FrontendError(e->args[0]->loc, "array index must be an integer");
      t.scalar = v->scalar;
      break;
    }
    case ExprKind::Unary: {
      Type a = scalar_operand(e->args[0]);
      if (e->unop == UnOp::Not)
        t.scalar = Scalar::Int;
      else
        t.scalar = promote(a.scalar);
      break;
    }
    case ExprKind::Binary: {
      Type a = scalar_operand(e->args[0]);
      Type b = scalar_operand(e->args[1]);
      if (is_comparison(e->binop) || e->binop == BinOp::And || e->binop == BinOp::Or) {
        t.scalar = Scalar::Int;
      } else {
        if (e->binop == BinOp::Mod && (!a.is_integral() || !b.is_integral()))
          throw FrontendError(e->loc, "'%' needs integer operands");
        t.scalar = arith_result(a.scalar, b.scalar);
      }
      break;
    }
    case ExprKind::Cond: {
      scalar_operand(e->args[0]);
      Type a = scalar_operand(e->args[1]);
      Type b = scalar_operand(e->args[2]);
      t.scalar = arith_result(a.scalar, b.scalar);
      break;
    }
    case ExprKind::Cast:
      scalar_operand(e->args[0]);
      return e->type;
    case ExprKind::Call: t = call(e); break;
    }
    e->type = t;
    return t;
  }

  Type scalar_operand(const ExprPtr &e) {
    Type t = type_expr(e);
    if (t.is_array() || t.scalar == Scalar::Void)
      throw FrontendError(e->loc, "operand must be a scalar value");
    return t;
  }

  Type call(const ExprPtr &e) {
    Type t;
    if (e->name == "read_double" || e->name == "read_float") {
      if (e->args.size() != 4)
        throw FrontendError(e->loc, e->name + " expects 4 arguments (lo, hi, err_lo, err_hi)");
      for (const auto &a : e->args) {
        if (a->kind != ExprKind::IntLit && a->kind != ExprKind::FloatLit &&
            !(a->kind == ExprKind::Unary && a->unop == UnOp::Neg &&
              (a->args[0]->kind == ExprKind::IntLit || a->args[0]->kind == ExprKind::FloatLit)))
          throw FrontendError(a->loc, e->name + " bounds must be numeric constants");
        scalar_operand(a);
      }
      t.scalar = e->name == "read_double" ? Scalar::Double : Scalar::Float;
      return t;
    }
    if (e->name == "__assume") {
      if (e->args.size() != 1)
        throw FrontendError(e->loc, "__assume expects 1 argument");
      scalar_operand(e->args[0]);
      t.scalar = Scalar::Void;
      return t;
    }
    const Function *f = prog_.find(e->name);
    if (!f)
      throw FrontendError(e->loc, "call to undefined function '" + e->name + "'");
    if (f->params.size() != e->args.size())
      throw FrontendError(e->loc, "'" + e->name + "' expects " + std::to_string(f->params.size()) + " argument(s)");
    calls_[current_->name].insert(e->name);
    for (std::size_t i = 0; i < e->args.size(); ++i) {
      const Param &pa = f->params[i];
      const ExprPtr &a = e->args[i];
      if (pa.type.is_array()) {
        if (a->kind != ExprKind::Var)
          throw FrontendError(a->loc, "array argument must be an array variable");
        Type at = type_expr(a);
        if (!at.is_array() || at.scalar != pa.type.scalar)
          throw FrontendError(a->loc, "argument " + std::to_string(i + 1) + " must be " + pa.type.str());
        if (pa.type.array > 0 && at.array > 0 && at.array != pa.type.array)
          throw FrontendError(a->loc, "array length mismatch");
      } else {
        convertible(scalar_operand(a), pa.type, a->loc);
      }
    }
    return f->ret;
  }

  // Annotations: left-values must be visible; binders are checked by the parser.
  void pred(const Pred &p) {
    for (const auto &t : p.terms)
      term(*t);
    for (const auto &q : p.preds)
      pred(*q);
    if (p.kind == PredKind::Builtin) {
      const Term &subject = *p.terms[0];
      if (subject.kind != TermKind::LVal)
        throw FrontendError(subject.loc, p.name + " needs a variable as first argument");
    }
  }

  void term(const Term &t) {
    for (const auto &a : t.args)
      term(*a);
    if (t.kind == TermKind::LVal) {
      const Type *v = lookup(t.name);
      if (!v)
        throw FrontendError(t.loc, "'" + t.name + "' is not declared here");
      if (v->is_array() != !t.args.empty())
        throw FrontendError(t.loc, v->is_array() ? "array '" + t.name + "' needs an index"
                                                 : "'" + t.name + "' is not an array");
    }
    if (t.kind == TermKind::Builtin && t.args[0]->kind != TermKind::LVal)
      throw FrontendError(t.loc, t.name + " needs a variable argument");
  }

  void order_functions() {
    std::map<std::string, int> state;
    std::function<void(const std::string &)> visit = [&](const std::string &n) {
      int &st = state[n];
      if (st == 2)
        return;
      if (st == 1) {
        const Function *f = prog_.find(n);
        throw FrontendError(f ? f->loc : Loc{}, "recursion through '" + n + "' is not supported");
      }
      st = 1;
      for (const auto &c : calls_[n])
        visit(c);
      st = 2;
      info_.bottom_up.push_back(n);
    };
    for (const auto &f : prog_.functions)
      visit(f.name);
  }

  Program &prog_;
  ProgramInfo info_;
  std::vector<std::map<std::string, Type>> *scopes_ = nullptr;
  FunctionScope *fs_ = nullptr;
  const Function *current_ = nullptr;
  std::map<std::string, std::set<std::string>> calls_;
};

} // namespace

bool is_intrinsic(const std::string &name) {
  return name == "read_double" || name == "read_float" || name == "__assume";
}

Scalar arith_result(Scalar a, Scalar b) {
  if (a == Scalar::Double || b == Scalar::Double)
    return Scalar::Double;
  if (a == Scalar::Float || b == Scalar::Float)
    return Scalar::Float;
  a = promote(a);
  b = promote(b);
  if (a == b)
    return a;
  const int ba = int_bits(a), bb = int_bits(b);
  if (ba == bb)
    return is_unsigned(a) ? a : b;
  // 64-bit types represent every 32-bit value, signed or not.
  return ba > bb ? a : b;
}

} // namespace fldx

namespace fldx {

ProgramInfo check_program(Program &p) { return Checker(p).run(); }

} // namespace fldx
